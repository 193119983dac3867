#include "obmimo/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace obmimo {

CMatrix cholesky(const CMatrix& a, double pivot_tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > pivot_tol)) throw std::runtime_error("cholesky: matrix not positive definite");
        const double djj = std::sqrt(d);
        l(j, j) = cxd{djj, 0.0};
        for (std::size_t i = j + 1; i < n; ++i) {
            cxd s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / djj;
        }
    }
    return l;
}

CMatrix hermitian_solve(const CMatrix& a, const CMatrix& b, double pivot_tol) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hermitian_solve: shape mismatch");
    const CMatrix l = cholesky(a, pivot_tol);
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    // L y = b
    CMatrix x = b;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < m; ++c) {
            cxd s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i).real();
        }
    }
    // L^H x = y
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            cxd s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x(k, c);
            x(ii, c) = s / l(ii, ii).real();
        }
    }
    return x;
}

}  // namespace obmimo
