#include "obmimo/cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "obmimo/kernels.hpp"

namespace obmimo {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

CMatrix matmul(const CMatrix& a, const CMatrix& b, double alpha) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    CMatrix c(a.rows(), b.cols());
    kernels::active_kernels().gemm_nn(a.rows(), b.cols(), a.cols(), alpha, a.data(),
                                      a.cols(), b.data(), b.cols(), 0.0, c.data(), c.cols());
    return c;
}

void matmul_into(double alpha, const CMatrix& a, const CMatrix& b, double beta, CMatrix& c) {
    require(a.cols() == b.rows(), "matmul_into: inner dimensions differ");
    require(c.rows() == a.rows() && c.cols() == b.cols(), "matmul_into: output shape mismatch");
    kernels::active_kernels().gemm_nn(a.rows(), b.cols(), a.cols(), alpha, a.data(),
                                      a.cols(), b.data(), b.cols(), beta, c.data(), c.cols());
}

CMatrix herm_matmul(const CMatrix& a, const CMatrix& b, double alpha) {
    require(a.rows() == b.rows(), "herm_matmul: inner dimensions differ");
    CMatrix c(a.cols(), b.cols());
    kernels::active_kernels().gemm_cn(a.cols(), b.cols(), a.rows(), alpha, a.data(),
                                      a.cols(), b.data(), b.cols(), 0.0, c.data(), c.cols());
    return c;
}

CMatrix conjugate(const CMatrix& a) {
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = std::conj(a.data()[i]);
    return r;
}

CMatrix transpose(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "operator+: shape mismatch");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "operator-: shape mismatch");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

CMatrix operator*(cxd scale, const CMatrix& a) {
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) r.data()[i] = scale * a.data()[i];
    return r;
}

CMatrix kron_identity(const CMatrix& a, std::size_t m) {
    CMatrix r(a.rows() * m, a.cols() * m);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < m; ++k) r(i * m + k, j * m + k) = a(i, j);
    return r;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

}  // namespace obmimo
