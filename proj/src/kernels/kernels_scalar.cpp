#include "obmimo/kernels.hpp"

#include <cmath>

// Reference kernels. Written with an explicit multiply so the operation
// order matches the SIMD variants: for each output element the products are
// accumulated over the inner index in ascending order.

namespace obmimo::kernels {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

inline void scale_row(cxd* row, std::size_t n, double beta) {
    if (beta == 0.0) {
        for (std::size_t j = 0; j < n; ++j) row[j] = cxd{0.0, 0.0};
    } else if (beta != 1.0) {
        for (std::size_t j = 0; j < n; ++j) row[j] *= beta;
    }
}

// c[0..n) += (ar + i*ai) * b[0..n)
inline void caxpy_row(double ar, double ai, const cxd* b, cxd* c, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double br = b[j].real();
        const double bi = b[j].imag();
        c[j] = cxd{c[j].real() + ar * br - ai * bi, c[j].imag() + ar * bi + ai * br};
    }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t p, double alpha,
             const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
             double beta, cxd* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        cxd* crow = c + i * ldc;
        scale_row(crow, n, beta);
        if (alpha == 0.0) continue;
        const cxd* arow = a + i * lda;
        for (std::size_t l = 0; l < p; ++l) {
            caxpy_row(alpha * arow[l].real(), alpha * arow[l].imag(), b + l * ldb, crow, n);
        }
    }
}

void gemm_cn(std::size_t m, std::size_t n, std::size_t p, double alpha,
             const cxd* a, std::size_t lda, const cxd* b, std::size_t ldb,
             double beta, cxd* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        cxd* crow = c + i * ldc;
        scale_row(crow, n, beta);
        if (alpha == 0.0) continue;
        for (std::size_t l = 0; l < p; ++l) {
            const cxd aval = a[l * lda + i];
            caxpy_row(alpha * aval.real(), -alpha * aval.imag(), b + l * ldb, crow, n);
        }
    }
}

void quantize(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (in[i] >= 0.0) ? kInvSqrt2 : -kInvSqrt2;
    }
}

}  // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set{"scalar", &gemm_nn, &gemm_cn, &quantize};
    return set;
}

}  // namespace obmimo::kernels
