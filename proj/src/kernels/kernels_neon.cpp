#include "obmimo/kernels.hpp"

// NEON variants for aarch64, where 128-bit SIMD is baseline. One complex
// double per register; the sign vector folds the +/- of the complex multiply
// into a single fma.

#if defined(__aarch64__)

#include <arm_neon.h>

namespace obmimo::kernels {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

inline void scale_row(cxd* row, std::size_t n, double beta) {
    double* p = reinterpret_cast<double*>(row);
    const std::size_t n2 = 2 * n;
    std::size_t i = 0;
    if (beta == 0.0) {
        const float64x2_t z = vdupq_n_f64(0.0);
        for (; i + 2 <= n2; i += 2) vst1q_f64(p + i, z);
        for (; i < n2; ++i) p[i] = 0.0;
    } else if (beta != 1.0) {
        const float64x2_t vb = vdupq_n_f64(beta);
        for (; i + 2 <= n2; i += 2) vst1q_f64(p + i, vmulq_f64(vb, vld1q_f64(p + i)));
        for (; i < n2; ++i) p[i] *= beta;
    }
}

// c[0..n) += (ar + i*ai) * b[0..n):
//   [cr, ci] += ar*[br, bi] + ai*[-bi, br]
inline void caxpy_row(double ar, double ai, const cxd* b, cxd* c, std::size_t n) {
    const double* pb = reinterpret_cast<const double*>(b);
    double* pc = reinterpret_cast<double*>(c);
    const float64x2_t var = vdupq_n_f64(ar);
    const float64x2_t vai = vdupq_n_f64(ai);
    const double sign_vals[2] = {-1.0, 1.0};
    const float64x2_t sign = vld1q_f64(sign_vals);
    for (std::size_t j = 0; j < n; ++j) {
        const float64x2_t bv = vld1q_f64(pb + 2 * j);
        const float64x2_t bswap = vmulq_f64(vextq_f64(bv, bv, 1), sign);
        float64x2_t cv = vld1q_f64(pc + 2 * j);
        cv = vfmaq_f64(cv, var, bv);
        cv = vfmaq_f64(cv, vai, bswap);
        vst1q_f64(pc + 2 * j, cv);
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
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t pos = vdupq_n_f64(kInvSqrt2);
    const float64x2_t neg = vdupq_n_f64(-kInvSqrt2);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t ge = vcgeq_f64(vld1q_f64(in + i), zero);
        vst1q_f64(out + i, vbslq_f64(ge, pos, neg));
    }
    for (; i < n; ++i) out[i] = (in[i] >= 0.0) ? kInvSqrt2 : -kInvSqrt2;
}

}  // namespace

const KernelSet* neon_kernels() {
    static const KernelSet set{"neon", &gemm_nn, &gemm_cn, &quantize};
    return &set;
}

}  // namespace obmimo::kernels

#else

namespace obmimo::kernels {
const KernelSet* neon_kernels() { return nullptr; }
}  // namespace obmimo::kernels

#endif
