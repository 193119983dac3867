#include "obmimo/kernels.hpp"

// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma on
// x86-64 targets; nothing here executes unless the running CPU reports both
// extensions (see avx2_kernels below).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace obmimo::kernels {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

inline void scale_row(cxd* row, std::size_t n, double beta) {
    double* p = reinterpret_cast<double*>(row);
    const std::size_t n2 = 2 * n;
    std::size_t i = 0;
    if (beta == 0.0) {
        const __m256d z = _mm256_setzero_pd();
        for (; i + 4 <= n2; i += 4) _mm256_storeu_pd(p + i, z);
        for (; i < n2; ++i) p[i] = 0.0;
    } else if (beta != 1.0) {
        const __m256d vb = _mm256_set1_pd(beta);
        for (; i + 4 <= n2; i += 4)
            _mm256_storeu_pd(p + i, _mm256_mul_pd(vb, _mm256_loadu_pd(p + i)));
        for (; i < n2; ++i) p[i] *= beta;
    }
}

// c[0..n) += (ar + i*ai) * b[0..n). Two complex values per 256-bit register;
// the swapped/fmaddsub pair yields [ar*br - ai*bi, ar*bi + ai*br] per entry.
inline void caxpy_row(double ar, double ai, const cxd* b, cxd* c, std::size_t n) {
    const double* pb = reinterpret_cast<const double*>(b);
    double* pc = reinterpret_cast<double*>(c);
    const __m256d var = _mm256_set1_pd(ar);
    const __m256d vai = _mm256_set1_pd(ai);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d b0 = _mm256_loadu_pd(pb + 2 * j);
        const __m256d b1 = _mm256_loadu_pd(pb + 2 * j + 4);
        const __m256d t0 = _mm256_mul_pd(vai, _mm256_permute_pd(b0, 0x5));
        const __m256d t1 = _mm256_mul_pd(vai, _mm256_permute_pd(b1, 0x5));
        __m256d c0 = _mm256_loadu_pd(pc + 2 * j);
        __m256d c1 = _mm256_loadu_pd(pc + 2 * j + 4);
        c0 = _mm256_add_pd(c0, _mm256_fmaddsub_pd(var, b0, t0));
        c1 = _mm256_add_pd(c1, _mm256_fmaddsub_pd(var, b1, t1));
        _mm256_storeu_pd(pc + 2 * j, c0);
        _mm256_storeu_pd(pc + 2 * j + 4, c1);
    }
    for (; j + 2 <= n; j += 2) {
        const __m256d b0 = _mm256_loadu_pd(pb + 2 * j);
        const __m256d t0 = _mm256_mul_pd(vai, _mm256_permute_pd(b0, 0x5));
        __m256d c0 = _mm256_loadu_pd(pc + 2 * j);
        c0 = _mm256_add_pd(c0, _mm256_fmaddsub_pd(var, b0, t0));
        _mm256_storeu_pd(pc + 2 * j, c0);
    }
    for (; j < n; ++j) {
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
    const __m256d zero = _mm256_setzero_pd();
    const __m256d pos = _mm256_set1_pd(kInvSqrt2);
    const __m256d neg = _mm256_set1_pd(-kInvSqrt2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(in + i);
        const __m256d ge = _mm256_cmp_pd(x, zero, _CMP_GE_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(neg, pos, ge));
    }
    for (; i < n; ++i) out[i] = (in[i] >= 0.0) ? kInvSqrt2 : -kInvSqrt2;
}

}  // namespace

const KernelSet* avx2_kernels() {
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const KernelSet set{"avx2", &gemm_nn, &gemm_cn, &quantize};
    return supported ? &set : nullptr;
}

}  // namespace obmimo::kernels

#else

namespace obmimo::kernels {
const KernelSet* avx2_kernels() { return nullptr; }
}  // namespace obmimo::kernels

#endif
