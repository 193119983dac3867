#pragma once

#include <complex>
#include <cstddef>

// Low-level arithmetic kernels behind the simulator's inner loops: complex
// matrix products and the one-bit quantizer. Every kernel has a scalar
// reference implementation and optional SIMD variants (AVX2 on x86-64, NEON
// on aarch64) selected once at startup. All variants must agree with the
// scalar reference to floating-point tolerance; the test suite enforces this.
//
// Matrices are row-major with an explicit leading dimension (elements, not
// bytes). Scaling factors are real because every call site scales by a real
// gain; this keeps the complex multiply count down.

namespace obmimo::kernels {

using cxd = std::complex<double>;

// C (m x n) = alpha * A (m x p) * B (p x n) + beta * C
using GemmNNFn = void (*)(std::size_t m, std::size_t n, std::size_t p,
                          double alpha, const cxd* a, std::size_t lda,
                          const cxd* b, std::size_t ldb, double beta, cxd* c,
                          std::size_t ldc);

// C (m x n) = alpha * A^H * B + beta * C, where A is stored p x m.
using GemmCNFn = GemmNNFn;

// out[i] = sign(in[i]) / sqrt(2) for n doubles, with sign(0) := +1. Applied
// to the interleaved real/imag parts of a complex block, so n is twice the
// number of complex entries.
using QuantizeFn = void (*)(const double* in, double* out, std::size_t n);

struct KernelSet {
    const char* name;
    GemmNNFn gemm_nn;
    GemmCNFn gemm_cn;
    QuantizeFn quantize;
};

const KernelSet& scalar_kernels();

// nullptr when the build target or the running CPU lacks the extension.
const KernelSet* avx2_kernels();
const KernelSet* neon_kernels();

// Runtime-selected set: best available, or the set named by the
// OBMIMO_KERNELS environment variable ("scalar", "avx2", "neon").
const KernelSet& active_kernels();

// Override the active set (used by the equivalence tests and benchmarks).
void set_active_kernels(const KernelSet& k);

}  // namespace obmimo::kernels
