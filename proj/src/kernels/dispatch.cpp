#include "obmimo/kernels.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace obmimo::kernels {
namespace {

std::atomic<const KernelSet*> g_active{nullptr};

const KernelSet* pick() {
    if (const char* env = std::getenv("OBMIMO_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        if (std::strcmp(env, "avx2") == 0 && avx2_kernels() != nullptr) return avx2_kernels();
        if (std::strcmp(env, "neon") == 0 && neon_kernels() != nullptr) return neon_kernels();
        std::fprintf(stderr, "obmimo: OBMIMO_KERNELS=%s not available, using auto selection\n", env);
    }
    if (const KernelSet* k = avx2_kernels()) return k;
    if (const KernelSet* k = neon_kernels()) return k;
    return &scalar_kernels();
}

}  // namespace

const KernelSet& active_kernels() {
    const KernelSet* k = g_active.load(std::memory_order_acquire);
    if (k == nullptr) {
        k = pick();
        g_active.store(k, std::memory_order_release);
    }
    return *k;
}

void set_active_kernels(const KernelSet& k) {
    g_active.store(&k, std::memory_order_release);
}

}  // namespace obmimo::kernels
