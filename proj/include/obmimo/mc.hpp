#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "obmimo/cmatrix.hpp"

// Monte Carlo plumbing. Trials draw from per-index substreams of a master
// seed, so results do not depend on execution order or thread count; the
// reductions below use a fixed pairwise tree for the same reason.

namespace obmimo {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable mix of a master seed and a stream index (trial number, sweep row).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t index) {
    return std::mt19937_64(derive_seed(master, index));
}

// i.i.d. CN(0,1) entries: real and imaginary parts each N(0, 1/2).
inline void fill_complex_gaussian(CMatrix& m, std::mt19937_64& eng) {
    std::normal_distribution<double> normal(0.0, 0.70710678118654752440);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double re = normal(eng);
        const double im = normal(eng);
        m.data()[i] = cxd{re, im};
    }
}

// Deterministic sum independent of chunking decisions elsewhere.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Run body(trial) for trial in [0, trials) across `threads` workers
// (0 = hardware concurrency). Bodies must only write to disjoint slots.
template <typename Body>
void parallel_trials(std::size_t trials, unsigned threads, Body&& body) {
    unsigned n = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (n == 1 || trials < 2) {
        for (std::size_t t = 0; t < trials; ++t) body(t);
        return;
    }
    if (static_cast<std::size_t>(n) > trials) n = static_cast<unsigned>(trials);
    std::vector<std::thread> workers;
    workers.reserve(n);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < n; ++w) {
        const std::size_t lo = trials * w / n;
        const std::size_t hi = trials * (w + 1) / n;
        workers.emplace_back([&, lo, hi] {
            try {
                for (std::size_t t = lo; t < hi; ++t) body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace obmimo
