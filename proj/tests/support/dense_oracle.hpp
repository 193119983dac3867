#pragma once

// Literal full-dimensional estimator and rate evaluation used as an
// independent cross-check of the structure-exploiting implementation. The
// pilot block is vectorized column-major (antenna index fastest), the
// quantizer gain uses the general diagonal form, and the rate terms are
// written out with plain loops. Everything here goes through oracle::Mat.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support/oracle_linalg.hpp"

namespace dense_oracle {

using oracle::Mat;
using oracle::cd;

inline constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

inline Mat dft_pilots(std::size_t tau, std::size_t users) {
    Mat p(tau, users);
    for (std::size_t n = 0; n < tau; ++n)
        for (std::size_t k = 0; k < users; ++k)
            p.at(n, k) = std::polar(1.0, -2.0 * std::numbers::pi *
                                             static_cast<double>(n * k) /
                                             static_cast<double>(tau));
    return p;
}

struct Pipeline {
    std::size_t antennas, users, tau;
    double pilot_snr;
    Mat pilots;     // tau x users
    Mat c_rr;       // (M tau) x (M tau) quantized-output autocorrelation
    Mat phi_tilde;  // (M tau) x (M K) linearized pilot operator
    Mat combiner;   // (M K) x (M tau): phi_tilde^H c_rr^{-1}
    double eta_sq = 0.0;
    double mse = 1.0;
};

inline Pipeline build(std::size_t antennas, std::size_t users, std::size_t tau,
                      double pilot_snr) {
    Pipeline p;
    p.antennas = antennas;
    p.users = users;
    p.tau = tau;
    p.pilot_snr = pilot_snr;
    p.pilots = dft_pilots(tau, users);

    Mat scaled_eye = oracle::eye(antennas);
    for (auto& x : scaled_eye.v) x *= std::sqrt(pilot_snr);
    const Mat phi_bar = oracle::kron(p.pilots, scaled_eye);  // (M tau) x (M K)
    const std::size_t dim = antennas * tau;
    Mat c_yy = oracle::add(oracle::mul(phi_bar, oracle::adj(phi_bar)), oracle::eye(dim));

    std::vector<double> inv_sqrt_diag(dim);
    for (std::size_t i = 0; i < dim; ++i)
        inv_sqrt_diag[i] = 1.0 / std::sqrt(c_yy.at(i, i).real());

    // Same endpoint snap as the implementation: asin is ill-conditioned at
    // +/-1, where the normalized argument equals 1 only up to rounding.
    const auto arcsine = [](double x) {
        if (x >= 1.0 - 1e-12) return 1.0;
        if (x <= -1.0 + 1e-12) return -1.0;
        return kTwoOverPi * std::asin(x);
    };
    p.c_rr = Mat(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double scale = inv_sqrt_diag[i] * inv_sqrt_diag[j];
            p.c_rr.at(i, j) = cd{arcsine(c_yy.at(i, j).real() * scale),
                                 arcsine(c_yy.at(i, j).imag() * scale)};
        }
    }

    p.phi_tilde = Mat(dim, antennas * users);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < antennas * users; ++j)
            p.phi_tilde.at(i, j) = std::sqrt(kTwoOverPi) * inv_sqrt_diag[i] * phi_bar.at(i, j);

    const Mat c_inv = oracle::inv(p.c_rr);
    p.combiner = oracle::mul(oracle::adj(p.phi_tilde), c_inv);

    const Mat gain = oracle::mul(p.combiner, p.phi_tilde);  // (M K) x (M K)
    double trace = 0.0;
    for (std::size_t i = 0; i < gain.rows; ++i) trace += gain.at(i, i).real();
    p.eta_sq = trace / static_cast<double>(antennas * users);
    p.mse = 1.0 - p.eta_sq;
    return p;
}

// Estimate from an antennas x tau quantized block, returned antennas x users.
inline Mat estimate(const Pipeline& p, const Mat& observed) {
    Mat vec(p.antennas * p.tau, 1);
    for (std::size_t t = 0; t < p.tau; ++t)
        for (std::size_t m = 0; m < p.antennas; ++m)
            vec.at(t * p.antennas + m, 0) = observed.at(m, t);
    const Mat est_vec = oracle::mul(p.combiner, vec);
    Mat est(p.antennas, p.users);
    for (std::size_t k = 0; k < p.users; ++k)
        for (std::size_t m = 0; m < p.antennas; ++m)
            est.at(m, k) = est_vec.at(k * p.antennas + m, 0);
    return est;
}

// Per-user achievable-rate terms for one realization, written out literally.
inline std::vector<double> rates(const Mat& h_hat, const Mat& err, double data_snr,
                                 std::size_t users_total) {
    const std::size_t antennas = h_hat.rows;
    const double alpha = std::sqrt(kTwoOverPi / (static_cast<double>(users_total) * data_snr + 1.0));
    const double a2 = alpha * alpha;
    std::vector<double> out(h_hat.cols, 0.0);
    for (std::size_t k = 0; k < h_hat.cols; ++k) {
        cd self{};
        for (std::size_t m = 0; m < antennas; ++m)
            self += std::conj(h_hat.at(m, k)) * h_hat.at(m, k);
        const double num = data_snr * a2 * std::norm(self);
        double ui = 0.0;
        for (std::size_t i = 0; i < h_hat.cols; ++i) {
            if (i == k) continue;
            cd dot{};
            for (std::size_t m = 0; m < antennas; ++m)
                dot += std::conj(h_hat.at(m, k)) * h_hat.at(m, i);
            ui += data_snr * a2 * std::norm(dot);
        }
        double ee = 0.0;
        for (std::size_t i = 0; i < err.cols; ++i) {
            cd dot{};
            for (std::size_t m = 0; m < antennas; ++m)
                dot += std::conj(h_hat.at(m, k)) * err.at(m, i);
            ee += data_snr * a2 * std::norm(dot);
        }
        const double an = a2 * self.real();
        const double qn = (1.0 - kTwoOverPi) * self.real();
        if (num > 0.0) out[k] = std::log2(1.0 + num / (ui + ee + an + qn));
    }
    return out;
}

// Fully independent Monte Carlo of the ergodic rate: own RNG, own quantizer,
// own training simulation, literal estimator and rate expression.
inline std::vector<double> ergodic_rate_mc(std::size_t antennas, std::size_t users,
                                           std::size_t tau, double pilot_snr,
                                           double data_snr, std::size_t trials,
                                           std::uint64_t seed) {
    const Pipeline p = build(antennas, users, tau, pilot_snr);
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    std::vector<double> sums(users, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        Mat h(antennas, users);
        for (auto& x : h.v) x = cd{normal(eng), normal(eng)};
        Mat y(antennas, tau);
        for (std::size_t m = 0; m < antennas; ++m) {
            for (std::size_t n = 0; n < tau; ++n) {
                cd s{};
                for (std::size_t k = 0; k < users; ++k) s += h.at(m, k) * p.pilots.at(n, k);
                y.at(m, n) = std::sqrt(pilot_snr) * s + cd{normal(eng), normal(eng)};
            }
        }
        Mat r(antennas, tau);
        const double c = 1.0 / std::sqrt(2.0);
        for (std::size_t i = 0; i < y.v.size(); ++i)
            r.v[i] = cd{y.v[i].real() >= 0 ? c : -c, y.v[i].imag() >= 0 ? c : -c};
        const Mat h_hat = estimate(p, r);
        const Mat err = oracle::sub(h, h_hat);
        const auto bits = rates(h_hat, err, data_snr, users);
        for (std::size_t k = 0; k < users; ++k) sums[k] += bits[k];
    }
    for (auto& s : sums) s /= static_cast<double>(trials);
    return sums;
}

}  // namespace dense_oracle
