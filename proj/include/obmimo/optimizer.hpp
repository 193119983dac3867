#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

// Sum spectral efficiency over a coherence interval split into training and
// data symbols, its low-SNR closed form, and the training-length optimizers:
// Case I jointly splits a per-user energy budget between the two phases,
// Case II keeps the same power in both.

namespace obmimo {

// Per-user energy accounting over one coherence interval:
// total = average * coherence_len, and the phase powers for a split where a
// fraction gamma of the budget is spent on training.
struct EnergyBudget {
    std::size_t coherence_len = 0;
    double total = 0.0;    // energy per user per coherence interval
    double average = 0.0;  // total / coherence_len

    static EnergyBudget from_average_power(double rho, std::size_t coherence_len);
    static EnergyBudget from_total_energy(double total, std::size_t coherence_len);

    double pilot_snr(double gamma, std::size_t training_len) const;
    double data_snr(double gamma, std::size_t training_len) const;
};

// ((T - tau) / T) * sum of per-user rates.
double sum_spectral_efficiency(std::span<const double> per_user_rates,
                               std::size_t training_len, std::size_t coherence_len);

// Low-SNR closed form of the one-bit sum spectral efficiency, built on the
// surrogate estimate variance.
double low_snr_se(std::size_t antennas, std::size_t users, std::size_t coherence_len,
                  std::size_t training_len, double pilot_snr, double data_snr);

// Same duty-cycle weighting around the infinite-resolution baseline rate.
double conventional_se(std::size_t antennas, std::size_t users, std::size_t coherence_len,
                       std::size_t training_len, double pilot_snr, double data_snr);

// Coefficients of the rational SINR form in (gamma, tau):
//   SINR = a1*tau / (a2*tau^2 + a3*tau + a4).
// a2 is negative: the quadratic term enters the denominator with a minus
// sign, which the cross-form identity against low_snr_se pins down.
struct SeCoefficients {
    double a1, a2, a3, a4;
};
SeCoefficients se_coefficients(double gamma, std::size_t antennas, std::size_t users,
                               std::size_t coherence_len, double total_energy);

// Sum spectral efficiency as a function of the training energy fraction and a
// (real-valued) training length, under the budget substitution
// pilot_snr = gamma*P/tau, data_snr = (1-gamma)*P/(T-tau). Identical to
// low_snr_se under that substitution.
double se_gamma_tau(double gamma, double training_len, std::size_t antennas,
                    std::size_t users, std::size_t coherence_len, double total_energy);

enum class SeModel { OneBit, Conventional };

struct OptimizationResult {
    std::size_t tau_star = 0;
    std::optional<double> gamma_star;  // set for Case I only
    double se_star = 0.0;
    struct TracePoint {
        std::size_t tau;
        double gamma;
        double se;
    };
    std::vector<TracePoint> trace;  // one entry per candidate training length
};

// Case I: scan integer training lengths in [users, T-1]; for each, maximize
// over the energy split by golden-section search (the surface is empirically
// unimodal in gamma; an audit on a dense gamma grid at the winner falls back
// to exhaustive grid search if that ever fails). Ties break toward the
// shortest training length.
OptimizationResult optimize_case1(std::size_t antennas, std::size_t users,
                                  std::size_t coherence_len, double total_energy,
                                  SeModel model = SeModel::OneBit);

// Case II: equal training and data power; exhaustive scan over the integer
// training length.
OptimizationResult optimize_case2(std::size_t antennas, std::size_t users,
                                  std::size_t coherence_len, double rho,
                                  SeModel model = SeModel::OneBit);

namespace detail {
// Strict interior local maxima of a sampled curve, up to an absolute slack;
// used by the unimodality audit.
std::size_t count_strict_local_maxima(std::span<const double> values, double slack);
}  // namespace detail

}  // namespace obmimo
