#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "obmimo/bussgang.hpp"
#include "obmimo/system_model.hpp"

// Maximum-ratio combining on the quantized data slot and the resulting
// achievable-rate machinery: a Monte Carlo evaluation of the ergodic lower
// bound, its closed-form approximation, an infinite-resolution baseline, and
// moment checks for the approximations feeding the closed form.

namespace obmimo {

// users x 1 soft symbols: estimate^H * observed.
CMatrix mrc_detect(const CMatrix& estimate, const QuantizedBlock& observed);

struct RateBreakdown {
    double signal = 0.0;             // desired-signal power
    double user_interference = 0.0;  // cross-user leakage through the combiner
    double estimation_noise = 0.0;   // channel-estimation-error leakage
    double awgn = 0.0;               // thermal noise after combining
    double quantization = 0.0;       // quantizer distortion after combining
    double rate_bits = 0.0;          // log2(1 + signal / (sum of the above))
};

// Per-user SINR decomposition for one channel realization. The quantizer
// residual enters through its Bussgang covariance (1 - 2/pi) * I.
std::vector<RateBreakdown> mrc_rate_breakdowns(const ChannelEstimate& estimate,
                                               double data_snr);

struct RateResult {
    std::vector<double> per_user;  // bits per channel use
    double mean = 0.0;
    std::size_t trials = 0;
    double std_err = 0.0;  // standard error of the mean over trials
};

enum class CsiMode { Estimated, Perfect };

// Ergodic rate lower bound by simulation: per trial draw a channel, run the
// training phase, estimate, and average the per-user log2(1 + SINR).
// Deterministic for a given config.seed, independent of thread count.
RateResult ergodic_rate_mc(const SystemConfig& config, std::size_t trials,
                           unsigned threads = 0, CsiMode csi = CsiMode::Estimated);

// Closed-form per-user rate for an MRC receiver on one-bit observations with
// estimate variance eta_sq:
//   log2(1 + snr*g^2*eta^2*(M+1) / (snr*g^2*(K - eta^2) + g^2 + 1 - 2/pi)).
double closed_form_rate(std::size_t antennas, std::size_t users, double data_snr,
                        double eta_sq);

// Infinite-resolution baseline: same structure with the quantization terms
// removed and the unquantized pilot estimate variance
// tau*rho_p / (1 + tau*rho_p).
double conventional_rate(std::size_t antennas, std::size_t users, double data_snr,
                         std::size_t training_len, double pilot_snr);

struct MomentCheck {
    std::string_view name;
    double simulated = 0.0;
    double predicted = 0.0;
    double rel_error() const;
};

// Simulated moments of the estimate against the closed-form predictions they
// are approximated by:
//   E||h_k||^2            -> eta^2 M
//   E|h_k^H h_i|^2, i!=k  -> eta^2 M
//   E|h_k^H A e_k|^2      -> g^2 eta^2 (1 - eta^2) M
//   E|h_k^H A h_k|^2      -> g^2 eta^4 (M^2 + M)
std::array<MomentCheck, 4> appendix_moments_mc(const SystemConfig& config,
                                               std::size_t trials, unsigned threads = 0);

}  // namespace obmimo
