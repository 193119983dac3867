#pragma once

#include "obmimo/cmatrix.hpp"
#include "obmimo/system_model.hpp"

// Bussgang linearization of the one-bit quantizer and the linear MMSE channel
// estimator built on it. For Gaussian input y the quantizer output splits as
// r = alpha*y + q with q uncorrelated with y; the residual q carries the
// constant per-sample distortion power 1 - 2/pi.
//
// DFT pilots make the received pilot block white across antennas, so the full
// (antennas * training_len)-dimensional autocorrelation is a training_len x
// training_len factor Kronecker-multiplied with the identity. Everything here
// works on that factor; the dense form exists only for small-instance
// validation.

namespace obmimo {

// Per-sample distortion power of the one-bit quantizer on Gaussian input.
inline constexpr double kQuantDistortion = 0.36338022763241865692;  // 1 - 2/pi

// Linear Bussgang gain for total receive power users*snr over unit noise:
// sqrt( (2/pi) / (users*snr + 1) ). Equals sqrt(2/pi) at zero power.
double bussgang_gain(std::size_t users, double snr);

struct PilotAutocorrelation {
    // training_len x training_len Hermitian factor with unit diagonal; the
    // full autocorrelation of the quantized pilot block is lag (x) I_antennas.
    CMatrix lag;

    // Materialized full-dimensional form, for validation at small sizes.
    CMatrix dense(std::size_t antennas) const { return kron_identity(lag, antennas); }
};

// Arcsine law applied to the normalized pilot covariance:
//   lag(i,j) = (2/pi) * [ asin(Re m_ij) + i asin(Im m_ij) ],
//   m_ij = (pilot_snr * [Phi Phi^H]_ij + delta_ij) / (users * pilot_snr + 1).
PilotAutocorrelation pilot_autocorrelation(const PilotMatrix& pilots, double pilot_snr);

struct EstimatorQuality {
    double eta_sq;    // per-entry variance of the estimate, in [0, 1]
    double mse;       // normalized estimation error, 1 - eta_sq
    double sigma_sq;  // low-SNR closed-form surrogate for eta_sq
};

// Quality of the LMMSE estimate for the given pilot block; independent of the
// antenna count, which factors out of the trace.
EstimatorQuality estimate_quality(const PilotMatrix& pilots, double pilot_snr);

// sigma^2 = a / (a + alpha^2 + 1 - 2/pi) with a = alpha^2 * length * snr.
// Closed-form surrogate for eta_sq; exact when length == users, and within a
// few percent of it whenever users * snr <= 0.1.
double low_snr_quality(std::size_t length, double pilot_snr, std::size_t users);

struct ChannelEstimate {
    CMatrix estimate;  // antennas x users
    CMatrix error;     // truth - estimate; empty when the truth is unknown
};

// Precomputes the per-antenna combiner so a Monte Carlo loop pays one solve
// per configuration instead of one per trial.
class LmmseEstimator {
public:
    LmmseEstimator(const PilotMatrix& pilots, double pilot_snr);

    // antennas x users estimate from a quantized training block.
    CMatrix estimate(const QuantizedBlock& observed) const;
    ChannelEstimate estimate_with_error(const QuantizedBlock& observed,
                                        const ChannelSample& truth) const;

private:
    std::size_t length_;
    std::size_t users_;
    CMatrix combiner_;  // conj(C^{-1} Phi) scaled by gain * sqrt(pilot_snr)
};

CMatrix lmmse_estimate(const QuantizedBlock& observed, const PilotMatrix& pilots,
                       double pilot_snr);
ChannelEstimate lmmse_estimate(const QuantizedBlock& observed, const PilotMatrix& pilots,
                               double pilot_snr, const ChannelSample& truth);

}  // namespace obmimo
