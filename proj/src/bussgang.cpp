#include "obmimo/bussgang.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "obmimo/linalg.hpp"

namespace obmimo {
namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// (2/pi) * asin(x), snapping arguments within 1e-12 of +/-1 to the exact
// endpoint. asin has unbounded slope there, so rounding in a unit-correlation
// argument would otherwise blow up to ~1e-8 in the result.
double arcsine_law(double x) {
    if (x >= 1.0 - 1e-12) return 1.0;
    if (x <= -1.0 + 1e-12) return -1.0;
    return kTwoOverPi * std::asin(x);
}

}  // namespace

double bussgang_gain(std::size_t users, double snr) {
    if (users < 1) throw std::invalid_argument("bussgang_gain: users must be >= 1");
    if (!(snr >= 0.0)) throw std::invalid_argument("bussgang_gain: snr must be >= 0");
    return std::sqrt(kTwoOverPi / (static_cast<double>(users) * snr + 1.0));
}

PilotAutocorrelation pilot_autocorrelation(const PilotMatrix& pilots, double pilot_snr) {
    if (!(pilot_snr >= 0.0))
        throw std::invalid_argument("pilot_autocorrelation: pilot_snr must be >= 0");
    const std::size_t length = pilots.length();
    const double denom = static_cast<double>(pilots.users()) * pilot_snr + 1.0;
    // Row Gram of the pilot block; its diagonal equals the user count.
    const CMatrix gram = herm_matmul(adjoint(pilots.entries), adjoint(pilots.entries));
    // Hermitian by construction; the diagonal argument is 1 up to rounding
    // and lands on exactly 1 + 0i through the endpoint snap.
    PilotAutocorrelation corr{CMatrix(length, length)};
    for (std::size_t i = 0; i < length; ++i) {
        corr.lag(i, i) = cxd{arcsine_law((pilot_snr * gram(i, i).real() + 1.0) / denom), 0.0};
        for (std::size_t j = i + 1; j < length; ++j) {
            const cxd m = pilot_snr * gram(i, j) / denom;
            const cxd v{arcsine_law(m.real()), arcsine_law(m.imag())};
            corr.lag(i, j) = v;
            corr.lag(j, i) = std::conj(v);
        }
    }
    return corr;
}

EstimatorQuality estimate_quality(const PilotMatrix& pilots, double pilot_snr) {
    const double gain = bussgang_gain(pilots.users(), pilot_snr);
    const PilotAutocorrelation corr = pilot_autocorrelation(pilots, pilot_snr);
    const CMatrix solved = hermitian_solve(corr.lag, pilots.entries);
    double trace = 0.0;
    for (std::size_t t = 0; t < pilots.length(); ++t)
        for (std::size_t k = 0; k < pilots.users(); ++k)
            trace += (std::conj(pilots.entries(t, k)) * solved(t, k)).real();
    const double eta_sq = gain * gain * pilot_snr * trace / static_cast<double>(pilots.users());
    return EstimatorQuality{eta_sq, 1.0 - eta_sq,
                            low_snr_quality(pilots.length(), pilot_snr, pilots.users())};
}

double low_snr_quality(std::size_t length, double pilot_snr, std::size_t users) {
    if (length < 1) throw std::invalid_argument("low_snr_quality: length must be >= 1");
    const double gain = bussgang_gain(users, pilot_snr);
    const double a = gain * gain * static_cast<double>(length) * pilot_snr;
    if (a == 0.0) return 0.0;
    return a / (a + gain * gain + kQuantDistortion);
}

LmmseEstimator::LmmseEstimator(const PilotMatrix& pilots, double pilot_snr)
    : length_(pilots.length()), users_(pilots.users()) {
    const double scale = bussgang_gain(users_, pilot_snr) * std::sqrt(pilot_snr);
    const PilotAutocorrelation corr = pilot_autocorrelation(pilots, pilot_snr);
    const CMatrix solved = hermitian_solve(corr.lag, pilots.entries);
    combiner_ = CMatrix(length_, users_);
    for (std::size_t i = 0; i < solved.size(); ++i)
        combiner_.data()[i] = scale * std::conj(solved.data()[i]);
}

CMatrix LmmseEstimator::estimate(const QuantizedBlock& observed) const {
    if (observed.entries.cols() != length_)
        throw std::invalid_argument("lmmse: observation length mismatch");
    return matmul(observed.entries, combiner_);
}

ChannelEstimate LmmseEstimator::estimate_with_error(const QuantizedBlock& observed,
                                                    const ChannelSample& truth) const {
    ChannelEstimate result;
    result.estimate = estimate(observed);
    result.error = truth.h - result.estimate;
    return result;
}

CMatrix lmmse_estimate(const QuantizedBlock& observed, const PilotMatrix& pilots,
                       double pilot_snr) {
    return LmmseEstimator(pilots, pilot_snr).estimate(observed);
}

ChannelEstimate lmmse_estimate(const QuantizedBlock& observed, const PilotMatrix& pilots,
                               double pilot_snr, const ChannelSample& truth) {
    return LmmseEstimator(pilots, pilot_snr).estimate_with_error(observed, truth);
}

}  // namespace obmimo
