#include "obmimo/rate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "obmimo/mc.hpp"

namespace obmimo {
namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double sample_std_err(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double mean = pairwise_sum(v) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

CMatrix mrc_detect(const CMatrix& estimate, const QuantizedBlock& observed) {
    if (estimate.rows() != observed.entries.rows() || observed.entries.cols() != 1)
        throw std::invalid_argument("mrc_detect: shape mismatch");
    return herm_matmul(estimate, observed.entries);
}

std::vector<RateBreakdown> mrc_rate_breakdowns(const ChannelEstimate& estimate,
                                               double data_snr) {
    const CMatrix& h_hat = estimate.estimate;
    const std::size_t users = h_hat.cols();
    const double gain = bussgang_gain(users, data_snr);
    const double g2 = gain * gain;

    const CMatrix gram = herm_matmul(h_hat, h_hat);
    CMatrix cross;
    if (!estimate.error.empty()) {
        if (estimate.error.rows() != h_hat.rows() || estimate.error.cols() != users)
            throw std::invalid_argument("mrc_rate_breakdowns: error shape mismatch");
        cross = herm_matmul(h_hat, estimate.error);
    }

    std::vector<RateBreakdown> out(users);
    for (std::size_t k = 0; k < users; ++k) {
        RateBreakdown& b = out[k];
        const double self = gram(k, k).real();
        b.signal = data_snr * g2 * self * self;
        double interference = 0.0;
        for (std::size_t i = 0; i < users; ++i)
            if (i != k) interference += std::norm(gram(k, i));
        b.user_interference = data_snr * g2 * interference;
        double leak = 0.0;
        if (!cross.empty())
            for (std::size_t i = 0; i < users; ++i) leak += std::norm(cross(k, i));
        b.estimation_noise = data_snr * g2 * leak;
        b.awgn = g2 * self;
        b.quantization = kQuantDistortion * self;
        if (b.signal > 0.0) {
            b.rate_bits = log2_1p(b.signal / (b.user_interference + b.estimation_noise +
                                              b.awgn + b.quantization));
        }
    }
    return out;
}

RateResult ergodic_rate_mc(const SystemConfig& config, std::size_t trials,
                           unsigned threads, CsiMode csi) {
    config.validate();
    if (trials < 1) throw std::invalid_argument("ergodic_rate_mc: trials must be >= 1");

    const std::size_t users = config.users;
    const PilotMatrix pilots = make_dft_pilots(config.training_len, users);
    const LmmseEstimator estimator(pilots, config.pilot_snr);

    std::vector<double> bits(trials * users);
    parallel_trials(trials, threads, [&](std::size_t t) {
        std::mt19937_64 eng = substream(config.seed, t);
        const ChannelSample channel = draw_channel(config.antennas, users, eng);
        ChannelEstimate est;
        if (csi == CsiMode::Estimated) {
            const QuantizedBlock rp = simulate_training(config, channel, pilots, eng);
            est = estimator.estimate_with_error(rp, channel);
        } else {
            est.estimate = channel.h;
            est.error = CMatrix(config.antennas, users);
        }
        const auto breakdown = mrc_rate_breakdowns(est, config.data_snr);
        for (std::size_t k = 0; k < users; ++k) bits[t * users + k] = breakdown[k].rate_bits;
    });

    RateResult result;
    result.trials = trials;
    result.per_user.resize(users);
    std::vector<double> scratch(trials);
    for (std::size_t k = 0; k < users; ++k) {
        for (std::size_t t = 0; t < trials; ++t) scratch[t] = bits[t * users + k];
        result.per_user[k] = pairwise_sum(scratch) / static_cast<double>(trials);
    }
    result.mean = pairwise_sum(result.per_user) / static_cast<double>(users);
    for (std::size_t t = 0; t < trials; ++t) {
        double s = 0.0;
        for (std::size_t k = 0; k < users; ++k) s += bits[t * users + k];
        scratch[t] = s / static_cast<double>(users);
    }
    result.std_err = sample_std_err(scratch);
    return result;
}

double closed_form_rate(std::size_t antennas, std::size_t users, double data_snr,
                        double eta_sq) {
    if (!(eta_sq >= 0.0 && eta_sq <= 1.0))
        throw std::invalid_argument("closed_form_rate: eta_sq must be in [0, 1]");
    const double gain = bussgang_gain(users, data_snr);
    const double g2 = gain * gain;
    const double num = data_snr * g2 * eta_sq * static_cast<double>(antennas + 1);
    const double den =
        data_snr * g2 * (static_cast<double>(users) - eta_sq) + g2 + kQuantDistortion;
    if (num == 0.0) return 0.0;
    return log2_1p(num / den);
}

double conventional_rate(std::size_t antennas, std::size_t users, double data_snr,
                         std::size_t training_len, double pilot_snr) {
    if (!(pilot_snr >= 0.0) || !(data_snr >= 0.0))
        throw std::invalid_argument("conventional_rate: snr must be >= 0");
    const double energy = static_cast<double>(training_len) * pilot_snr;
    const double eta_sq = energy > 0.0 ? energy / (1.0 + energy) : 0.0;
    const double num = data_snr * eta_sq * static_cast<double>(antennas + 1);
    const double den = data_snr * (static_cast<double>(users) - eta_sq) + 1.0;
    if (num == 0.0) return 0.0;
    return log2_1p(num / den);
}

double MomentCheck::rel_error() const {
    if (predicted == 0.0) return std::abs(simulated);
    return std::abs(simulated - predicted) / std::abs(predicted);
}

std::array<MomentCheck, 4> appendix_moments_mc(const SystemConfig& config,
                                               std::size_t trials, unsigned threads) {
    config.validate();
    if (trials < 1) throw std::invalid_argument("appendix_moments_mc: trials must be >= 1");

    const std::size_t users = config.users;
    const double m = static_cast<double>(config.antennas);
    const PilotMatrix pilots = make_dft_pilots(config.training_len, users);
    const LmmseEstimator estimator(pilots, config.pilot_snr);
    const double gain_d = bussgang_gain(users, config.data_snr);
    const double g2 = gain_d * gain_d;

    std::vector<double> samples(trials * 4);
    parallel_trials(trials, threads, [&](std::size_t t) {
        std::mt19937_64 eng = substream(config.seed, t);
        const ChannelSample channel = draw_channel(config.antennas, users, eng);
        const QuantizedBlock rp = simulate_training(config, channel, pilots, eng);
        const CMatrix h_hat = estimator.estimate(rp);
        const CMatrix gram_true = herm_matmul(h_hat, channel.h);   // h_hat^H H
        const CMatrix err = channel.h - h_hat;
        const CMatrix gram_err = herm_matmul(h_hat, err);          // h_hat^H E

        double norm_sq = 0.0, cross = 0.0, err_proj = 0.0, self_sq = 0.0;
        for (std::size_t k = 0; k < users; ++k) {
            const double self = (gram_true(k, k) - gram_err(k, k)).real();  // ||h_hat_k||^2
            norm_sq += self;
            self_sq += g2 * self * self;
            err_proj += g2 * std::norm(gram_err(k, k));
            for (std::size_t i = 0; i < users; ++i)
                if (i != k) cross += std::norm(gram_true(k, i));
        }
        const double ku = static_cast<double>(users);
        samples[t * 4 + 0] = norm_sq / ku;
        samples[t * 4 + 1] = users > 1 ? cross / (ku * (ku - 1.0)) : 0.0;
        samples[t * 4 + 2] = err_proj / ku;
        samples[t * 4 + 3] = self_sq / ku;
    });

    std::array<double, 4> mc{};
    std::vector<double> scratch(trials);
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t t = 0; t < trials; ++t) scratch[t] = samples[t * 4 + j];
        mc[j] = pairwise_sum(scratch) / static_cast<double>(trials);
    }

    const double eta_sq = estimate_quality(pilots, config.pilot_snr).eta_sq;
    return {MomentCheck{"est_norm_sq", mc[0], eta_sq * m},
            MomentCheck{"cross_corr_sq", mc[1], eta_sq * m},
            MomentCheck{"err_proj_sq", mc[2], g2 * eta_sq * (1.0 - eta_sq) * m},
            MomentCheck{"self_gain_sq", mc[3], g2 * eta_sq * eta_sq * (m * m + m)}};
}

}  // namespace obmimo
