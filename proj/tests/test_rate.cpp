#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "obmimo/mc.hpp"
#include "obmimo/rate.hpp"
#include "support/dense_oracle.hpp"
#include "support/stats.hpp"

using namespace obmimo;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

oracle::Mat to_oracle(const CMatrix& m) {
    oracle::Mat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = m(i, j);
    return r;
}

}  // namespace

TEST_CASE("mrc detection basics") {
    CMatrix zero(4, 2);
    QuantizedBlock rd{CMatrix(4, 1)};
    for (std::size_t m = 0; m < 4; ++m) rd.entries(m, 0) = cxd{kInvSqrt2, kInvSqrt2};
    const CMatrix s0 = mrc_detect(zero, rd);
    CHECK(s0.rows() == 2);
    CHECK(s0(0, 0) == cxd{0.0, 0.0});
    CHECK(s0(1, 0) == cxd{0.0, 0.0});

    CMatrix ident(1, 1);
    ident(0, 0) = cxd{1.0, 0.0};
    QuantizedBlock one{CMatrix(1, 1)};
    one.entries(0, 0) = cxd{kInvSqrt2, kInvSqrt2};
    const CMatrix s1 = mrc_detect(ident, one);
    CHECK(std::abs(s1(0, 0) - cxd{kInvSqrt2, kInvSqrt2}) < 1e-15);

    CHECK_THROWS_AS(mrc_detect(zero, one), std::invalid_argument);
}

TEST_CASE("mrc recovers BPSK through the one-bit front end") {
    const std::size_t antennas = 64, users = 1, tau = 8;
    const SystemConfig cfg{antennas, users, 1000, tau, 10.0, 1.0, 808};
    const PilotMatrix pilots = make_dft_pilots(tau, users);
    const LmmseEstimator estimator(pilots, cfg.pilot_snr);

    std::size_t errors = 0, slots_total = 0;
    for (std::size_t trial = 0; trial < 500; ++trial) {
        std::mt19937_64 eng = substream(cfg.seed, trial);
        const ChannelSample h = draw_channel(antennas, users, eng);
        const QuantizedBlock rp = simulate_training(cfg, h, pilots, eng);
        const CMatrix est = estimator.estimate(rp);
        std::uniform_int_distribution<int> bit(0, 1);
        for (int slot = 0; slot < 20; ++slot) {
            const double sym = bit(eng) ? 1.0 : -1.0;
            CMatrix s(1, 1);
            s(0, 0) = cxd{sym, 0.0};
            const QuantizedBlock rd = simulate_data_slot(cfg, h, s, eng);
            const CMatrix soft = mrc_detect(est, rd);
            errors += (soft(0, 0).real() >= 0 ? 1.0 : -1.0) != sym;
            ++slots_total;
        }
    }
    CHECK(slots_total == 10000);
    CHECK(static_cast<double>(errors) / static_cast<double>(slots_total) < 1e-3);
}

TEST_CASE("rate breakdown terms are nonnegative and consistent") {
    const SystemConfig cfg{16, 4, 64, 8, 0.2, 0.3, 55};
    const PilotMatrix pilots = make_dft_pilots(8, 4);
    const LmmseEstimator estimator(pilots, cfg.pilot_snr);
    std::mt19937_64 eng = substream(cfg.seed, 0);
    const ChannelSample h = draw_channel(16, 4, eng);
    const QuantizedBlock rp = simulate_training(cfg, h, pilots, eng);
    const ChannelEstimate est = estimator.estimate_with_error(rp, h);
    const auto terms = mrc_rate_breakdowns(est, cfg.data_snr);
    REQUIRE(terms.size() == 4);
    for (const RateBreakdown& b : terms) {
        CHECK(b.signal >= 0.0);
        CHECK(b.user_interference >= 0.0);
        CHECK(b.estimation_noise >= 0.0);
        CHECK(b.awgn >= 0.0);
        CHECK(b.quantization >= 0.0);
        const double sinr =
            b.signal / (b.user_interference + b.estimation_noise + b.awgn + b.quantization);
        CHECK(b.rate_bits == doctest::Approx(std::log2(1.0 + sinr)).epsilon(1e-12));
    }
}

TEST_CASE("ergodic rate is zero without data power and reproducible with threads") {
    SystemConfig cfg{8, 2, 40, 4, 0.1, 0.0, 7};
    const RateResult zero = ergodic_rate_mc(cfg, 50);
    for (double r : zero.per_user) CHECK(r == 0.0);
    CHECK(zero.mean == 0.0);

    cfg.data_snr = 0.1;
    const RateResult a = ergodic_rate_mc(cfg, 400, 1);
    const RateResult b = ergodic_rate_mc(cfg, 400, 2);
    const RateResult c = ergodic_rate_mc(cfg, 400, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.mean == c.mean);
    CHECK(a.std_err == b.std_err);
    for (std::size_t k = 0; k < a.per_user.size(); ++k) {
        CHECK(a.per_user[k] == b.per_user[k]);
        CHECK(a.per_user[k] == c.per_user[k]);
    }
    CHECK(a.mean == doctest::Approx(test_stats::mean(a.per_user)).epsilon(1e-12));
    CHECK_THROWS_AS(ergodic_rate_mc(cfg, 0), std::invalid_argument);
}

TEST_CASE("standard error shrinks like one over root trials") {
    const SystemConfig cfg{8, 2, 40, 4, 0.1, 0.1, 99};
    const RateResult small = ergodic_rate_mc(cfg, 400);
    const RateResult large = ergodic_rate_mc(cfg, 1600);
    const double ratio = small.std_err / large.std_err;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("perfect channel knowledge never loses to the estimate") {
    for (double rho : {0.05, 0.2}) {
        const SystemConfig cfg{16, 4, 64, 8, rho, rho, 313};
        const RateResult est = ergodic_rate_mc(cfg, 500, 0, CsiMode::Estimated);
        const RateResult ideal = ergodic_rate_mc(cfg, 500, 0, CsiMode::Perfect);
        // Common channel draws per trial index make this a paired comparison.
        CHECK(ideal.mean >= est.mean);
    }
}

TEST_CASE("Monte Carlo mean matches the literal dense reimplementation") {
    const std::size_t antennas = 8, users = 2, tau = 2;
    const double rho = 0.1;
    const std::size_t trials = 10000;
    const SystemConfig cfg{antennas, users, 20, tau, rho, rho, 606};

    const RateResult mine = ergodic_rate_mc(cfg, trials);
    const auto theirs =
        dense_oracle::ergodic_rate_mc(antennas, users, tau, rho, rho, trials, 170081);
    const double their_mean = test_stats::mean(theirs);

    // Independent seeds on both sides: compare within the combined error.
    const double combined_se = mine.std_err * std::sqrt(2.0);
    CHECK(std::abs(mine.mean - their_mean) < 3 * combined_se);
}

TEST_CASE("per-realization rates match the literal formula on shared draws") {
    const std::size_t antennas = 4, users = 2, tau = 3;
    const double rho_p = 0.2, rho_d = 0.15;
    const SystemConfig cfg{antennas, users, 30, tau, rho_p, rho_d, 44};
    const PilotMatrix pilots = make_dft_pilots(tau, users);
    const LmmseEstimator estimator(pilots, rho_p);
    const dense_oracle::Pipeline pipeline = dense_oracle::build(antennas, users, tau, rho_p);

    for (std::size_t t = 0; t < 20; ++t) {
        std::mt19937_64 eng = substream(cfg.seed, t);
        const ChannelSample h = draw_channel(antennas, users, eng);
        const QuantizedBlock rp = simulate_training(cfg, h, pilots, eng);

        const ChannelEstimate est = estimator.estimate_with_error(rp, h);
        const auto mine = mrc_rate_breakdowns(est, rho_d);

        const oracle::Mat est_dense = dense_oracle::estimate(pipeline, to_oracle(rp.entries));
        const oracle::Mat err_dense = oracle::sub(to_oracle(h.h), est_dense);
        const auto theirs = dense_oracle::rates(est_dense, err_dense, rho_d, users);

        for (std::size_t k = 0; k < users; ++k)
            CHECK(std::abs(mine[k].rate_bits - theirs[k]) < 1e-9);
    }
}

TEST_CASE("closed-form rate: endpoints, frozen value, monotonicity") {
    CHECK(closed_form_rate(128, 8, 0.1, 0.0) == 0.0);
    CHECK(closed_form_rate(128, 8, 0.0, 0.5) == 0.0);
    CHECK(closed_form_rate(128, 8, 0.1, 0.28294) == doctest::Approx(1.2041067670).epsilon(1e-9));
    CHECK_THROWS_AS(closed_form_rate(128, 8, 0.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_rate(128, 8, 0.1, -0.1), std::invalid_argument);

    double prev = 0.0;
    for (std::size_t m : {8, 16, 32, 64, 128, 256}) {
        const double r = closed_form_rate(m, 8, 0.1, 0.3);
        CHECK(r > prev);
        prev = r;
    }
    prev = 0.0;
    for (double eta : {0.1, 0.2, 0.4, 0.8, 1.0}) {
        const double r = closed_form_rate(64, 8, 0.1, eta);
        CHECK(r > prev);
        prev = r;
    }
    prev = 1e9;
    for (std::size_t k : {1, 2, 4, 8, 16}) {
        const double r = closed_form_rate(64, k, 0.1, 0.3);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("closed-form denominator collapses to one at vanishing data power") {
    // alpha^2 + 1 - 2/pi -> 1; the deviation is (2/pi) * users * snr.
    const double g1 = bussgang_gain(1, 1e-9);
    CHECK(std::abs(g1 * g1 + kQuantDistortion - 1.0) < 1e-9);
    const double g8 = bussgang_gain(8, 1e-10);
    CHECK(std::abs(g8 * g8 + kQuantDistortion - 1.0) < 1e-9);
}

TEST_CASE("conventional baseline: endpoints and frozen value") {
    CHECK(conventional_rate(128, 8, 0.1, 8, 0.0) == 0.0);
    CHECK(conventional_rate(128, 8, 0.0, 8, 0.1) == 0.0);
    CHECK(conventional_rate(128, 8, 0.1, 8, 0.1) == doctest::Approx(2.0928240330).epsilon(1e-9));
}

TEST_CASE("one-bit to conventional ratio approaches the squared 2/pi penalty") {
    for (std::size_t m : {32, 128}) {
        const double rho = 1e-4;
        const PilotMatrix pilots = make_dft_pilots(8, 8);
        const double eta_sq = estimate_quality(pilots, rho).eta_sq;
        const double one_bit = closed_form_rate(m, 8, rho, eta_sq);
        const double conventional = conventional_rate(m, 8, rho, 8, rho);
        const double target = std::pow(2.0 / std::numbers::pi, 2.0);
        CHECK(std::abs(one_bit / conventional - target) / target < 0.01);
    }
}

TEST_CASE("Monte Carlo tracks the closed form at moderate scale") {
    const std::size_t antennas = 32, users = 8, tau = 16, t_len = 200;
    const double rho = 0.1;
    const SystemConfig cfg{antennas, users, t_len, tau, rho, rho, 2222};
    const RateResult mc = ergodic_rate_mc(cfg, 1000);
    const double eta_sq = estimate_quality(make_dft_pilots(tau, users), rho).eta_sq;
    const double closed = closed_form_rate(antennas, users, rho, eta_sq);
    CHECK(std::abs(mc.mean - closed) / mc.mean < 0.05);
}

TEST_CASE("moment checks converge to their predictions; cross moment is biased") {
    SystemConfig cfg{32, 8, 64, 8, 0.1, 0.1, 515};
    const auto moments = appendix_moments_mc(cfg, 3000);
    CHECK(moments[0].name == "est_norm_sq");
    CHECK(moments[0].rel_error() < 0.02);
    // The cross moment sits a few percent below the independence-based
    // prediction: the per-antenna quantizer couples the estimate magnitude
    // with the interferer magnitude. Band it rather than pretending it
    // converges to zero error.
    CHECK(moments[1].simulated < moments[1].predicted);
    CHECK(moments[1].rel_error() < 0.08);
    CHECK(moments[2].rel_error() < 0.05);
    CHECK(moments[3].rel_error() < 0.05);

    cfg.pilot_snr = 0.0;
    const auto silent = appendix_moments_mc(cfg, 100);
    for (const auto& m : silent) {
        CHECK(m.simulated == 0.0);
        CHECK(m.predicted == 0.0);
    }
}
