#include "obmimo/optimizer.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "obmimo/bussgang.hpp"
#include "obmimo/rate.hpp"

namespace obmimo {
namespace {

constexpr double kGammaTol = 1e-8;
constexpr double kGammaEdge = 1e-10;

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double duty_cycle(std::size_t training_len, std::size_t coherence_len) {
    return static_cast<double>(coherence_len - training_len) /
           static_cast<double>(coherence_len);
}

// Deterministic golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double se_point(SeModel model, double gamma, std::size_t tau, std::size_t antennas,
                std::size_t users, std::size_t coherence_len, const EnergyBudget& budget) {
    if (model == SeModel::OneBit)
        return se_gamma_tau(gamma, static_cast<double>(tau), antennas, users,
                            coherence_len, budget.total);
    return conventional_se(antennas, users, coherence_len, tau,
                           budget.pilot_snr(gamma, tau), budget.data_snr(gamma, tau));
}

}  // namespace

EnergyBudget EnergyBudget::from_average_power(double rho, std::size_t coherence_len) {
    if (!(rho > 0.0) || coherence_len < 1)
        throw std::invalid_argument("EnergyBudget: need rho > 0 and coherence_len >= 1");
    return EnergyBudget{coherence_len, rho * static_cast<double>(coherence_len), rho};
}

EnergyBudget EnergyBudget::from_total_energy(double total, std::size_t coherence_len) {
    if (!(total > 0.0) || coherence_len < 1)
        throw std::invalid_argument("EnergyBudget: need total > 0 and coherence_len >= 1");
    return EnergyBudget{coherence_len, total, total / static_cast<double>(coherence_len)};
}

double EnergyBudget::pilot_snr(double gamma, std::size_t training_len) const {
    return gamma * total / static_cast<double>(training_len);
}

double EnergyBudget::data_snr(double gamma, std::size_t training_len) const {
    return (1.0 - gamma) * total / static_cast<double>(coherence_len - training_len);
}

double sum_spectral_efficiency(std::span<const double> per_user_rates,
                               std::size_t training_len, std::size_t coherence_len) {
    if (training_len < per_user_rates.size() || training_len > coherence_len)
        throw std::invalid_argument("sum_spectral_efficiency: need users <= tau <= T");
    double sum = 0.0;
    for (double r : per_user_rates) sum += r;
    return duty_cycle(training_len, coherence_len) * sum;
}

double low_snr_se(std::size_t antennas, std::size_t users, std::size_t coherence_len,
                  std::size_t training_len, double pilot_snr, double data_snr) {
    if (training_len < users || training_len > coherence_len)
        throw std::invalid_argument("low_snr_se: need users <= tau <= T");
    const double surrogate = low_snr_quality(training_len, pilot_snr, users);
    return duty_cycle(training_len, coherence_len) * static_cast<double>(users) *
           closed_form_rate(antennas, users, data_snr, surrogate);
}

double conventional_se(std::size_t antennas, std::size_t users, std::size_t coherence_len,
                       std::size_t training_len, double pilot_snr, double data_snr) {
    if (training_len < users || training_len > coherence_len)
        throw std::invalid_argument("conventional_se: need users <= tau <= T");
    return duty_cycle(training_len, coherence_len) * static_cast<double>(users) *
           conventional_rate(antennas, users, data_snr, training_len, pilot_snr);
}

SeCoefficients se_coefficients(double gamma, std::size_t antennas, std::size_t users,
                               std::size_t coherence_len, double total_energy) {
    const double pi = std::numbers::pi;
    const double m = static_cast<double>(antennas);
    const double k = static_cast<double>(users);
    const double t = static_cast<double>(coherence_len);
    const double p = total_energy;
    const double gg = gamma - gamma * gamma;
    SeCoefficients c{};
    c.a1 = 4.0 * (m + 1.0) * gg * p * p;
    c.a2 = -(pi * pi + 2.0 * p * pi * gamma);
    c.a3 = 4.0 * p * p * (gamma - 1.0) * gamma +
           k * p * pi * (pi - 2.0 * pi * gamma + 2.0 * gamma * (1.0 + p - p * gamma)) +
           pi * pi * t + 2.0 * p * pi * gamma * t;
    c.a4 = k * k * p * p * (pi * pi - 2.0 * pi) * gg +
           k * p * (pi * pi - 2.0 * pi) * gamma * t;
    return c;
}

double se_gamma_tau(double gamma, double training_len, std::size_t antennas,
                    std::size_t users, std::size_t coherence_len, double total_energy) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("se_gamma_tau: gamma must be in (0, 1)");
    const double t = static_cast<double>(coherence_len);
    if (!(training_len >= static_cast<double>(users) && training_len <= t))
        throw std::invalid_argument("se_gamma_tau: need users <= tau <= T");
    const SeCoefficients c =
        se_coefficients(gamma, antennas, users, coherence_len, total_energy);
    const double sinr = c.a1 * training_len /
                        ((c.a2 * training_len + c.a3) * training_len + c.a4);
    return (t - training_len) * static_cast<double>(users) / t * log2_1p(sinr);
}

namespace detail {

std::size_t count_strict_local_maxima(std::span<const double> values, double slack) {
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] + slack && values[i] > values[i + 1] + slack) ++count;
    }
    return count;
}

}  // namespace detail

OptimizationResult optimize_case1(std::size_t antennas, std::size_t users,
                                  std::size_t coherence_len, double total_energy,
                                  SeModel model) {
    if (users < 1 || coherence_len < users + 1)
        throw std::invalid_argument("optimize_case1: need T >= users + 1");
    const EnergyBudget budget = EnergyBudget::from_total_energy(total_energy, coherence_len);

    OptimizationResult result;
    for (std::size_t tau = users; tau < coherence_len; ++tau) {
        const auto f = [&](double g) {
            return se_point(model, g, tau, antennas, users, coherence_len, budget);
        };
        const double gamma = golden_max(f, kGammaEdge, 1.0 - kGammaEdge, kGammaTol);
        result.trace.push_back({tau, gamma, f(gamma)});
    }

    auto pick_best = [&result]() {
        std::size_t best = 0;
        for (std::size_t i = 1; i < result.trace.size(); ++i)
            if (result.trace[i].se > result.trace[best].se) best = i;
        result.tau_star = result.trace[best].tau;
        result.gamma_star = result.trace[best].gamma;
        result.se_star = result.trace[best].se;
    };
    pick_best();

    // Audit the winner on a dense gamma grid. The golden-section step assumes
    // unimodality in gamma at fixed tau, which holds empirically but is not
    // proven; if the grid ever disagrees, redo the whole scan on the grid.
    constexpr std::size_t kGridPoints = 999;
    std::vector<double> grid(kGridPoints);
    const auto f_star = [&](double g) {
        return se_point(model, g, result.tau_star, antennas, users, coherence_len, budget);
    };
    for (std::size_t i = 0; i < kGridPoints; ++i)
        grid[i] = f_star(static_cast<double>(i + 1) * 1e-3);
    const double slack = 1e-12 * std::abs(result.se_star);
    double grid_max = grid[0];
    for (double v : grid) grid_max = std::max(grid_max, v);
    const bool multimodal = detail::count_strict_local_maxima(grid, slack) > 1;
    const bool missed = grid_max > result.se_star + 1e-9 * std::abs(result.se_star);
    if (multimodal || missed) {
        result.trace.clear();
        for (std::size_t tau = users; tau < coherence_len; ++tau) {
            double best_se = 0.0, best_gamma = 0.5;
            for (std::size_t i = 0; i < kGridPoints; ++i) {
                const double g = static_cast<double>(i + 1) * 1e-3;
                const double se =
                    se_point(model, g, tau, antennas, users, coherence_len, budget);
                if (se > best_se) {
                    best_se = se;
                    best_gamma = g;
                }
            }
            result.trace.push_back({tau, best_gamma, best_se});
        }
        pick_best();
    }
    return result;
}

OptimizationResult optimize_case2(std::size_t antennas, std::size_t users,
                                  std::size_t coherence_len, double rho, SeModel model) {
    if (users < 1 || coherence_len < users + 1)
        throw std::invalid_argument("optimize_case2: need T >= users + 1");
    if (!(rho > 0.0)) throw std::invalid_argument("optimize_case2: need rho > 0");

    OptimizationResult result;
    for (std::size_t tau = users; tau < coherence_len; ++tau) {
        const double se = model == SeModel::OneBit
                              ? low_snr_se(antennas, users, coherence_len, tau, rho, rho)
                              : conventional_se(antennas, users, coherence_len, tau, rho, rho);
        // Equal power means the training energy fraction is tau / T.
        result.trace.push_back(
            {tau, static_cast<double>(tau) / static_cast<double>(coherence_len), se});
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trace.size(); ++i)
        if (result.trace[i].se > result.trace[best].se) best = i;
    result.tau_star = result.trace[best].tau;
    result.gamma_star = std::nullopt;
    result.se_star = result.trace[best].se;
    return result;
}

}  // namespace obmimo
