#include "obmimo/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "obmimo/kernels.hpp"
#include "obmimo/mc.hpp"
#include "obmimo/optimizer.hpp"
#include "obmimo/rate.hpp"
#include "obmimo/version.hpp"

namespace obmimo {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

struct Number {
    double value;
    bool is_db;
};

Number parse_number(std::string token, const std::string& where) {
    token = trim(token);
    bool is_db = false;
    if (token.size() > 2) {
        std::string tail = token.substr(token.size() - 2);
        if (tail == "dB" || tail == "db" || tail == "DB") {
            is_db = true;
            token = trim(token.substr(0, token.size() - 2));
        }
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        fail(where, "cannot parse number '" + token + "'");
    }
    if (used != token.size()) fail(where, "trailing characters in number '" + token + "'");
    return Number{v, is_db};
}

double to_linear(const Number& n) { return n.is_db ? std::pow(10.0, n.value / 10.0) : n.value; }

// scalar | start:step:end, each endpoint optionally suffixed with dB (in
// which case the range is stepped in dB and converted afterwards)
void append_values(const std::string& token, bool allow_db, const std::string& where,
                   std::vector<double>& out) {
    std::vector<std::string> parts;
    std::stringstream ss(token);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
    if (parts.size() == 1) {
        const Number n = parse_number(parts[0], where);
        if (n.is_db && !allow_db) fail(where, "dB value not allowed for this key");
        out.push_back(allow_db ? to_linear(n) : n.value);
        return;
    }
    if (parts.size() != 3) fail(where, "ranges must be start:step:end");
    const Number a = parse_number(parts[0], where);
    const Number b = parse_number(parts[1], where);
    const Number c = parse_number(parts[2], where);
    const bool db_range = a.is_db || c.is_db;
    if (db_range && !allow_db) fail(where, "dB value not allowed for this key");
    if (!(b.value > 0.0)) fail(where, "range step must be positive");
    if (c.value < a.value) fail(where, "range end must be >= start");
    const auto count =
        static_cast<std::size_t>(std::floor((c.value - a.value) / b.value + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = a.value + static_cast<double>(i) * b.value;
        out.push_back(db_range ? std::pow(10.0, v / 10.0) : v);
    }
}

std::vector<double> parse_list(const std::string& value, bool allow_db,
                               const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) append_values(token, allow_db, where, out);
    if (out.empty()) fail(where, "empty value");
    return out;
}

std::vector<std::size_t> to_size_list(const std::vector<double>& values,
                                      const std::string& where) {
    std::vector<std::size_t> out;
    for (double v : values) {
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
            fail(where, "expected a nonnegative integer");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::uint64_t to_u64(double v, const std::string& where) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) fail(where, "expected an unsigned integer");
    return static_cast<std::uint64_t>(v);
}

ExperimentKind parse_kind(const std::string& value, const std::string& where) {
    if (value == "rate-validation") return ExperimentKind::RateValidation;
    if (value == "se-vs-T") return ExperimentKind::SeVsT;
    if (value == "opt-tau-vs-power") return ExperimentKind::OptTauVsPower;
    if (value == "opt-tau-vs-T") return ExperimentKind::OptTauVsT;
    if (value == "mse-sweep") return ExperimentKind::MseSweep;
    if (value == "moments-check") return ExperimentKind::MomentsCheck;
    fail(where, "unknown kind '" + value + "'");
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
        path_ = path.string();
    }

    void field(std::string_view s) {
        sep();
        out_ << s;
    }
    void field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        field(std::string_view(buf));
    }
    void field(std::size_t v) {
        sep();
        out_ << v;
    }
    void end_row() {
        out_ << '\n';
        first_ = true;
        ++rows_;
    }
    std::size_t rows() const { return rows_ == 0 ? 0 : rows_ - 1; }  // minus header
    void finish() {
        out_.flush();
        if (!out_) throw std::runtime_error("write failed: " + path_);
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ofstream out_;
    std::string path_;
    bool first_ = true;
    std::size_t rows_ = 0;
};

void header(CsvWriter& csv, std::initializer_list<std::string_view> cols) {
    for (auto c : cols) csv.field(c);
    csv.end_row();
}

void run_rate_validation(const ExperimentSpec& spec, CsvWriter& csv) {
    header(csv, {"snr_db", "M", "K", "T", "tau", "trials", "se_mc", "se_closed", "rel_gap"});
    const std::size_t t_len = spec.coherence[0];
    const std::size_t tau = spec.training[0];
    const PilotMatrix pilots = make_dft_pilots(tau, spec.users);
    std::size_t row = 0;
    for (std::size_t m : spec.antennas) {
        for (double rho : spec.snr) {
            SystemConfig cfg{m, spec.users, t_len, tau, rho, rho, derive_seed(spec.seed, row)};
            const RateResult mc = ergodic_rate_mc(cfg, spec.trials, spec.threads);
            const double se_mc = sum_spectral_efficiency(mc.per_user, tau, t_len);
            const double eta_sq = estimate_quality(pilots, rho).eta_sq;
            const double se_closed =
                static_cast<double>(t_len - tau) / static_cast<double>(t_len) *
                static_cast<double>(spec.users) * closed_form_rate(m, spec.users, rho, eta_sq);
            csv.field(to_db(rho));
            csv.field(m);
            csv.field(spec.users);
            csv.field(t_len);
            csv.field(tau);
            csv.field(spec.trials);
            csv.field(se_mc);
            csv.field(se_closed);
            csv.field(se_mc != 0.0 ? std::abs(se_mc - se_closed) / se_mc : 0.0);
            csv.end_row();
            ++row;
        }
    }
}

void optimizer_fields(CsvWriter& csv, const OptimizationResult& r, bool with_gamma) {
    csv.field(r.tau_star);
    if (with_gamma) csv.field(r.gamma_star.value_or(0.0));
    csv.field(r.se_star);
}

void run_optimizers(const ExperimentSpec& spec, CsvWriter& csv, bool se_first) {
    if (se_first) {
        header(csv, {"T", "rho_db", "M", "K", "se_case1_onebit", "tau_case1_onebit",
                     "gamma_case1_onebit", "se_case2_onebit", "tau_case2_onebit",
                     "se_case1_conv", "tau_case1_conv", "gamma_case1_conv",
                     "se_case2_conv", "tau_case2_conv"});
    } else {
        header(csv, {"T", "rho_db", "M", "K", "tau_case1_onebit", "gamma_case1_onebit",
                     "se_case1_onebit", "tau_case2_onebit", "se_case2_onebit",
                     "tau_case1_conv", "gamma_case1_conv", "se_case1_conv",
                     "tau_case2_conv", "se_case2_conv"});
    }
    const std::size_t m = spec.antennas[0];
    for (std::size_t t_len : spec.coherence) {
        for (double rho : spec.snr) {
            const double total = rho * static_cast<double>(t_len);
            const auto c1_ob = optimize_case1(m, spec.users, t_len, total, SeModel::OneBit);
            const auto c2_ob = optimize_case2(m, spec.users, t_len, rho, SeModel::OneBit);
            const auto c1_cv = optimize_case1(m, spec.users, t_len, total, SeModel::Conventional);
            const auto c2_cv = optimize_case2(m, spec.users, t_len, rho, SeModel::Conventional);
            csv.field(t_len);
            csv.field(to_db(rho));
            csv.field(m);
            csv.field(spec.users);
            if (se_first) {
                csv.field(c1_ob.se_star);
                csv.field(c1_ob.tau_star);
                csv.field(c1_ob.gamma_star.value_or(0.0));
                csv.field(c2_ob.se_star);
                csv.field(c2_ob.tau_star);
                csv.field(c1_cv.se_star);
                csv.field(c1_cv.tau_star);
                csv.field(c1_cv.gamma_star.value_or(0.0));
                csv.field(c2_cv.se_star);
                csv.field(c2_cv.tau_star);
            } else {
                optimizer_fields(csv, c1_ob, true);
                optimizer_fields(csv, c2_ob, false);
                optimizer_fields(csv, c1_cv, true);
                optimizer_fields(csv, c2_cv, false);
            }
            csv.end_row();
        }
    }
}

void run_mse_sweep(const ExperimentSpec& spec, CsvWriter& csv) {
    header(csv, {"rho_p_db", "rho_p", "tau", "K", "eta_sq", "mse", "sigma_sq"});
    for (std::size_t tau : spec.training) {
        const PilotMatrix pilots = make_dft_pilots(tau, spec.users);
        for (double rho : spec.snr) {
            const EstimatorQuality q = estimate_quality(pilots, rho);
            csv.field(to_db(rho));
            csv.field(rho);
            csv.field(tau);
            csv.field(spec.users);
            csv.field(q.eta_sq);
            csv.field(q.mse);
            csv.field(q.sigma_sq);
            csv.end_row();
        }
    }
}

void run_moments_check(const ExperimentSpec& spec, CsvWriter& csv) {
    header(csv, {"snr_db", "M", "K", "tau", "trials", "est_norm_sq_mc", "est_norm_sq_pred",
                 "est_norm_sq_rel", "cross_corr_sq_mc", "cross_corr_sq_pred",
                 "cross_corr_sq_rel", "err_proj_sq_mc", "err_proj_sq_pred",
                 "err_proj_sq_rel", "self_gain_sq_mc", "self_gain_sq_pred",
                 "self_gain_sq_rel"});
    std::size_t row = 0;
    for (double rho : spec.snr) {
        SystemConfig cfg{spec.antennas[0], spec.users,     spec.coherence[0],
                         spec.training[0], rho,            rho,
                         derive_seed(spec.seed, row)};
        const auto moments = appendix_moments_mc(cfg, spec.trials, spec.threads);
        csv.field(to_db(rho));
        csv.field(spec.antennas[0]);
        csv.field(spec.users);
        csv.field(spec.training[0]);
        csv.field(spec.trials);
        for (const auto& m : moments) {
            csv.field(m.simulated);
            csv.field(m.predicted);
            csv.field(m.rel_error());
        }
        csv.end_row();
        ++row;
    }
}

}  // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::RateValidation: return "rate-validation";
        case ExperimentKind::SeVsT: return "se-vs-T";
        case ExperimentKind::OptTauVsPower: return "opt-tau-vs-power";
        case ExperimentKind::OptTauVsT: return "opt-tau-vs-T";
        case ExperimentKind::MseSweep: return "mse-sweep";
        case ExperimentKind::MomentsCheck: return "moments-check";
    }
    return "unknown";
}

ExperimentSpec ExperimentSpec::parse(std::istream& in, const std::string& source_name) {
    ExperimentSpec spec;
    bool have_kind = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(where, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(where, "expected 'key = value'");

        if (key == "kind") {
            spec.kind = parse_kind(value, where);
            have_kind = true;
        } else if (key == "M") {
            spec.antennas = to_size_list(parse_list(value, false, where), where);
        } else if (key == "K") {
            spec.users = to_size_list(parse_list(value, false, where), where).at(0);
        } else if (key == "T") {
            spec.coherence = to_size_list(parse_list(value, false, where), where);
        } else if (key == "tau") {
            spec.training = to_size_list(parse_list(value, false, where), where);
        } else if (key == "snr") {
            spec.snr = parse_list(value, true, where);
        } else if (key == "trials") {
            spec.trials = to_size_list(parse_list(value, false, where), where).at(0);
        } else if (key == "seed") {
            spec.seed = to_u64(parse_list(value, false, where).at(0), where);
        } else if (key == "threads") {
            spec.threads = static_cast<unsigned>(
                to_size_list(parse_list(value, false, where), where).at(0));
        } else if (key == "out") {
            spec.output_path = value;
        } else {
            fail(where, "unknown key '" + key + "'");
        }
    }
    if (!have_kind) fail(source_name, "missing required key 'kind'");
    return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    return parse(in, path);
}

void ExperimentSpec::validate() const {
    const std::string where = std::string("spec(") + to_string(kind) + ")";
    if (users < 1) fail(where, "K must be >= 1");
    if (trials < 1) fail(where, "trials must be >= 1");
    if (antennas.empty() || coherence.empty() || training.empty() || snr.empty())
        fail(where, "empty parameter list");
    for (std::size_t m : antennas)
        if (m < 1) fail(where, "M must be >= 1");
    for (double rho : snr)
        if (!std::isfinite(rho) || rho < 0.0) fail(where, "snr values must be finite and >= 0");

    const bool single_m = antennas.size() == 1;
    const bool single_t = coherence.size() == 1;
    const bool single_tau = training.size() == 1;
    const bool single_snr = snr.size() == 1;
    switch (kind) {
        case ExperimentKind::RateValidation:
            if (!single_t || !single_tau) fail(where, "T and tau must be scalars");
            if (training[0] < users || training[0] > coherence[0])
                fail(where, "need K <= tau <= T");
            break;
        case ExperimentKind::SeVsT:
        case ExperimentKind::OptTauVsT:
            if (!single_m) fail(where, "M must be a scalar");
            if (!single_snr) fail(where, "snr must be a scalar");
            for (std::size_t t : coherence)
                if (t < users + 1) fail(where, "need T >= K + 1");
            if (snr[0] <= 0.0) fail(where, "snr must be positive");
            break;
        case ExperimentKind::OptTauVsPower:
            if (!single_m) fail(where, "M must be a scalar");
            for (std::size_t t : coherence)
                if (t < users + 1) fail(where, "need T >= K + 1");
            for (double rho : snr)
                if (rho <= 0.0) fail(where, "snr values must be positive");
            break;
        case ExperimentKind::MseSweep:
            for (std::size_t tau : training)
                if (tau < users) fail(where, "need tau >= K");
            break;
        case ExperimentKind::MomentsCheck:
            if (!single_m || !single_t || !single_tau) fail(where, "M, T, tau must be scalars");
            if (training[0] < users || training[0] > coherence[0])
                fail(where, "need K <= tau <= T");
            break;
    }
}

RunInfo run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.output_path.empty())
        throw std::invalid_argument("spec: missing output path (set 'out = ...' or --out)");

    fs::path csv_path(spec.output_path);
    if (csv_path.is_relative()) {
        if (const char* dir = std::getenv("OBMIMO_OUT_DIR")) csv_path = fs::path(dir) / csv_path;
    }
    fs::path manifest_path = csv_path;
    if (manifest_path.extension() == ".csv") {
        manifest_path.replace_extension(".json");
    } else {
        manifest_path += ".json";
    }

    const auto start = std::chrono::steady_clock::now();
    CsvWriter csv(csv_path);
    switch (spec.kind) {
        case ExperimentKind::RateValidation: run_rate_validation(spec, csv); break;
        case ExperimentKind::SeVsT: run_optimizers(spec, csv, true); break;
        case ExperimentKind::OptTauVsPower: run_optimizers(spec, csv, false); break;
        case ExperimentKind::OptTauVsT: run_optimizers(spec, csv, false); break;
        case ExperimentKind::MseSweep: run_mse_sweep(spec, csv); break;
        case ExperimentKind::MomentsCheck: run_moments_check(spec, csv); break;
    }
    csv.finish();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json manifest;
    manifest["version"] = std::string(kVersion);
    manifest["kind"] = to_string(spec.kind);
    manifest["seed"] = spec.seed;
    manifest["trials"] = spec.trials;
    manifest["threads"] = spec.threads;
    manifest["kernels"] = kernels::active_kernels().name;
    manifest["M"] = spec.antennas;
    manifest["K"] = spec.users;
    manifest["T"] = spec.coherence;
    manifest["tau"] = spec.training;
    manifest["snr_linear"] = spec.snr;
    {
        std::vector<double> db;
        for (double rho : spec.snr) db.push_back(to_db(rho));
        manifest["snr_db"] = db;
    }
    manifest["csv"] = csv_path.string();
    manifest["wall_seconds"] = wall;

    std::ofstream mout(manifest_path, std::ios::binary);
    if (!mout) throw std::runtime_error("cannot open manifest file: " + manifest_path.string());
    mout << manifest.dump(2) << '\n';
    if (!mout.flush()) throw std::runtime_error("write failed: " + manifest_path.string());

    RunInfo info;
    info.csv_path = csv_path.string();
    info.manifest_path = manifest_path.string();
    info.rows = csv.rows();
    info.wall_seconds = wall;
    return info;
}

}  // namespace obmimo
