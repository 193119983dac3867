#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Configuration-driven experiment runner. A spec file is a flat list of
// `key = value` lines (`#` starts a comment). Values are scalars, comma
// lists, or start:step:end ranges; SNR values accept a dB suffix, e.g.
// `snr = -20dB:5:0dB`. Each run writes a CSV data file plus a JSON manifest
// recording the fully resolved configuration.

namespace obmimo {

enum class ExperimentKind {
    RateValidation,  // Monte Carlo rate vs closed form over an SNR sweep
    SeVsT,           // optimized sum SE vs coherence length, both power cases
    OptTauVsPower,   // optimal training length vs average transmit power
    OptTauVsT,       // optimal training length vs coherence length
    MseSweep,        // estimator quality over SNR / training-length grids
    MomentsCheck     // simulated estimate moments vs closed-form predictions
};

const char* to_string(ExperimentKind kind);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::MseSweep;
    std::vector<std::size_t> antennas = {128};
    std::size_t users = 8;
    std::vector<std::size_t> coherence = {200};
    std::vector<std::size_t> training = {16};
    std::vector<double> snr = {0.1};  // linear
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::string output_path;

    // Throws std::invalid_argument on malformed input or unknown keys.
    static ExperimentSpec parse(std::istream& in, const std::string& source_name);
    static ExperimentSpec parse_file(const std::string& path);

    void validate() const;
};

struct RunInfo {
    std::string csv_path;
    std::string manifest_path;
    std::size_t rows = 0;
    double wall_seconds = 0.0;
};

// Executes the recipe and writes `<out>.csv` plus the `<out>.json` manifest.
// The CSV body is byte-identical for identical spec + seed, regardless of
// thread count. Relative output paths resolve under $OBMIMO_OUT_DIR when that
// variable is set.
RunInfo run_experiment(const ExperimentSpec& spec);

}  // namespace obmimo
