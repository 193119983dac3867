// Command-line front end: runs one experiment spec and writes its CSV plus
// the JSON run manifest.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "obmimo/experiment.hpp"
#include "obmimo/kernels.hpp"
#include "obmimo/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"one-bit massive MIMO link simulator and training-length optimizer"};
    app.set_version_flag("--version", std::string(obmimo::kVersion));

    std::string spec_path;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::string out_path;
    bool quiet = false;

    app.add_option("--spec", spec_path, "experiment spec file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the spec's RNG seed");
    auto* trials_opt = app.add_option("--trials", trials, "override the spec's trial count");
    auto* out_opt = app.add_option("--out", out_path, "override the spec's output path");
    app.add_flag("--quiet", quiet, "suppress the run summary");

    CLI11_PARSE(app, argc, argv);

    try {
        obmimo::ExperimentSpec spec = obmimo::ExperimentSpec::parse_file(spec_path);
        if (seed_opt->count() > 0) spec.seed = seed;
        if (trials_opt->count() > 0) spec.trials = trials;
        if (out_opt->count() > 0) spec.output_path = out_path;

        const obmimo::RunInfo info = obmimo::run_experiment(spec);
        if (!quiet) {
            std::printf("%s: %zu rows -> %s (%.2fs, %s kernels)\n",
                        obmimo::to_string(spec.kind), info.rows, info.csv_path.c_str(),
                        info.wall_seconds, obmimo::kernels::active_kernels().name);
            std::printf("manifest: %s\n", info.manifest_path.c_str());
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
