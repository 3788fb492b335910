// Experiment runner CLI: runs one protocol from flags and/or a config file and
// writes the CSV report plus a re-runnable manifest.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pam/bench.hpp"
#include "pam/version.hpp"

namespace bench = pam::bench;

int main(int argc, char** argv) {
    CLI::App app{"sequence-memory experiment runner"};
    app.set_version_flag("--version", pam::kVersion);

    std::string experiment;
    std::string config_path;
    std::string model;
    std::string mode;
    std::string out;
    std::vector<int> nc;
    std::vector<int> len;
    std::vector<double> corr;
    std::vector<double> noise;
    int nk = 0;
    int w = 0;
    int degree = 0;
    double beta = 0.0;
    int sample_width = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    int seqs = 0;
    int gens = 0;
    int max_t = 0;
    double threshold = 0.0;
    int jobs = 0;
    bool emit_times = false;

    app.add_option("experiment", experiment,
                   "capacity|correlation|forgetting|possibilities|noise|efficiency|validate-iou");
    app.add_option("--config", config_path,
                   "config file of `key = value` lines; command-line flags take precedence");
    app.add_option("--model", model, "pam|ahn");
    app.add_option("--mode", mode, "offline|online generation");
    app.add_option("--nc", nc, "input size(s); several values form the capacity sweep axis")
        ->delimiter(',');
    app.add_option("--nk", nk, "context rows per column (pam)");
    app.add_option("--w", w, "active bits per pattern (pam; ahn always uses nc/2)");
    auto* opt_d = app.add_option("--d", degree, "polynomial separation degree (ahn)");
    auto* opt_beta = app.add_option("--beta", beta, "softmax separation temperature (ahn)");
    opt_beta->excludes(opt_d);
    app.add_option("--sample-width", sample_width, "bits sampled per offline step (pam)");
    app.add_option("--trials", trials, "independent trials");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--corr", corr, "correlation value(s)")->delimiter(',');
    app.add_option("--noise", noise, "corruption fraction(s)")->delimiter(',');
    app.add_option("--len", len, "sequence length(s)")->delimiter(',');
    app.add_option("--seqs", seqs, "sequence count for forgetting");
    app.add_option("--gens", gens, "generation repetitions for possibilities");
    app.add_option("--max-t", max_t, "capacity search cap");
    app.add_option("--threshold", threshold, "pass threshold on the sequence score");
    app.add_option("--jobs", jobs, "parallel trial workers");
    app.add_flag("--emit-times", emit_times,
                 "record wall-clock times in the CSV (makes re-runs non-identical)");
    app.add_option("--out", out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help / --version
        }
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        bench::ExperimentConfig config;
        if (!config_path.empty()) {
            config = bench::parse_config_file(config_path);
        }
        if (!experiment.empty()) {
            config.experiment = bench::parse_experiment(experiment);
        } else if (config_path.empty()) {
            throw bench::ConfigError("an experiment name or --config file is required");
        }
        if (app.count("--model")) config.model = bench::parse_model(model);
        if (app.count("--mode")) config.mode = bench::parse_mode(mode);
        if (app.count("--nc")) {
            config.nc_sweep = nc;
            config.n_c = nc.front();
        }
        if (app.count("--nk")) config.n_k = nk;
        if (app.count("--w")) config.w = w;
        if (app.count("--d")) config.degree = degree;
        if (app.count("--beta")) config.beta = beta;
        if (app.count("--sample-width")) config.sample_width = sample_width;
        if (app.count("--trials")) config.trials = trials;
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--corr")) config.corr_sweep = corr;
        if (app.count("--noise")) config.noise_sweep = noise;
        if (app.count("--len")) config.len_sweep = len;
        if (app.count("--seqs")) config.sequences = seqs;
        if (app.count("--gens")) config.generations = gens;
        if (app.count("--max-t")) config.max_t = max_t;
        if (app.count("--threshold")) config.threshold = threshold;
        if (app.count("--jobs")) config.jobs = jobs;
        if (app.count("--emit-times")) config.emit_times = emit_times;
        if (app.count("--out")) config.out = out;

        config.validate();
        const auto records = bench::run_suite(config);
        bench::emit_report(records, config, config.out);
        std::cout << "wrote " << config.out << " (" << records.size() << " data rows) and "
                  << bench::manifest_path(config.out) << "\n";
        return 0;
    } catch (const bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
