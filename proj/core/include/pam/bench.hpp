#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pam/ahn.hpp"
#include "pam/metrics.hpp"
#include "pam/model.hpp"
#include "pam/rng.hpp"
#include "pam/sdr.hpp"

namespace pam::bench {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    Capacity,      ///< max sequence length vs input size
    Correlation,   ///< max sequence length vs sequence correlation
    Forgetting,    ///< backward transfer over sequentially learned sequences
    Possibilities, ///< word generation and dataset recall over repetitions
    Noise,         ///< online score vs corruption fraction
    Efficiency,    ///< learn/generate wall time vs sequence length
    ValidateIou,   ///< Monte-Carlo check of the expected-IoU formula
};

enum class ModelKind { Pam, Ahn };
enum class GenMode { Offline, Online };

std::string to_string(Experiment e);
std::string to_string(ModelKind m);
std::string to_string(GenMode m);
Experiment parse_experiment(const std::string& name);
ModelKind parse_model(const std::string& name);
GenMode parse_mode(const std::string& name);

/// Declarative experiment description. A run's manifest is a complete config
/// in the same `key = value` format and can be passed back as a config file.
struct ExperimentConfig {
    Experiment experiment = Experiment::Capacity;
    ModelKind model = ModelKind::Pam;
    GenMode mode = GenMode::Offline;

    int n_c = 100; ///< first value of nc_sweep
    int n_k = 8;
    int w = 5; ///< PAM pattern width; AHN always uses round(0.5 * n_c)
    int degree = 2;
    double beta = 0.0; ///< > 0 selects the softmax separation for AHN
    int sample_width = 1;

    int trials = 10;
    std::uint64_t seed = 1;
    int jobs = 1;
    /// When false (the default) the wall_ms column is written as 0 so that
    /// re-running a manifest reproduces the CSV byte for byte.
    bool emit_times = false;

    std::vector<int> nc_sweep = {100};
    std::vector<double> corr_sweep;  ///< correlation axis; other experiments use front()
    std::vector<double> noise_sweep; ///< noise axis
    std::vector<int> len_sweep;      ///< sequence lengths: efficiency axis, noise T
    int sequences = 10;              ///< forgetting set size
    int generations = 50;            ///< possibilities repetitions
    int max_t = 1024;                ///< capacity search cap
    double threshold = 0.9;          ///< capacity pass threshold

    std::string out = "bench.csv";

    /// Throws ConfigError before any work when inconsistent.
    void validate() const;
};

/// One CSV row. Summary rows reuse the layout with trial = "summary": the
/// seed column then carries the aggregate count and wall_ms the population
/// standard deviation of value.
struct TrialRecord {
    std::string experiment;
    std::string axis;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;
    double wall_ms = 0.0;
};

/// Uniform learn/generate surface over both model families, used by the
/// capacity search and the experiment protocols.
class SequenceModel {
public:
    virtual ~SequenceModel() = default;
    virtual void learn(const std::vector<Sdr>& xs) = 0;
    virtual std::vector<Sdr> generate_offline(const Sdr& first, int steps) = 0;
    virtual std::vector<Sdr> generate_online(const std::vector<Sdr>& inputs) = 0;
};

using ModelFactory = std::function<std::unique_ptr<SequenceModel>(std::uint64_t seed)>;

std::unique_ptr<SequenceModel> make_pam_model(const Params& params, std::uint64_t seed);
std::unique_ptr<SequenceModel> make_ahn_model(int n, Separation sep);

/// Scores generated outputs against the ground truth: outputs cover positions
/// 1..T-1; missing (truncated) steps count as empty predictions.
double score_generation(const std::vector<Sdr>& outputs, const std::vector<Sdr>& truth);

/// Largest T for which a fresh model trained on one length-T sequence at the
/// given correlation reaches the score threshold. Geometric doubling from
/// T = 2 up to max_t, then bisection; every probe draws a fresh model and a
/// fresh sequence from rng. Returns 0 when T = 2 already fails.
int find_capacity(const ModelFactory& factory, GenMode mode, int n_c, int w, double correlation,
                  double score_threshold, int max_t, Rng& rng);

/// One trial of the forgetting protocol: learn `sequences` sequences in turn,
/// re-scoring every earlier one after each new sequence.
metrics::EvalMatrix forgetting_matrix(const ExperimentConfig& config, double correlation,
                                      Rng& rng);

/// Executes the configured protocol over all trials (in parallel when
/// jobs > 1); records are identical at any parallelism level.
std::vector<TrialRecord> run_suite(const ExperimentConfig& config);

/// Writes the CSV (`experiment,axis,trial,seed,metric,value,wall_ms`, data
/// rows first, one summary row per (axis, metric)) plus the sibling manifest.
void emit_report(const std::vector<TrialRecord>& records, const ExperimentConfig& config,
                 const std::string& path);

void apply_key_value(ExperimentConfig& config, const std::string& key, const std::string& value);
ExperimentConfig parse_config_file(const std::string& path);
std::string manifest_text(const ExperimentConfig& config);
std::string manifest_path(const std::string& csv_path);

} // namespace pam::bench
