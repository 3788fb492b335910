#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pam/bench.hpp"
#include "pam/datasets.hpp"

namespace pam::bench {

namespace detail {
std::string format_number(double v); // report.cpp
} // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// AHN cannot work at low sparsity; its runs always use half-dense patterns.
int effective_w(const ExperimentConfig& c, int n_c) {
    return c.model == ModelKind::Ahn ? std::max(1, n_c / 2) : c.w;
}

Separation ahn_separation(const ExperimentConfig& c) {
    return c.beta > 0.0 ? Separation::softmax(c.beta) : Separation::polynomial(c.degree);
}

ModelFactory model_factory(const ExperimentConfig& c, int n_c) {
    if (c.model == ModelKind::Pam) {
        Params p = Params::defaults(n_c, c.n_k, c.w);
        p.sample_width = c.sample_width;
        return [p](std::uint64_t seed) { return make_pam_model(p, seed); };
    }
    const Separation sep = ahn_separation(c);
    return [n_c, sep](std::uint64_t) { return make_ahn_model(n_c, sep); };
}

std::vector<Sdr> run_model(SequenceModel& model, GenMode mode, const std::vector<Sdr>& seq) {
    return mode == GenMode::Offline
               ? model.generate_offline(seq.front(), static_cast<int>(seq.size()) - 1)
               : model.generate_online(seq);
}

std::vector<Sdr> padded_prediction(const std::vector<Sdr>& outputs,
                                   const std::vector<Sdr>& truth) {
    std::vector<Sdr> pred;
    pred.reserve(truth.size());
    pred.push_back(truth.front());
    for (const Sdr& x : outputs) {
        pred.push_back(x);
    }
    while (pred.size() < truth.size()) {
        pred.emplace_back(truth.front().size());
    }
    return pred;
}

struct TrialContext {
    const ExperimentConfig& config;
    int trial;
    std::uint64_t trial_seed;
    Rng rng;
    std::vector<TrialRecord> records;
    Clock::time_point axis_start = Clock::now();

    void start_axis() { axis_start = Clock::now(); }

    void add(const std::string& axis, const std::string& metric, double value) {
        records.push_back({to_string(config.experiment), axis, trial, trial_seed, metric, value,
                           config.emit_times ? ms_since(axis_start) : 0.0});
    }
};

void run_capacity(TrialContext& ctx) {
    const auto& c = ctx.config;
    const double corr = c.corr_sweep.empty() ? 0.0 : c.corr_sweep.front();
    for (int nc : c.nc_sweep) {
        ctx.start_axis();
        const int t_max = find_capacity(model_factory(c, nc), c.mode, nc, effective_w(c, nc),
                                        corr, c.threshold, c.max_t, ctx.rng);
        ctx.add(std::to_string(nc), "t_max", t_max);
    }
}

void run_correlation(TrialContext& ctx) {
    const auto& c = ctx.config;
    const std::vector<double> axes =
        c.corr_sweep.empty() ? std::vector<double>{0.0, 0.25, 0.5} : c.corr_sweep;
    const int nc = c.n_c;
    for (double corr : axes) {
        ctx.start_axis();
        const int t_max = find_capacity(model_factory(c, nc), c.mode, nc, effective_w(c, nc),
                                        corr, c.threshold, c.max_t, ctx.rng);
        ctx.add(detail::format_number(corr), "t_max", t_max);
    }
}

void run_forgetting(TrialContext& ctx) {
    const auto& c = ctx.config;
    const std::vector<double> axes =
        c.corr_sweep.empty() ? std::vector<double>{0.0} : c.corr_sweep;
    for (double corr : axes) {
        ctx.start_axis();
        const metrics::EvalMatrix m = forgetting_matrix(c, corr, ctx.rng);
        ctx.add(detail::format_number(corr), "bwt", metrics::backward_transfer(m));
    }
}

void run_possibilities(TrialContext& ctx) {
    const auto& c = ctx.config;
    const auto dataset = data::word_dataset(ctx.rng.next_u64(), c.n_c, effective_w(c, c.n_c));
    const auto& vocab = dataset.set.sequences;

    auto model = model_factory(c, c.n_c)(ctx.rng.next_u64());
    for (const auto& word : vocab) {
        model->learn(word);
    }

    std::vector<bool> matched(vocab.size(), false);
    int matched_count = 0;
    for (int g = 1; g <= c.generations; ++g) {
        ctx.start_axis();
        double iou_sum = 0.0;
        for (const auto& word : vocab) {
            const auto outputs =
                model->generate_offline(word.front(), static_cast<int>(word.size()) - 1);
            const std::vector<Sdr> generated = padded_prediction(outputs, word);
            iou_sum += metrics::word_iou(generated, vocab);
            for (std::size_t v = 0; v < vocab.size(); ++v) {
                if (matched[v] || vocab[v].size() != generated.size()) {
                    continue;
                }
                bool all = true;
                for (std::size_t i = 0; i < generated.size() && all; ++i) {
                    all = metrics::normalized_iou(generated[i], vocab[v][i]) >= c.threshold;
                }
                if (all) {
                    matched[v] = true;
                    ++matched_count;
                }
            }
        }
        ctx.add(std::to_string(g), "word_iou", iou_sum / static_cast<double>(vocab.size()));
        ctx.add(std::to_string(g), "dataset_recall",
                static_cast<double>(matched_count) / static_cast<double>(vocab.size()));
    }
}

void run_noise(TrialContext& ctx) {
    const auto& c = ctx.config;
    const std::vector<double> axes = c.noise_sweep.empty()
                                         ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}
                                         : c.noise_sweep;
    const int t_len = c.len_sweep.empty() ? 200 : c.len_sweep.front();
    const double corr = c.corr_sweep.empty() ? 0.0 : c.corr_sweep.front();
    const auto set =
        data::gen_sequences(1, t_len, corr, c.n_c, effective_w(c, c.n_c), ctx.rng);
    const auto& seq = set.sequences.front();
    auto model = model_factory(c, c.n_c)(ctx.rng.next_u64());
    model->learn(seq);

    for (double fraction : axes) {
        ctx.start_axis();
        std::vector<Sdr> inputs;
        inputs.reserve(seq.size());
        inputs.push_back(seq.front()); // noise starts from the second pattern
        for (std::size_t t = 1; t < seq.size(); ++t) {
            inputs.push_back(corrupt(seq[t], fraction, ctx.rng));
        }
        const auto outputs = model->generate_online(inputs);
        const auto pred = padded_prediction(outputs, seq);
        const std::string axis = detail::format_number(fraction);
        ctx.add(axis, "score", metrics::sequence_score(pred, seq));
        ctx.add(axis, "score_min", metrics::sequence_score_min(pred, seq));
    }
}

void run_efficiency(TrialContext& ctx) {
    const auto& c = ctx.config;
    const std::vector<int> axes =
        c.len_sweep.empty() ? std::vector<int>{10, 25, 50, 100, 200} : c.len_sweep;
    const int w = effective_w(c, c.n_c);

    // Warm-up probe, discarded.
    {
        const auto set = data::gen_sequences(1, 4, 0.0, c.n_c, w, ctx.rng);
        auto model = model_factory(c, c.n_c)(ctx.rng.next_u64());
        model->learn(set.sequences.front());
        run_model(*model, c.mode, set.sequences.front());
    }

    for (int t_len : axes) {
        ctx.start_axis();
        const auto set = data::gen_sequences(1, t_len, 0.0, c.n_c, w, ctx.rng);
        const auto& seq = set.sequences.front();
        auto model = model_factory(c, c.n_c)(ctx.rng.next_u64());

        auto t0 = Clock::now();
        model->learn(seq);
        const double learn_ms = ms_since(t0);

        t0 = Clock::now();
        run_model(*model, c.mode, seq);
        const double generate_ms = ms_since(t0);

        ctx.add(std::to_string(t_len), "learn_ms", learn_ms);
        ctx.add(std::to_string(t_len), "generate_ms", generate_ms);
    }
}

void run_validate_iou(TrialContext& ctx) {
    constexpr int kSize = 1000;
    constexpr int kPairs = 1000;
    const std::vector<double> grid = {0.05, 0.1, 0.3, 0.5};
    for (double p : grid) {
        for (double q : grid) {
            ctx.start_axis();
            const int wp = static_cast<int>(std::floor(p * kSize + 0.5));
            const int wq = static_cast<int>(std::floor(q * kSize + 0.5));
            double sum = 0.0;
            for (int i = 0; i < kPairs; ++i) {
                sum += metrics::jaccard(random_sdr(kSize, wp, ctx.rng),
                                        random_sdr(kSize, wq, ctx.rng));
            }
            const double mean = sum / kPairs;
            const double expected = metrics::expected_iou(static_cast<double>(wp) / kSize,
                                                          static_cast<double>(wq) / kSize);
            const std::string axis =
                detail::format_number(p) + "x" + detail::format_number(q);
            ctx.add(axis, "mean_iou", mean);
            ctx.add(axis, "expected_iou", expected);
            ctx.add(axis, "abs_err", std::abs(mean - expected));
        }
    }
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& config, int trial) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(trial));
    TrialContext ctx{config, trial, rng.state(), rng, {}};
    switch (config.experiment) {
    case Experiment::Capacity: run_capacity(ctx); break;
    case Experiment::Correlation: run_correlation(ctx); break;
    case Experiment::Forgetting: run_forgetting(ctx); break;
    case Experiment::Possibilities: run_possibilities(ctx); break;
    case Experiment::Noise: run_noise(ctx); break;
    case Experiment::Efficiency: run_efficiency(ctx); break;
    case Experiment::ValidateIou: run_validate_iou(ctx); break;
    }
    return std::move(ctx.records);
}

} // namespace

metrics::EvalMatrix forgetting_matrix(const ExperimentConfig& config, double correlation,
                                      Rng& rng) {
    const int t_len = config.len_sweep.empty() ? 10 : config.len_sweep.front();
    const auto set = data::gen_sequences(config.sequences, t_len, correlation, config.n_c,
                                         effective_w(config, config.n_c), rng);
    auto model = model_factory(config, config.n_c)(rng.next_u64());
    metrics::EvalMatrix m(config.sequences);
    for (int i = 0; i < config.sequences; ++i) {
        model->learn(set.sequences[static_cast<std::size_t>(i)]);
        for (int j = 0; j < i; ++j) {
            const auto& earlier = set.sequences[static_cast<std::size_t>(j)];
            m.set(i, j, score_generation(run_model(*model, config.mode, earlier), earlier));
        }
    }
    return m;
}

std::vector<TrialRecord> run_suite(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(config.trials));
    const int jobs = std::min(config.jobs, config.trials);
    if (jobs <= 1) {
        for (int i = 0; i < config.trials; ++i) {
            per_trial[static_cast<std::size_t>(i)] = run_trial(config, i);
        }
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= config.trials) {
                        return;
                    }
                    try {
                        per_trial[static_cast<std::size_t>(i)] = run_trial(config, i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<TrialRecord> records;
    for (auto& trial_records : per_trial) {
        for (auto& r : trial_records) {
            records.push_back(std::move(r));
        }
    }
    return records;
}

} // namespace pam::bench
