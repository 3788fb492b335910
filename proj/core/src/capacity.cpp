#include "pam/bench.hpp"
#include "pam/datasets.hpp"

namespace pam::bench {

namespace {

class PamSeqModel final : public SequenceModel {
public:
    PamSeqModel(const Params& params, std::uint64_t seed) : model_(params, seed) {}

    void learn(const std::vector<Sdr>& xs) override { model_.learn_sequence(xs); }

    std::vector<Sdr> generate_offline(const Sdr& first, int steps) override {
        return model_.generate_offline(first, steps).patterns();
    }

    std::vector<Sdr> generate_online(const std::vector<Sdr>& inputs) override {
        return model_.generate_online(inputs).patterns();
    }

private:
    Model model_;
};

class AhnSeqModel final : public SequenceModel {
public:
    AhnSeqModel(int n, Separation sep) : memory_(n, sep) {}

    void learn(const std::vector<Sdr>& xs) override { memory_.store_sequence(xs); }

    std::vector<Sdr> generate_offline(const Sdr& first, int steps) override {
        return memory_.generate_offline(first, steps);
    }

    std::vector<Sdr> generate_online(const std::vector<Sdr>& inputs) override {
        return memory_.generate_online(inputs);
    }

private:
    AhnMemory memory_;
};

} // namespace

std::unique_ptr<SequenceModel> make_pam_model(const Params& params, std::uint64_t seed) {
    return std::make_unique<PamSeqModel>(params, seed);
}

std::unique_ptr<SequenceModel> make_ahn_model(int n, Separation sep) {
    return std::make_unique<AhnSeqModel>(n, sep);
}

double score_generation(const std::vector<Sdr>& outputs, const std::vector<Sdr>& truth) {
    std::vector<Sdr> pred;
    pred.reserve(truth.size());
    pred.push_back(truth.front());
    for (const Sdr& x : outputs) {
        pred.push_back(x);
    }
    while (pred.size() < truth.size()) {
        pred.emplace_back(truth.front().size()); // truncated step: empty prediction
    }
    return metrics::sequence_score(pred, truth);
}

int find_capacity(const ModelFactory& factory, GenMode mode, int n_c, int w, double correlation,
                  double score_threshold, int max_t, Rng& rng) {
    const auto probe = [&](int t_len) {
        const data::SequenceSet set = data::gen_sequences(1, t_len, correlation, n_c, w, rng);
        const std::vector<Sdr>& seq = set.sequences.front();
        const auto model = factory(rng.next_u64());
        model->learn(seq);
        const std::vector<Sdr> outputs =
            mode == GenMode::Offline
                ? model->generate_offline(seq.front(), t_len - 1)
                : model->generate_online(seq);
        return score_generation(outputs, seq) >= score_threshold;
    };

    if (!probe(2)) {
        return 0;
    }
    int lo = 2;     // last passing length
    int hi = 0;     // first failing length (0 while unknown)
    for (int t = 4; t <= max_t; t *= 2) {
        if (probe(t)) {
            lo = t;
        } else {
            hi = t;
            break;
        }
    }
    if (hi == 0) {
        if (lo >= max_t) {
            return max_t;
        }
        if (probe(max_t)) {
            return max_t;
        }
        hi = max_t;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (probe(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace pam::bench
