#include "pam/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pam {

namespace {

float clamped_add(float value, double delta) {
    double s = static_cast<double>(value) + delta;
    s = std::min(1.0, std::max(-1.0, s));
    return static_cast<float>(s);
}

void check_latent_dims(const Params& p, const LatentSdr& z, const char* what) {
    if (z.columns() != p.n_c || z.rows() != p.n_k) {
        throw std::invalid_argument(std::string(what) + ": latent shape " +
                                    std::to_string(z.columns()) + "x" + std::to_string(z.rows()) +
                                    " does not match model " + std::to_string(p.n_c) + "x" +
                                    std::to_string(p.n_k));
    }
}

void check_observation(const Params& p, const Sdr& x, const char* what) {
    if (x.size() != p.n_c) {
        throw std::invalid_argument(std::string(what) + ": observation size " +
                                    std::to_string(x.size()) + " does not match n_c " +
                                    std::to_string(p.n_c));
    }
}

} // namespace

Params Params::defaults(int n_c, int n_k, int w) {
    Params p;
    p.n_c = n_c;
    p.n_k = n_k;
    p.w = w;
    p.theta_a = 0.8 * w;
    p.theta_b = 0.1 * w;
    return p;
}

void Params::validate() const {
    if (n_c < 1 || n_k < 1 || w < 1) {
        throw std::invalid_argument("n_c, n_k and w must be >= 1");
    }
    if (w > n_c) {
        throw std::invalid_argument("w must not exceed n_c");
    }
    if (theta_a <= 0.0 || theta_b <= 0.0) {
        throw std::invalid_argument("thresholds must be positive");
    }
    if (max_attractor_iters < 1 || max_transition_fit_iters < 1) {
        throw std::invalid_argument("iteration caps must be >= 1");
    }
    if (eta_a_plus <= 0.0 || eta_b_plus <= 0.0) {
        throw std::invalid_argument("eta_a_plus and eta_b_plus must be positive");
    }
    if (eta_b_minus >= 0.0) {
        throw std::invalid_argument("eta_b_minus must be negative");
    }
    if (eta_a_minus > 0.0) {
        throw std::invalid_argument("eta_a_minus must be <= 0");
    }
    if (weight_init_std < 0.0) {
        throw std::invalid_argument("weight_init_std must be >= 0");
    }
    if (sample_width < 1) {
        throw std::invalid_argument("sample_width must be >= 1");
    }
    if (generate_retries < 0) {
        throw std::invalid_argument("generate_retries must be >= 0");
    }
}

bool LearnStats::all_converged() const {
    return std::all_of(transitions.begin(), transitions.end(),
                       [](const TransitionFit& t) { return t.converged; });
}

bool Generation::truncated() const {
    return !steps.empty() && steps.back().status == StepStatus::Exhausted;
}

std::vector<Sdr> Generation::patterns() const {
    std::vector<Sdr> out;
    out.reserve(steps.size());
    for (const auto& s : steps) {
        out.push_back(s.pattern);
    }
    return out;
}

Model::Model(const Params& params, std::uint64_t seed) : params_(params), rng_(seed) {
    params_.validate();
    const std::size_t nl = static_cast<std::size_t>(latent_size());
    a_.resize(nl * nl);
    b_.resize(static_cast<std::size_t>(params_.n_c) * params_.n_c);
    // Draw order (A, then B, then start context) is part of the determinism
    // contract: identical (params, seed) must give bit-identical models.
    for (auto& v : a_) {
        v = clamped_add(0.0f, rng_.normal(0.0, params_.weight_init_std));
    }
    for (auto& v : b_) {
        v = clamped_add(0.0f, rng_.normal(0.0, params_.weight_init_std));
    }
    start_context_.resize(static_cast<std::size_t>(params_.n_c));
    for (auto& row : start_context_) {
        row = static_cast<std::int32_t>(rng_.uniform(static_cast<std::uint64_t>(params_.n_k)));
    }
}

LatentSdr Model::start_posterior(const Sdr& x0) const {
    check_observation(params_, x0, "start_posterior");
    std::vector<std::int32_t> flat;
    flat.reserve(static_cast<std::size_t>(x0.width()));
    for (std::int32_t col : x0.active()) {
        flat.push_back(LatentSdr::flat_index(col, start_context_[static_cast<std::size_t>(col)],
                                             params_.n_k));
    }
    return LatentSdr(params_.n_c, params_.n_k, std::move(flat), LatentKind::Posterior);
}

std::pair<Logits, LatentSdr> Model::predict(const LatentSdr& z_prev) const {
    check_latent_dims(params_, z_prev, "predict");
    const std::size_t nl = static_cast<std::size_t>(latent_size());
    Logits logits;
    logits.columns = params_.n_c;
    logits.rows = params_.n_k;
    logits.values.assign(nl, 0.0f);
    for (std::int32_t pre : z_prev.active()) {
        const float* row = a_.data() + static_cast<std::size_t>(pre) * nl;
        for (std::size_t q = 0; q < nl; ++q) {
            logits.values[q] += row[q];
        }
    }
    std::vector<std::int32_t> predicted;
    for (std::size_t q = 0; q < nl; ++q) {
        if (static_cast<double>(logits.values[q]) >= params_.theta_a) {
            predicted.push_back(static_cast<std::int32_t>(q));
        }
    }
    return {std::move(logits),
            LatentSdr(params_.n_c, params_.n_k, std::move(predicted), LatentKind::Prior)};
}

LatentSdr Model::select_context(const Logits& logits, const Sdr& x) {
    check_observation(params_, x, "select_context");
    if (logits.columns != params_.n_c || logits.rows != params_.n_k) {
        throw std::invalid_argument("select_context: logits shape mismatch");
    }
    std::vector<std::int32_t> flat;
    flat.reserve(static_cast<std::size_t>(x.width()));
    std::vector<int> predictive;
    predictive.reserve(static_cast<std::size_t>(params_.n_k));
    for (std::int32_t col : x.active()) {
        predictive.clear();
        for (int j = 0; j < params_.n_k; ++j) {
            if (static_cast<double>(logits.at(col, j)) >= params_.theta_a) {
                predictive.push_back(j);
            }
        }
        int winner;
        if (predictive.size() == 1) {
            winner = predictive.front();
        } else if (predictive.empty()) {
            winner = static_cast<int>(rng_.uniform(static_cast<std::uint64_t>(params_.n_k)));
        } else {
            winner = predictive[static_cast<std::size_t>(
                rng_.uniform(static_cast<std::uint64_t>(predictive.size())))];
        }
        flat.push_back(LatentSdr::flat_index(col, winner, params_.n_k));
    }
    return LatentSdr(params_.n_c, params_.n_k, std::move(flat), LatentKind::Posterior);
}

void Model::update_transition(const LatentSdr& z_prev, const LatentSdr& z_post) {
    check_latent_dims(params_, z_prev, "update_transition");
    check_latent_dims(params_, z_post, "update_transition");
    const std::size_t nl = static_cast<std::size_t>(latent_size());
    if (params_.eta_a_minus == 0.0) {
        for (std::int32_t pre : z_prev.active()) {
            float* row = a_.data() + static_cast<std::size_t>(pre) * nl;
            for (std::int32_t post : z_post.active()) {
                row[post] = clamped_add(row[post], params_.eta_a_plus);
            }
        }
        return;
    }
    std::vector<bool> is_post(nl, false);
    for (std::int32_t post : z_post.active()) {
        is_post[static_cast<std::size_t>(post)] = true;
    }
    for (std::int32_t pre : z_prev.active()) {
        float* row = a_.data() + static_cast<std::size_t>(pre) * nl;
        for (std::size_t q = 0; q < nl; ++q) {
            row[q] = clamped_add(row[q], is_post[q] ? params_.eta_a_plus : params_.eta_a_minus);
        }
    }
}

void Model::update_emission(const Sdr& x, const Sdr& predicted_union) {
    check_observation(params_, x, "update_emission");
    check_observation(params_, predicted_union, "update_emission");
    const std::size_t n = static_cast<std::size_t>(params_.n_c);
    const Sdr inhibited = predicted_union.difference(x);
    for (std::int32_t a : x.active()) {
        float* row = b_.data() + static_cast<std::size_t>(a) * n;
        for (std::int32_t bcol : x.active()) {
            row[bcol] = clamped_add(row[bcol], params_.eta_b_plus);
        }
        for (std::int32_t d : inhibited.active()) {
            row[d] = clamped_add(row[d], params_.eta_b_minus);
            float* drow = b_.data() + static_cast<std::size_t>(d) * n;
            drow[a] = clamped_add(drow[a], params_.eta_b_minus);
        }
    }
}

Sdr Model::settle(const Sdr& x_init, const Sdr& allowed) const {
    check_observation(params_, x_init, "settle");
    check_observation(params_, allowed, "settle");
    const std::size_t n = static_cast<std::size_t>(params_.n_c);
    Sdr cur = x_init;
    for (int iter = 0; iter < params_.max_attractor_iters; ++iter) {
        std::vector<std::int32_t> next;
        for (std::int32_t i : allowed.active()) {
            float sum = 0.0f;
            for (std::int32_t a : cur.active()) {
                sum += b_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(i)];
            }
            if (static_cast<double>(sum) >= params_.theta_b) {
                next.push_back(i);
            }
        }
        Sdr next_sdr(params_.n_c, std::move(next));
        if (next_sdr == cur) {
            return cur;
        }
        cur = std::move(next_sdr);
    }
    return cur;
}

LearnStats Model::learn_sequence(std::span<const Sdr> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("learn_sequence needs at least 2 patterns");
    }
    for (const Sdr& x : xs) {
        check_observation(params_, x, "learn_sequence");
    }

    // x is a well-formed attractor of the predicted union when it is a fixed
    // point and every single active bit recovers a complete possibility.
    // Bits shared with another predicted possibility may legitimately settle
    // into that possibility instead of x; demanding x outright would drive
    // the contrastive inhibition deep enough to hollow out the other basin.
    const auto attractor_complete = [&](const Sdr& x, const Sdr& predicted_union) {
        if (settle(x, predicted_union) != x) {
            return false;
        }
        for (std::int32_t bit : x.active()) {
            const Sdr recovered = settle(Sdr(params_.n_c, {bit}), predicted_union);
            if (recovered != x && recovered.width() != x.width()) {
                return false;
            }
        }
        return true;
    };

    LearnStats stats;
    stats.transitions.reserve(xs.size() - 1);
    LatentSdr z_prev = start_posterior(xs[0]);
    for (std::size_t t = 1; t < xs.size(); ++t) {
        const Sdr& x = xs[t];
        auto [logits, prior] = predict(z_prev);
        LatentSdr z_post = select_context(logits, x);

        TransitionFit fit;
        fit.width_mismatch = x.width() != params_.w;

        // Stage 1: fit the transition until the posterior's logits saturate
        // (every pre-synaptic link at the clamp), not merely until they cross
        // theta_a. Saturated links keep the prediction alive even when a
        // context row is later re-selected differently in one column. The
        // attractor is fitted afterwards; folding its update into this loop
        // would fire the contrastive inhibition once per covering iteration
        // and cut shared bits out of sibling possibilities' basins.
        const auto transition_fitted = [&] {
            const auto [lg, prior2] = predict(z_prev);
            if (!z_post.subset_of(prior2)) {
                return false;
            }
            const double saturated = static_cast<double>(z_prev.width());
            for (std::int32_t cell : z_post.active()) {
                if (static_cast<double>(lg.values[static_cast<std::size_t>(cell)]) < saturated) {
                    return false;
                }
            }
            return true;
        };
        int a_iters = 0;
        bool covered = transition_fitted();
        while (!covered && a_iters < params_.max_transition_fit_iters) {
            update_transition(z_prev, z_post);
            ++a_iters;
            covered = transition_fitted();
        }

        // Stage 2: form the attractor until x is well-formed within the
        // fitted prediction. Checked before updating: re-encounters of an
        // already-learned transition must not keep firing inhibition into
        // sibling possibilities.
        const Sdr predicted_union = project_down(predict(z_prev).second);
        int b_iters = 0;
        bool complete = attractor_complete(x, predicted_union);
        while (!complete && b_iters < params_.max_transition_fit_iters) {
            update_emission(x, predicted_union);
            ++b_iters;
            complete = attractor_complete(x, predicted_union);
        }

        fit.iterations = a_iters + b_iters;
        fit.converged = covered && complete;
        stats.transitions.push_back(fit);
        z_prev = std::move(z_post);
    }
    return stats;
}

Generation Model::run_generation(const Sdr& first, int steps,
                                 std::span<const Sdr> observations) {
    Generation gen;
    gen.steps.reserve(static_cast<std::size_t>(steps));
    LatentSdr z = start_posterior(first);
    for (int t = 1; t <= steps; ++t) {
        auto [logits, prior] = predict(z);
        const Sdr predicted_union = project_down(prior);
        if (predicted_union.empty()) {
            gen.steps.push_back({Sdr(params_.n_c), StepStatus::Exhausted});
            break;
        }
        StepStatus status = StepStatus::Ok;
        Sdr seed = observations.empty()
                       ? sample_from_union(predicted_union, params_.sample_width, rng_)
                       : observations[static_cast<std::size_t>(t)];
        Sdr settled = settle(seed, predicted_union);
        // A well-formed settle has the nominal pattern width. Anything else
        // (empty, a partial pattern, a blend of possibilities) means the seed
        // fell outside every intact basin: re-seed from the predicted union.
        // Retries alternate between single-bit seeds (reaching a different
        // possibility) and full-width seeds (recovering a possibility whose
        // internal links have been weakened, through collective support).
        for (int retry = 0; settled.width() != params_.w && retry < params_.generate_retries;
             ++retry) {
            status = StepStatus::Resampled;
            settled = settle(sample_from_union(predicted_union, params_.sample_width, rng_),
                             predicted_union);
        }
        if (settled.empty()) {
            status = StepStatus::EmptyFallback;
        }
        gen.steps.push_back({settled, status});
        z = select_context(logits, gen.steps.back().pattern);
        // Context ties are broken at random; a draw that mixes two
        // possibilities' contexts degrades the next prediction relative to a
        // consistent assignment (whose prediction covers at least one full
        // possibility). Among a few tie draws, keep the one with the widest
        // forward prediction.
        if (t < steps) {
            int best_width = project_down(predict(z).second).width();
            for (int retry = 0; retry < params_.generate_retries && best_width < params_.w;
                 ++retry) {
                const LatentSdr candidate = select_context(logits, gen.steps.back().pattern);
                const int width = project_down(predict(candidate).second).width();
                if (width > best_width) {
                    best_width = width;
                    z = candidate;
                }
            }
        }
    }
    return gen;
}

Generation Model::generate_offline(const Sdr& first, int steps) {
    check_observation(params_, first, "generate_offline");
    if (steps < 1) {
        throw std::invalid_argument("generate_offline needs steps >= 1");
    }
    return run_generation(first, steps, {});
}

Generation Model::generate_online(std::span<const Sdr> inputs) {
    if (inputs.size() < 2) {
        throw std::invalid_argument("generate_online needs at least 2 observations");
    }
    for (const Sdr& x : inputs) {
        check_observation(params_, x, "generate_online");
    }
    return run_generation(inputs[0], static_cast<int>(inputs.size()) - 1, inputs);
}

bool Model::operator==(const Model& other) const {
    return params_.n_c == other.params_.n_c && params_.n_k == other.params_.n_k &&
           params_.w == other.params_.w && params_.theta_a == other.params_.theta_a &&
           params_.theta_b == other.params_.theta_b &&
           params_.eta_a_plus == other.params_.eta_a_plus &&
           params_.eta_a_minus == other.params_.eta_a_minus &&
           params_.eta_b_plus == other.params_.eta_b_plus &&
           params_.eta_b_minus == other.params_.eta_b_minus && rng_ == other.rng_ &&
           start_context_ == other.start_context_ && a_ == other.a_ && b_ == other.b_;
}

} // namespace pam
