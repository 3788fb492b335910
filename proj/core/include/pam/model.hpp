#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pam/rng.hpp"
#include "pam/sdr.hpp"

namespace pam {

/// Model hyperparameters. Thresholds derive from the nominal active-bit count
/// w, not from per-pattern cardinality; patterns with a different width are
/// accepted but flagged in LearnStats.
struct Params {
    int n_c = 0; ///< observation size (columns)
    int n_k = 0; ///< context rows per column
    int w = 0;   ///< nominal active bits per observation

    double eta_a_plus = 0.1;
    double eta_a_minus = 0.0;
    double eta_b_plus = 0.1;
    double eta_b_minus = -0.1;

    double theta_a = 0.0; ///< transition threshold, defaults to 0.8 * w
    double theta_b = 0.0; ///< emission threshold, defaults to 0.1 * w

    int max_attractor_iters = 100;
    int max_transition_fit_iters = 100;
    double weight_init_std = 0.1;
    int sample_width = 1;    ///< bits sampled from the predicted union per step
    int generate_retries = 8; ///< re-seed attempts when a settle is malformed

    static Params defaults(int n_c, int n_k, int w);

    /// Throws std::invalid_argument on inconsistent values.
    void validate() const;
};

/// Pre-threshold activations over the latent grid, flat column * n_k + row.
struct Logits {
    int columns = 0;
    int rows = 0;
    std::vector<float> values;

    float at(int column, int row) const {
        return values[static_cast<std::size_t>(column) * rows + static_cast<std::size_t>(row)];
    }
};

/// Per-transition outcome of the iterative weight fit.
struct TransitionFit {
    int iterations = 0;
    bool converged = false;
    bool width_mismatch = false; ///< observation width differed from params.w
};

struct LearnStats {
    std::vector<TransitionFit> transitions;

    bool all_converged() const;
};

enum class StepStatus {
    Ok,            ///< settled directly
    Resampled,     ///< first settle emptied; re-seeded from the predicted union
    EmptyFallback, ///< still empty after re-seeding; empty pattern emitted
    Exhausted,     ///< predicted union empty; generation truncated here
};

struct GenStep {
    Sdr pattern;
    StepStatus status = StepStatus::Ok;
};

struct Generation {
    std::vector<GenStep> steps;

    /// True when the prediction ran out before the requested step count.
    bool truncated() const;
    std::vector<Sdr> patterns() const;
};

/// Sequence memory over sparse patterns: a Hebbian transition matrix between
/// context-tagged latent states plus an attractor (emission) matrix that
/// completes partial or noisy observations to a stored possibility.
class Model {
public:
    Model(const Params& params, std::uint64_t seed);

    const Params& params() const { return params_; }
    int latent_size() const { return params_.n_c * params_.n_k; }

    /// Transition weights, (n_c*n_k)^2 row-major; row = pre-synaptic cell.
    std::span<const float> transition() const { return a_; }
    /// Emission weights, n_c^2 row-major.
    std::span<const float> emission() const { return b_; }
    /// Fixed start context: one row per column, never changes after creation.
    std::span<const std::int32_t> start_context() const { return start_context_; }
    Rng& rng() { return rng_; }
    const Rng& rng() const { return rng_; }

    /// Posterior of the first observation under the fixed start context.
    LatentSdr start_posterior(const Sdr& x0) const;

    /// Logits plus the thresholded prior (union of predicted possibilities).
    std::pair<Logits, LatentSdr> predict(const LatentSdr& z_prev) const;

    /// One winning row per active column of x: a unique predictive row wins
    /// outright; with zero or several predictive rows the winner is uniform
    /// over the candidate set. Logit magnitude is deliberately ignored.
    LatentSdr select_context(const Logits& logits, const Sdr& x);

    /// Hebbian transition update: rows of active pre-synaptic cells move by
    /// eta_a_plus toward active post cells and eta_a_minus elsewhere.
    void update_transition(const LatentSdr& z_prev, const LatentSdr& z_post);

    /// Contrastive attractor update: excitation within x, bidirectional
    /// inhibition between x and the predicted union minus x.
    void update_emission(const Sdr& x, const Sdr& predicted_union);

    /// Streaming sequence learning; each observation is consumed once. Every
    /// transition is refit until the fit criterion holds (see TransitionFit)
    /// or max_transition_fit_iters is reached.
    LearnStats learn_sequence(std::span<const Sdr> xs);

    /// Iterates x <- {i in allowed : sum_b B[b][i] >= theta_b} from x_init to
    /// a fixed point (at most max_attractor_iters rounds).
    Sdr settle(const Sdr& x_init, const Sdr& allowed) const;

    /// Auto-regressive rollout from the first pattern; each step samples
    /// sample_width bits from the predicted union and settles them.
    Generation generate_offline(const Sdr& first, int steps);

    /// Per-step generation from (possibly corrupted) observations, cleaned
    /// through the attractor before use. inputs[0] is the uncorrupted seed.
    Generation generate_online(std::span<const Sdr> inputs);

    void save(const std::string& path) const;
    static Model load(const std::string& path);

    /// Compares the persisted surface: dimensions, thresholds, learning
    /// rates, RNG state, start context, and both weight matrices.
    bool operator==(const Model& other) const;

private:
    Model() = default; // uninitialized shell for load()

    Generation run_generation(const Sdr& first, int steps, std::span<const Sdr> observations);

    Params params_;
    std::vector<float> a_;
    std::vector<float> b_;
    std::vector<std::int32_t> start_context_;
    Rng rng_{0};
};

} // namespace pam
