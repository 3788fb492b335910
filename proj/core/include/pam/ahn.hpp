#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pam/sdr.hpp"

namespace pam {

/// Separation nonlinearity applied to recall similarity scores.
struct Separation {
    enum class Kind { Polynomial, Softmax };

    Kind kind = Kind::Polynomial;
    int degree = 1;    ///< polynomial exponent d
    double beta = 1.0; ///< softmax temperature

    static Separation polynomial(int degree);
    static Separation softmax(double beta);
};

/// Asymmetric Hopfield memory: stored (key, next-pattern) bipolar pairs,
/// recalled as projection-weighted separation of similarity scores. Storing is
/// single-owner; recall is read-only.
class AhnMemory {
public:
    AhnMemory(int n, Separation sep);

    int n() const { return n_; }
    std::size_t stored_pairs() const { return keys_.size(); }
    const Separation& separation() const { return sep_; }

    /// Appends (xs[t], xs[t+1]) pairs in order; multiple sequences accumulate.
    void store_sequence(std::span<const Sdr> xs);

    /// Recalls the successor of the query. An output coordinate is active iff
    /// its weighted sum is strictly positive; exact zero maps to inactive.
    Sdr recall_next(const Sdr& query) const;

    std::vector<Sdr> generate_offline(const Sdr& first, int steps) const;
    std::vector<Sdr> generate_online(std::span<const Sdr> inputs) const;

private:
    int n_;
    Separation sep_;
    std::vector<std::vector<float>> keys_;
    std::vector<std::vector<float>> projections_;
};

} // namespace pam
