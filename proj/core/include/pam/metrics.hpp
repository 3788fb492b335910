#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pam/sdr.hpp"

namespace pam::metrics {

/// Jaccard index (IoU) over active sets. Defined as 1 when both are empty.
double jaccard(const Sdr& a, const Sdr& b);

/// Expected IoU of two random SDRs with sparsities p and q: pq / (p + q - pq).
double expected_iou(double p, double q);

/// (IoU - E[IoU]) / (1 - E[IoU]) using the actual cardinalities of a and b;
/// 0 means chance-level overlap, 1 means identical. May be slightly negative.
double normalized_iou(const Sdr& a, const Sdr& b);

/// Minimal arbitrary-precision unsigned integer; just enough for exact
/// binomial coefficients.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t value);

    void mul(std::uint32_t m);
    /// Divide by d, which must divide exactly.
    void divexact(std::uint32_t d);

    std::string to_string() const;
    /// Approximate value; +inf when out of double range.
    double to_double() const;

    bool operator==(const BigUint&) const = default;

private:
    std::vector<std::uint32_t> limbs_; // little-endian base 2^32
};

/// Exact binomial coefficient C(n, w): the number of distinct patterns an SDR
/// with n neurons and w active bits can represent.
BigUint sdr_capacity(int n, int w);

/// Mean per-step normalized IoU over steps 1..T-1. Index 0 (the provided
/// first pattern) is input, not prediction, and is never scored.
double sequence_score(std::span<const Sdr> pred, std::span<const Sdr> truth);

/// Minimum per-step normalized IoU over the same scored steps.
double sequence_score_min(std::span<const Sdr> pred, std::span<const Sdr> truth);

/// Lower-triangular table: at(i, j) = similarity of sequence j re-evaluated
/// after training sequence i, for j < i.
class EvalMatrix {
public:
    explicit EvalMatrix(int count);

    int count() const { return count_; }
    void set(int trained, int tested, double score);
    double at(int trained, int tested) const;

private:
    int count_;
    std::vector<std::vector<double>> rows_; // rows_[i] has i entries (j < i)
    std::vector<std::vector<bool>> filled_;
};

/// Mean over all populated lower-triangle entries; 1.0 means no forgetting.
double backward_transfer(const EvalMatrix& m);

/// Best mean per-letter normalized IoU of a generated letter sequence against
/// any vocabulary word of the same length.
double word_iou(std::span<const Sdr> generated, const std::vector<std::vector<Sdr>>& vocab);

/// Fraction of vocabulary words matched by at least one generated sequence;
/// a word matches when every letter reaches the per-letter threshold.
double dataset_recall(const std::vector<std::vector<Sdr>>& generated,
                      const std::vector<std::vector<Sdr>>& vocab,
                      double per_letter_threshold = 0.9);

} // namespace pam::metrics
