#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pam/rng.hpp"

namespace pam {

/// 1-D sparse binary pattern: total neuron count plus the sorted indices of
/// the active ones. Immutable after construction.
class Sdr {
public:
    Sdr() = default;
    explicit Sdr(int size);
    /// Indices are sorted on construction; duplicates or out-of-range indices
    /// throw std::invalid_argument.
    Sdr(int size, std::vector<std::int32_t> active);

    int size() const { return size_; }
    int width() const { return static_cast<int>(active_.size()); }
    bool empty() const { return active_.empty(); }
    std::span<const std::int32_t> active() const { return active_; }
    bool contains(std::int32_t index) const;

    Sdr intersect(const Sdr& other) const;
    Sdr unite(const Sdr& other) const;
    Sdr difference(const Sdr& other) const;

    bool operator==(const Sdr&) const = default;

private:
    int size_ = 0;
    std::vector<std::int32_t> active_;
};

enum class LatentKind { Prior, Posterior };

/// 2-D sparse binary pattern over columns x rows. Active cells are stored as
/// flat indices column * rows + row, sorted ascending; the flat order matches
/// the transition-matrix layout and the weight file.
///
/// A Posterior-tagged pattern has at most one active row per column (lateral
/// inhibition); a Prior-tagged one (union of predicted possibilities) has no
/// such bound.
class LatentSdr {
public:
    LatentSdr() = default;
    LatentSdr(int columns, int rows, LatentKind kind);
    LatentSdr(int columns, int rows, std::vector<std::int32_t> flat_active, LatentKind kind);

    static std::int32_t flat_index(int column, int row, int rows) {
        return static_cast<std::int32_t>(column) * rows + row;
    }

    int columns() const { return columns_; }
    int rows() const { return rows_; }
    LatentKind kind() const { return kind_; }
    int width() const { return static_cast<int>(active_.size()); }
    bool empty() const { return active_.empty(); }
    std::span<const std::int32_t> active() const { return active_; }
    bool contains(std::int32_t flat) const;

    int column_of(std::int32_t flat) const { return flat / rows_; }
    int row_of(std::int32_t flat) const { return flat % rows_; }

    /// True when every active cell of this pattern is active in `other`.
    bool subset_of(const LatentSdr& other) const;

    bool operator==(const LatentSdr&) const = default;

private:
    int columns_ = 0;
    int rows_ = 0;
    std::vector<std::int32_t> active_;
    LatentKind kind_ = LatentKind::Prior;
};

/// Uniform random pattern with exactly w active bits out of n.
Sdr random_sdr(int n, int w, Rng& rng);

/// Expands a 1-D pattern into the latent grid: all n_k rows active in every
/// active column. Prior-tagged.
LatentSdr project_up(const Sdr& x, int n_k);

/// Collapses a latent pattern to the columns that have at least one active row.
Sdr project_down(const LatentSdr& z);

/// First min(w_sample, |active|) indices of a uniform random permutation of
/// the active set. Result is always a subset of u. Throws on empty input.
Sdr sample_from_union(const Sdr& u, int w_sample, Rng& rng);

/// Moves round(fraction * W) uniformly chosen active bits to uniformly chosen
/// previously inactive positions. Relocated bits never land on any original
/// active position. Cardinality is preserved exactly.
Sdr corrupt(const Sdr& x, double fraction, Rng& rng);

/// Dense +-1 encoding: +1 at active indices, -1 elsewhere.
std::vector<float> to_bipolar(const Sdr& x);

/// Inverse of to_bipolar: active where the entry is positive.
Sdr from_bipolar(std::span<const float> v);

/// Textual literal `N:W:{i1,i2,...}`, e.g. `100:5:{3,17,42,77,90}`.
std::string format_sdr(const Sdr& x);
Sdr parse_sdr(const std::string& text);

} // namespace pam
