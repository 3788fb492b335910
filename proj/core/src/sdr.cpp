#include "pam/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pam/errors.hpp"

namespace pam {

namespace {

void check_size(int size) {
    if (size <= 0) {
        throw std::invalid_argument("Sdr size must be positive, got " + std::to_string(size));
    }
}

// Partial Fisher-Yates: permutes the first `take` slots of `items`.
void shuffle_prefix(std::vector<std::int32_t>& items, std::size_t take, Rng& rng) {
    const std::size_t n = items.size();
    take = std::min(take, n);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform(n - i));
        std::swap(items[i], items[j]);
    }
}

} // namespace

Sdr::Sdr(int size) : size_(size) {
    check_size(size);
}

Sdr::Sdr(int size, std::vector<std::int32_t> active) : size_(size), active_(std::move(active)) {
    check_size(size);
    std::sort(active_.begin(), active_.end());
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (active_[i] < 0 || active_[i] >= size_) {
            throw std::invalid_argument("Sdr index " + std::to_string(active_[i]) +
                                        " out of range [0, " + std::to_string(size_) + ")");
        }
        if (i > 0 && active_[i] == active_[i - 1]) {
            throw std::invalid_argument("duplicate Sdr index " + std::to_string(active_[i]));
        }
    }
}

bool Sdr::contains(std::int32_t index) const {
    return std::binary_search(active_.begin(), active_.end(), index);
}

Sdr Sdr::intersect(const Sdr& other) const {
    std::vector<std::int32_t> out;
    std::set_intersection(active_.begin(), active_.end(), other.active_.begin(),
                          other.active_.end(), std::back_inserter(out));
    return Sdr(size_, std::move(out));
}

Sdr Sdr::unite(const Sdr& other) const {
    std::vector<std::int32_t> out;
    std::set_union(active_.begin(), active_.end(), other.active_.begin(), other.active_.end(),
                   std::back_inserter(out));
    return Sdr(size_, std::move(out));
}

Sdr Sdr::difference(const Sdr& other) const {
    std::vector<std::int32_t> out;
    std::set_difference(active_.begin(), active_.end(), other.active_.begin(),
                        other.active_.end(), std::back_inserter(out));
    return Sdr(size_, std::move(out));
}

LatentSdr::LatentSdr(int columns, int rows, LatentKind kind)
    : columns_(columns), rows_(rows), kind_(kind) {
    if (columns <= 0 || rows <= 0) {
        throw std::invalid_argument("LatentSdr dimensions must be positive");
    }
}

LatentSdr::LatentSdr(int columns, int rows, std::vector<std::int32_t> flat_active, LatentKind kind)
    : columns_(columns), rows_(rows), active_(std::move(flat_active)), kind_(kind) {
    if (columns <= 0 || rows <= 0) {
        throw std::invalid_argument("LatentSdr dimensions must be positive");
    }
    std::sort(active_.begin(), active_.end());
    const std::int32_t total = static_cast<std::int32_t>(columns_) * rows_;
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (active_[i] < 0 || active_[i] >= total) {
            throw std::invalid_argument("LatentSdr cell out of range");
        }
        if (i > 0 && active_[i] == active_[i - 1]) {
            throw std::invalid_argument("duplicate LatentSdr cell");
        }
        if (kind_ == LatentKind::Posterior && i > 0 &&
            active_[i] / rows_ == active_[i - 1] / rows_) {
            throw std::invalid_argument("posterior LatentSdr has two active rows in column " +
                                        std::to_string(active_[i] / rows_));
        }
    }
}

bool LatentSdr::contains(std::int32_t flat) const {
    return std::binary_search(active_.begin(), active_.end(), flat);
}

bool LatentSdr::subset_of(const LatentSdr& other) const {
    return std::includes(other.active_.begin(), other.active_.end(), active_.begin(),
                         active_.end());
}

Sdr random_sdr(int n, int w, Rng& rng) {
    check_size(n);
    if (w < 0 || w > n) {
        throw std::invalid_argument("active count " + std::to_string(w) +
                                    " out of range [0, " + std::to_string(n) + "]");
    }
    std::vector<std::int32_t> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        all[static_cast<std::size_t>(i)] = i;
    }
    shuffle_prefix(all, static_cast<std::size_t>(w), rng);
    all.resize(static_cast<std::size_t>(w));
    return Sdr(n, std::move(all));
}

LatentSdr project_up(const Sdr& x, int n_k) {
    if (n_k < 1) {
        throw std::invalid_argument("n_k must be >= 1");
    }
    std::vector<std::int32_t> flat;
    flat.reserve(static_cast<std::size_t>(x.width()) * n_k);
    for (std::int32_t col : x.active()) {
        for (int j = 0; j < n_k; ++j) {
            flat.push_back(LatentSdr::flat_index(col, j, n_k));
        }
    }
    return LatentSdr(x.size(), n_k, std::move(flat), LatentKind::Prior);
}

Sdr project_down(const LatentSdr& z) {
    std::vector<std::int32_t> cols;
    for (std::int32_t flat : z.active()) {
        const std::int32_t col = flat / z.rows();
        if (cols.empty() || cols.back() != col) {
            cols.push_back(col);
        }
    }
    return Sdr(z.columns(), std::move(cols));
}

Sdr sample_from_union(const Sdr& u, int w_sample, Rng& rng) {
    if (w_sample < 1) {
        throw std::invalid_argument("w_sample must be >= 1");
    }
    if (u.empty()) {
        throw std::invalid_argument("sample_from_union: empty union");
    }
    std::vector<std::int32_t> pool(u.active().begin(), u.active().end());
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(w_sample), pool.size());
    shuffle_prefix(pool, take, rng);
    pool.resize(take);
    return Sdr(u.size(), std::move(pool));
}

Sdr corrupt(const Sdr& x, double fraction, Rng& rng) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw std::invalid_argument("corruption fraction must be in [0, 1]");
    }
    const int w = x.width();
    const int k = static_cast<int>(std::floor(fraction * w + 0.5));
    if (k == 0) {
        return x;
    }
    if (w + k > x.size()) {
        throw std::invalid_argument("cannot relocate " + std::to_string(k) +
                                    " bits: only " + std::to_string(x.size() - w) +
                                    " inactive positions");
    }

    std::vector<std::int32_t> moved(x.active().begin(), x.active().end());
    shuffle_prefix(moved, static_cast<std::size_t>(k), rng);
    moved.resize(static_cast<std::size_t>(k));
    std::sort(moved.begin(), moved.end());

    std::vector<std::int32_t> inactive;
    inactive.reserve(static_cast<std::size_t>(x.size() - w));
    for (std::int32_t i = 0; i < x.size(); ++i) {
        if (!x.contains(i)) {
            inactive.push_back(i);
        }
    }
    shuffle_prefix(inactive, static_cast<std::size_t>(k), rng);
    inactive.resize(static_cast<std::size_t>(k));

    std::vector<std::int32_t> kept;
    std::set_difference(x.active().begin(), x.active().end(), moved.begin(), moved.end(),
                        std::back_inserter(kept));
    kept.insert(kept.end(), inactive.begin(), inactive.end());
    return Sdr(x.size(), std::move(kept));
}

std::vector<float> to_bipolar(const Sdr& x) {
    std::vector<float> v(static_cast<std::size_t>(x.size()), -1.0f);
    for (std::int32_t i : x.active()) {
        v[static_cast<std::size_t>(i)] = 1.0f;
    }
    return v;
}

Sdr from_bipolar(std::span<const float> v) {
    std::vector<std::int32_t> active;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0.0f) {
            active.push_back(static_cast<std::int32_t>(i));
        }
    }
    return Sdr(static_cast<int>(v.size()), std::move(active));
}

std::string format_sdr(const Sdr& x) {
    std::string out = std::to_string(x.size()) + ":" + std::to_string(x.width()) + ":{";
    bool first = true;
    for (std::int32_t i : x.active()) {
        if (!first) {
            out += ",";
        }
        out += std::to_string(i);
        first = false;
    }
    out += "}";
    return out;
}

Sdr parse_sdr(const std::string& text) {
    const auto fail = [&](const std::string& why, std::size_t pos) -> ParseError {
        return ParseError("bad SDR literal '" + text + "': " + why, 1, static_cast<int>(pos + 1));
    };
    std::size_t pos = 0;
    const auto read_int = [&](char terminator) -> long {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != terminator) {
            ++pos;
        }
        if (pos == text.size()) {
            throw fail(std::string("expected '") + terminator + "'", pos);
        }
        try {
            std::size_t used = 0;
            const long value = std::stol(text.substr(start, pos - start), &used);
            if (used != pos - start) {
                throw std::invalid_argument("trailing");
            }
            ++pos; // consume terminator
            return value;
        } catch (const std::exception&) {
            throw fail("invalid integer", start);
        }
    };

    const long n = read_int(':');
    const long w = read_int(':');
    if (pos >= text.size() || text[pos] != '{') {
        throw fail("expected '{'", pos);
    }
    ++pos;
    std::vector<std::int32_t> active;
    if (pos < text.size() && text[pos] != '}') {
        for (;;) {
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != ',' && text[pos] != '}') {
                ++pos;
            }
            if (pos == text.size()) {
                throw fail("expected '}'", pos);
            }
            try {
                std::size_t used = 0;
                const long value = std::stol(text.substr(start, pos - start), &used);
                if (used != pos - start) {
                    throw std::invalid_argument("trailing");
                }
                active.push_back(static_cast<std::int32_t>(value));
            } catch (const std::exception&) {
                throw fail("invalid index", start);
            }
            if (text[pos] == '}') {
                break;
            }
            ++pos; // consume ','
        }
    }
    if (pos >= text.size() || text[pos] != '}') {
        throw fail("expected '}'", pos);
    }
    ++pos;
    if (pos != text.size()) {
        throw fail("trailing characters", pos);
    }
    if (!std::is_sorted(active.begin(), active.end())) {
        throw fail("indices must be sorted ascending", 0);
    }
    if (static_cast<long>(active.size()) != w) {
        throw fail("declared width " + std::to_string(w) + " != " +
                       std::to_string(active.size()) + " indices",
                   0);
    }
    try {
        return Sdr(static_cast<int>(n), std::move(active));
    } catch (const std::invalid_argument& e) {
        throw fail(e.what(), 0);
    }
}

} // namespace pam
