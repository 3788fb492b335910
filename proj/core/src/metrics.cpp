#include "pam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pam::metrics {

namespace {

void check_same_size(const Sdr& a, const Sdr& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("SDR size mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
}

std::size_t intersection_count(const Sdr& a, const Sdr& b) {
    std::size_t count = 0;
    auto ia = a.active().begin();
    auto ib = b.active().begin();
    while (ia != a.active().end() && ib != b.active().end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

} // namespace

double jaccard(const Sdr& a, const Sdr& b) {
    check_same_size(a, b);
    const std::size_t inter = intersection_count(a, b);
    const std::size_t uni =
        static_cast<std::size_t>(a.width()) + static_cast<std::size_t>(b.width()) - inter;
    if (uni == 0) {
        return 1.0; // both empty: identical patterns
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double expected_iou(double p, double q) {
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
        throw std::invalid_argument("sparsities must be in [0, 1]");
    }
    const double denom = p + q - p * q;
    if (denom == 0.0) {
        throw std::invalid_argument("expected IoU undefined for p = q = 0");
    }
    return p * q / denom;
}

double normalized_iou(const Sdr& a, const Sdr& b) {
    check_same_size(a, b);
    const double j = jaccard(a, b);
    const double p = static_cast<double>(a.width()) / a.size();
    const double q = static_cast<double>(b.width()) / b.size();
    if (p == 0.0 && q == 0.0) {
        return j; // both empty: jaccard already reports identity
    }
    const double e = expected_iou(p, q);
    if (e == 1.0) {
        return j; // both patterns are full; overlap carries no information
    }
    return (j - e) / (1.0 - e);
}

BigUint::BigUint(std::uint64_t value) {
    limbs_.push_back(static_cast<std::uint32_t>(value));
    if (value >> 32) {
        limbs_.push_back(static_cast<std::uint32_t>(value >> 32));
    }
}

void BigUint::mul(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        const std::uint64_t prod = static_cast<std::uint64_t>(limb) * m + carry;
        limb = static_cast<std::uint32_t>(prod);
        carry = prod >> 32;
    }
    if (carry) {
        limbs_.push_back(static_cast<std::uint32_t>(carry));
    }
}

void BigUint::divexact(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
        const std::uint64_t cur = (rem << 32) | *it;
        *it = static_cast<std::uint32_t>(cur / d);
        rem = cur % d;
    }
    if (rem != 0) {
        throw std::logic_error("divexact: remainder " + std::to_string(rem));
    }
    while (limbs_.size() > 1 && limbs_.back() == 0) {
        limbs_.pop_back();
    }
}

std::string BigUint::to_string() const {
    // Repeated division by 1e9, collecting decimal chunks.
    std::vector<std::uint32_t> work(limbs_);
    std::string out;
    const std::uint32_t base = 1000000000u;
    while (work.size() > 1 || work[0] != 0) {
        std::uint64_t rem = 0;
        for (auto it = work.rbegin(); it != work.rend(); ++it) {
            const std::uint64_t cur = (rem << 32) | *it;
            *it = static_cast<std::uint32_t>(cur / base);
            rem = cur % base;
        }
        while (work.size() > 1 && work.back() == 0) {
            work.pop_back();
        }
        std::string chunk = std::to_string(rem);
        const bool last = work.size() == 1 && work[0] == 0;
        if (!last) {
            chunk.insert(chunk.begin(), 9 - chunk.size(), '0');
        }
        out.insert(0, chunk);
    }
    return out.empty() ? "0" : out;
}

double BigUint::to_double() const {
    double value = 0.0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
        value = value * 4294967296.0 + static_cast<double>(*it);
        if (std::isinf(value)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return value;
}

BigUint sdr_capacity(int n, int w) {
    if (n < 0 || w < 0 || w > n) {
        throw std::invalid_argument("sdr_capacity requires 0 <= w <= n");
    }
    // Incremental C(n-w+i, i): each division is exact.
    BigUint result(1);
    for (int i = 1; i <= w; ++i) {
        result.mul(static_cast<std::uint32_t>(n - w + i));
        result.divexact(static_cast<std::uint32_t>(i));
    }
    return result;
}

namespace {

std::vector<double> step_scores(std::span<const Sdr> pred, std::span<const Sdr> truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("sequence length mismatch: " + std::to_string(pred.size()) +
                                    " vs " + std::to_string(truth.size()));
    }
    if (pred.size() < 2) {
        throw std::invalid_argument("sequences must have at least 2 patterns");
    }
    std::vector<double> scores;
    scores.reserve(pred.size() - 1);
    for (std::size_t t = 1; t < pred.size(); ++t) {
        scores.push_back(normalized_iou(pred[t], truth[t]));
    }
    return scores;
}

} // namespace

double sequence_score(std::span<const Sdr> pred, std::span<const Sdr> truth) {
    const auto scores = step_scores(pred, truth);
    double sum = 0.0;
    for (double s : scores) {
        sum += s;
    }
    return sum / static_cast<double>(scores.size());
}

double sequence_score_min(std::span<const Sdr> pred, std::span<const Sdr> truth) {
    const auto scores = step_scores(pred, truth);
    return *std::min_element(scores.begin(), scores.end());
}

EvalMatrix::EvalMatrix(int count) : count_(count) {
    if (count < 2) {
        throw std::invalid_argument("EvalMatrix needs at least 2 sequences");
    }
    rows_.resize(static_cast<std::size_t>(count));
    filled_.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        rows_[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i), 0.0);
        filled_[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i), false);
    }
}

void EvalMatrix::set(int trained, int tested, double score) {
    if (trained < 0 || trained >= count_ || tested < 0 || tested >= trained) {
        throw std::invalid_argument("EvalMatrix entry requires 0 <= tested < trained < count");
    }
    rows_[static_cast<std::size_t>(trained)][static_cast<std::size_t>(tested)] = score;
    filled_[static_cast<std::size_t>(trained)][static_cast<std::size_t>(tested)] = true;
}

double EvalMatrix::at(int trained, int tested) const {
    if (trained < 0 || trained >= count_ || tested < 0 || tested >= trained) {
        throw std::invalid_argument("EvalMatrix entry requires 0 <= tested < trained < count");
    }
    if (!filled_[static_cast<std::size_t>(trained)][static_cast<std::size_t>(tested)]) {
        throw std::logic_error("EvalMatrix entry not populated");
    }
    return rows_[static_cast<std::size_t>(trained)][static_cast<std::size_t>(tested)];
}

double backward_transfer(const EvalMatrix& m) {
    double sum = 0.0;
    std::size_t n = 0;
    for (int i = 1; i < m.count(); ++i) {
        for (int j = 0; j < i; ++j) {
            sum += m.at(i, j);
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

double word_iou(std::span<const Sdr> generated, const std::vector<std::vector<Sdr>>& vocab) {
    if (vocab.empty()) {
        throw std::invalid_argument("empty vocabulary");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& word : vocab) {
        if (word.size() != generated.size()) {
            continue;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            sum += normalized_iou(generated[i], word[i]);
        }
        best = std::max(best, sum / static_cast<double>(word.size()));
    }
    return best;
}

double dataset_recall(const std::vector<std::vector<Sdr>>& generated,
                      const std::vector<std::vector<Sdr>>& vocab,
                      double per_letter_threshold) {
    if (vocab.empty()) {
        throw std::invalid_argument("empty vocabulary");
    }
    std::vector<bool> matched(vocab.size(), false);
    for (const auto& gen : generated) {
        for (std::size_t v = 0; v < vocab.size(); ++v) {
            if (matched[v] || vocab[v].size() != gen.size()) {
                continue;
            }
            bool all = true;
            for (std::size_t i = 0; i < gen.size() && all; ++i) {
                all = normalized_iou(gen[i], vocab[v][i]) >= per_letter_threshold;
            }
            if (all) {
                matched[v] = true;
            }
        }
    }
    const auto hits = std::count(matched.begin(), matched.end(), true);
    return static_cast<double>(hits) / static_cast<double>(vocab.size());
}

} // namespace pam::metrics
