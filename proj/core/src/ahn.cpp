#include "pam/ahn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pam {

Separation Separation::polynomial(int degree) {
    if (degree < 1) {
        throw std::invalid_argument("polynomial degree must be >= 1");
    }
    Separation s;
    s.kind = Kind::Polynomial;
    s.degree = degree;
    return s;
}

Separation Separation::softmax(double beta) {
    if (beta <= 0.0) {
        throw std::invalid_argument("softmax beta must be positive");
    }
    Separation s;
    s.kind = Kind::Softmax;
    s.beta = beta;
    return s;
}

AhnMemory::AhnMemory(int n, Separation sep) : n_(n), sep_(sep) {
    if (n < 1) {
        throw std::invalid_argument("AhnMemory size must be >= 1");
    }
}

void AhnMemory::store_sequence(std::span<const Sdr> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("store_sequence needs at least 2 patterns");
    }
    for (const Sdr& x : xs) {
        if (x.size() != n_) {
            throw std::invalid_argument("pattern size " + std::to_string(x.size()) +
                                        " does not match memory size " + std::to_string(n_));
        }
    }
    for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
        keys_.push_back(to_bipolar(xs[t]));
        projections_.push_back(to_bipolar(xs[t + 1]));
    }
}

Sdr AhnMemory::recall_next(const Sdr& query) const {
    if (keys_.empty()) {
        throw std::logic_error("recall from empty memory");
    }
    if (query.size() != n_) {
        throw std::invalid_argument("query size mismatch");
    }
    const std::vector<float> q = to_bipolar(query);

    std::vector<double> sims(keys_.size());
    for (std::size_t t = 0; t < keys_.size(); ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            s += static_cast<double>(keys_[t][i]) * static_cast<double>(q[i]);
        }
        sims[t] = s;
    }

    // Sign-preserving separation: anti-correlated keys stay inhibitory for
    // even polynomial degrees.
    std::vector<double> weights(sims.size());
    if (sep_.kind == Separation::Kind::Polynomial) {
        for (std::size_t t = 0; t < sims.size(); ++t) {
            double p = 1.0;
            const double mag = std::abs(sims[t]);
            for (int k = 0; k < sep_.degree; ++k) {
                p *= mag;
            }
            weights[t] = sims[t] < 0.0 ? -p : (sims[t] > 0.0 ? p : 0.0);
        }
    } else {
        const double m = *std::max_element(sims.begin(), sims.end());
        double norm = 0.0;
        for (std::size_t t = 0; t < sims.size(); ++t) {
            weights[t] = std::exp(sep_.beta * (sims[t] - m));
            norm += weights[t];
        }
        for (double& w : weights) {
            w /= norm;
        }
    }

    std::vector<double> raw(static_cast<std::size_t>(n_), 0.0);
    for (std::size_t t = 0; t < weights.size(); ++t) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            raw[i] += static_cast<double>(projections_[t][i]) * weights[t];
        }
    }

    std::vector<std::int32_t> active;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] > 0.0) {
            active.push_back(static_cast<std::int32_t>(i));
        }
    }
    return Sdr(n_, std::move(active));
}

std::vector<Sdr> AhnMemory::generate_offline(const Sdr& first, int steps) const {
    if (steps < 1) {
        throw std::invalid_argument("generate_offline needs steps >= 1");
    }
    std::vector<Sdr> out;
    out.reserve(static_cast<std::size_t>(steps));
    Sdr cur = first;
    for (int t = 0; t < steps; ++t) {
        cur = recall_next(cur);
        out.push_back(cur);
    }
    return out;
}

std::vector<Sdr> AhnMemory::generate_online(std::span<const Sdr> inputs) const {
    if (inputs.size() < 2) {
        throw std::invalid_argument("generate_online needs at least 2 observations");
    }
    std::vector<Sdr> out;
    out.reserve(inputs.size() - 1);
    for (std::size_t t = 0; t + 1 < inputs.size(); ++t) {
        out.push_back(recall_next(inputs[t]));
    }
    return out;
}

} // namespace pam
