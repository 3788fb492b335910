#include "pam/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "pam/errors.hpp"

namespace pam::data {

Codebook::Codebook(std::string symbols, int n, int w, std::uint64_t seed)
    : symbols_(std::move(symbols)), n_(n), w_(w) {
    if (symbols_.empty()) {
        throw std::invalid_argument("Codebook needs at least one symbol");
    }
    std::set<char> seen(symbols_.begin(), symbols_.end());
    if (seen.size() != symbols_.size()) {
        throw std::invalid_argument("Codebook symbols must be distinct");
    }
    Rng rng = Rng::stream(seed, 0x636f6465626f6f6bULL);
    patterns_.reserve(symbols_.size());
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        // Redraw on the (unlikely) pattern collision so the map stays injective.
        for (;;) {
            Sdr candidate = random_sdr(n_, w_, rng);
            if (std::find(patterns_.begin(), patterns_.end(), candidate) == patterns_.end()) {
                patterns_.push_back(std::move(candidate));
                break;
            }
        }
    }
}

bool Codebook::has(char symbol) const {
    return symbols_.find(symbol) != std::string::npos;
}

const Sdr& Codebook::at(char symbol) const {
    const auto pos = symbols_.find(symbol);
    if (pos == std::string::npos) {
        throw std::invalid_argument(std::string("unknown symbol '") + symbol + "'");
    }
    return patterns_[pos];
}

std::optional<char> Codebook::decode(const Sdr& pattern) const {
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        if (patterns_[i] == pattern) {
            return symbols_[i];
        }
    }
    return std::nullopt;
}

std::vector<Sdr> Codebook::encode(std::string_view text) const {
    std::vector<Sdr> out;
    out.reserve(text.size());
    for (char c : text) {
        out.push_back(at(c));
    }
    return out;
}

SequenceSet gen_sequences(int count, int t, double correlation, int n, int w, Rng& rng) {
    if (count < 1) {
        throw std::invalid_argument("sequence count must be >= 1");
    }
    if (t < 2) {
        throw std::invalid_argument("sequence length must be >= 2");
    }
    if (correlation < 0.0 || correlation >= 1.0) {
        throw std::invalid_argument("correlation must be in [0, 1)");
    }

    const int vocab = std::clamp(
        static_cast<int>(std::floor((1.0 - correlation) * t + 0.5)), 1, t);

    SequenceSet set;
    set.vocab = vocab;
    set.correlation = 1.0 - static_cast<double>(vocab) / t;
    set.sequences.reserve(static_cast<std::size_t>(count));

    std::vector<Sdr> starters; // position-0 patterns, unique across the set
    for (int s = 0; s < count; ++s) {
        std::vector<Sdr> items;
        items.reserve(static_cast<std::size_t>(vocab));
        while (static_cast<int>(items.size()) < vocab) {
            Sdr candidate = random_sdr(n, w, rng);
            const bool dup_item =
                std::find(items.begin(), items.end(), candidate) != items.end();
            const bool dup_start =
                items.empty() &&
                std::find(starters.begin(), starters.end(), candidate) != starters.end();
            if (!dup_item && !dup_start) {
                items.push_back(std::move(candidate));
            }
        }
        starters.push_back(items.front());

        // items[0] is pinned to position 0; the rest appear once each and the
        // remaining slots are filled uniformly, then positions 1..t-1 are
        // shuffled.
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(t) - 1);
        for (int i = 1; i < vocab; ++i) {
            order.push_back(i);
        }
        for (int i = vocab; i < t; ++i) {
            order.push_back(static_cast<int>(rng.uniform(static_cast<std::uint64_t>(vocab))));
        }
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng.uniform(order.size() - i));
            std::swap(order[i], order[j]);
        }

        std::vector<Sdr> seq;
        seq.reserve(static_cast<std::size_t>(t));
        seq.push_back(items.front());
        for (int idx : order) {
            seq.push_back(items[static_cast<std::size_t>(idx)]);
        }
        set.sequences.push_back(std::move(seq));
    }
    return set;
}

SequenceSet load_fasta(const std::string& path, std::uint64_t codebook_seed, int n, int w,
                       int max_len) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }

    std::vector<std::string> records;
    std::string line;
    std::string current;
    bool in_record = false;
    int line_no = 0;
    const auto flush = [&] {
        if (in_record) {
            records.push_back(current);
            current.clear();
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '>') {
            flush();
            in_record = true;
            continue;
        }
        if (!in_record) {
            throw ParseError("sequence data before first '>' header", line_no, 1);
        }
        for (std::size_t c = 0; c < line.size(); ++c) {
            const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(line[c])));
            if (kAminoAcids.find(upper) == std::string_view::npos) {
                throw ParseError(std::string("invalid amino-acid character '") + line[c] + "'",
                                 line_no, static_cast<int>(c) + 1);
            }
            current.push_back(upper);
        }
    }
    flush();
    if (records.empty()) {
        throw ParseError("no FASTA records found", std::max(line_no, 1));
    }

    const Codebook codebook(std::string(kAminoAcids), n, w, codebook_seed);
    SequenceSet set;
    set.vocab = static_cast<int>(kAminoAcids.size());
    std::set<char> seen_starts;
    for (auto& text : records) {
        if (text.empty()) {
            continue;
        }
        if (!seen_starts.insert(text.front()).second) {
            ++set.dropped_records;
            continue;
        }
        if (static_cast<int>(text.size()) > max_len) {
            text.resize(static_cast<std::size_t>(max_len));
        }
        set.sequences.push_back(codebook.encode(text));
        set.texts.push_back(std::move(text));
    }
    return set;
}

WordDataset word_dataset(std::uint64_t codebook_seed, int n, int w) {
    const auto words = word_list();

    std::string letters;
    for (const auto& word : words) {
        for (char c : word) {
            if (letters.find(c) == std::string::npos) {
                letters.push_back(c);
            }
        }
    }
    std::sort(letters.begin(), letters.end());

    WordDataset out{SequenceSet{}, Codebook(letters, n, w, codebook_seed),
                    std::vector<std::string_view>(words.begin(), words.end())};
    out.set.vocab = static_cast<int>(letters.size());
    for (const auto& word : words) {
        out.set.sequences.push_back(out.letters.encode(word));
        out.set.texts.emplace_back(word);
    }
    return out;
}

} // namespace pam::data
