#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pam/rng.hpp"
#include "pam/sdr.hpp"

namespace pam::data {

/// Deterministic symbol -> SDR table. All patterns share (n, w); the mapping
/// is injective and reproducible from the seed.
class Codebook {
public:
    Codebook(std::string symbols, int n, int w, std::uint64_t seed);

    const std::string& symbols() const { return symbols_; }
    int n() const { return n_; }
    int w() const { return w_; }

    bool has(char symbol) const;
    const Sdr& at(char symbol) const;
    /// Exact-match reverse lookup.
    std::optional<char> decode(const Sdr& pattern) const;

    /// Maps a symbol string to its pattern sequence.
    std::vector<Sdr> encode(std::string_view text) const;

private:
    std::string symbols_;
    int n_;
    int w_;
    std::vector<Sdr> patterns_; // parallel to symbols_
};

struct SequenceSet {
    std::vector<std::vector<Sdr>> sequences;
    /// Symbol strings, parallel to sequences, when codebook-backed.
    std::vector<std::string> texts;
    /// Distinct patterns per sequence (synthetic sets).
    int vocab = 0;
    /// 1 - vocab/T for synthetic sets; absent otherwise.
    std::optional<double> correlation;
    /// FASTA records dropped by the unique-first-residue filter.
    int dropped_records = 0;
};

/// Synthetic correlated sequences: each sequence uses `vocab` distinct random
/// patterns with vocab = clamp(round((1 - correlation) * t), 1, t); every
/// vocab item appears at least once and position 0 holds a pattern unique
/// across the whole set.
SequenceSet gen_sequences(int count, int t, double correlation, int n, int w, Rng& rng);

inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

/// Loads FASTA records as amino-acid pattern sequences. Records whose first
/// residue repeats an earlier record's are dropped (counted in the result);
/// sequences longer than max_len are truncated.
SequenceSet load_fasta(const std::string& path, std::uint64_t codebook_seed, int n = 100,
                       int w = 5, int max_len = 500);

/// The embedded list of one hundred 4-letter words.
std::span<const std::string_view> word_list();

struct WordDataset {
    SequenceSet set;
    Codebook letters;
    std::vector<std::string_view> words;
};

/// The word corpus as 4-pattern sequences over a deterministic letter codebook.
WordDataset word_dataset(std::uint64_t codebook_seed, int n = 100, int w = 5);

} // namespace pam::data
