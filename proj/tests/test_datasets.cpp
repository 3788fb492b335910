#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "pam/datasets.hpp"
#include "pam/errors.hpp"

using namespace pam;
using namespace pam::data;

namespace {

struct TempFasta {
    std::string path;
    explicit TempFasta(const std::string& name, const std::string& content)
        : path((std::filesystem::temp_directory_path() / name).string()) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFasta() { std::remove(path.c_str()); }
};

// the record printed in the loader's own documentation set: 5 lines x 50 residues
const char* kSampleRecord =
    ">sample\n"
    "MGAAASIQTTVNTLSERISSKLEQEANASAQTKCDIEIGNFYIRQNHGCN\n"
    "LTVKNMCSADADAQLDAVLSAATETYSGLTPEQKAYVPAMFTAALNIQTS\n"
    "VNTVVRDFENYVKQTCNSSAVVDNKLKIQNVIIDECYGAPGSPTNLEFIN\n"
    "TGSSKGNCAIKALMQLTTKATTQIAPKQVAGTGVQFYMIVIGVIILAALF\n"
    "MYYAKRMLFTSTNDKIKLILANKENVHWTTYMDTFFRTSPMVIATTDMQN\n";

} // namespace

TEST_CASE("gen_sequences controls vocab through correlation") {
    Rng rng(1);
    const SequenceSet zero = gen_sequences(3, 10, 0.0, 100, 5, rng);
    CHECK(zero.vocab == 10);
    CHECK(zero.correlation == 0.0);
    for (const auto& seq : zero.sequences) {
        CHECK(seq.size() == 10);
        const std::set<std::string> distinct = [&] {
            std::set<std::string> s;
            for (const auto& x : seq) {
                s.insert(format_sdr(x));
            }
            return s;
        }();
        CHECK(distinct.size() == 10);
    }

    const SequenceSet corr = gen_sequences(3, 10, 0.8, 100, 5, rng);
    CHECK(corr.vocab == 2);
    for (const auto& seq : corr.sequences) {
        std::set<std::string> distinct;
        for (const auto& x : seq) {
            distinct.insert(format_sdr(x));
        }
        CHECK(distinct.size() == 2);
    }
}

TEST_CASE("gen_sequences is deterministic and enforces unique starts") {
    Rng a(9);
    Rng b(9);
    const SequenceSet sa = gen_sequences(5, 10, 0.5, 100, 5, a);
    const SequenceSet sb = gen_sequences(5, 10, 0.5, 100, 5, b);
    REQUIRE(sa.sequences.size() == sb.sequences.size());
    for (std::size_t i = 0; i < sa.sequences.size(); ++i) {
        CHECK(sa.sequences[i] == sb.sequences[i]);
    }

    std::set<std::string> starters;
    for (const auto& seq : sa.sequences) {
        starters.insert(format_sdr(seq.front()));
    }
    CHECK(starters.size() == sa.sequences.size());
}

TEST_CASE("gen_sequences keeps the declared correlation by construction") {
    Rng rng(10);
    for (double corr : {0.0, 0.3, 0.5, 0.9}) {
        const SequenceSet set = gen_sequences(2, 20, corr, 100, 5, rng);
        CHECK(set.correlation == doctest::Approx(1.0 - set.vocab / 20.0));
        for (const auto& seq : set.sequences) {
            std::set<std::string> distinct;
            for (const auto& x : seq) {
                distinct.insert(format_sdr(x));
            }
            CHECK(static_cast<int>(distinct.size()) == set.vocab);
        }
    }
    CHECK_THROWS_AS(gen_sequences(1, 1, 0.0, 100, 5, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_sequences(1, 10, 1.0, 100, 5, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_sequences(0, 10, 0.0, 100, 5, rng), std::invalid_argument);
}

TEST_CASE("codebook is deterministic and injective") {
    const Codebook a("ABC", 100, 5, 7);
    const Codebook b("ABC", 100, 5, 7);
    for (char c : {'A', 'B', 'C'}) {
        CHECK(a.at(c) == b.at(c));
    }
    CHECK(a.at('A') != a.at('B'));
    CHECK(a.decode(a.at('B')) == 'B');
    CHECK(!a.decode(Sdr(100, {0, 1, 2, 3, 4})).has_value());
    CHECK_THROWS_AS(a.at('Z'), std::invalid_argument);
    CHECK_THROWS_AS(Codebook("AA", 100, 5, 7), std::invalid_argument);

    const Codebook other("ABC", 100, 5, 8);
    CHECK(a.at('A') != other.at('A'));
}

TEST_CASE("load_fasta maps records through the amino-acid codebook") {
    TempFasta file("simple.fasta", ">r1\nMGA\n");
    const SequenceSet set = load_fasta(file.path, 3);
    REQUIRE(set.sequences.size() == 1);
    CHECK(set.texts[0] == "MGA");
    CHECK(set.sequences[0].size() == 3);

    const Codebook book(std::string(kAminoAcids), 100, 5, 3);
    CHECK(set.sequences[0][0] == book.at('M'));
    CHECK(set.sequences[0][1] == book.at('G'));
    CHECK(set.sequences[0][2] == book.at('A'));
}

TEST_CASE("load_fasta parses the 250-residue sample") {
    TempFasta file("sample.fasta", kSampleRecord);
    const SequenceSet set = load_fasta(file.path, 3);
    REQUIRE(set.sequences.size() == 1);
    CHECK(set.sequences[0].size() == 250);
    CHECK(set.texts[0].size() == 250);
    CHECK(set.dropped_records == 0);
}

TEST_CASE("load_fasta round-trips symbols through the codebook") {
    TempFasta file("roundtrip.fasta", ">r\nACDEFGHIKLMNPQRSTVWY\n");
    const SequenceSet set = load_fasta(file.path, 11);
    const Codebook book(std::string(kAminoAcids), 100, 5, 11);
    std::string rebuilt;
    for (const auto& pattern : set.sequences[0]) {
        auto c = book.decode(pattern);
        REQUIRE(c.has_value());
        rebuilt.push_back(*c);
    }
    CHECK(rebuilt == set.texts[0]);
}

TEST_CASE("load_fasta drops records with repeated first residues") {
    TempFasta file("dups.fasta", ">a\nMGA\n>b\nMSS\n>c\nGAM\n");
    const SequenceSet set = load_fasta(file.path, 3);
    CHECK(set.sequences.size() == 2);
    CHECK(set.dropped_records == 1);
    CHECK(set.texts[0] == "MGA");
    CHECK(set.texts[1] == "GAM");
}

TEST_CASE("load_fasta reports parse errors with position") {
    TempFasta file("bad.fasta", ">a\nMG1\n");
    try {
        load_fasta(file.path, 3);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }

    TempFasta empty("empty.fasta", "");
    CHECK_THROWS_AS(load_fasta(empty.path, 3), ParseError);

    TempFasta headerless("headerless.fasta", "MGA\n");
    CHECK_THROWS_AS(load_fasta(headerless.path, 3), ParseError);

    CHECK_THROWS_AS(load_fasta("/nonexistent.fasta", 3), std::runtime_error);
}

TEST_CASE("load_fasta truncates to the length cap") {
    TempFasta file("long.fasta", kSampleRecord);
    const SequenceSet set = load_fasta(file.path, 3, 100, 5, 64);
    CHECK(set.sequences[0].size() == 64);
}

TEST_CASE("word_dataset embeds one hundred 4-letter words") {
    const WordDataset words = word_dataset(5);
    CHECK(words.words.size() == 100);
    CHECK(words.set.sequences.size() == 100);
    for (const auto& seq : words.set.sequences) {
        CHECK(seq.size() == 4);
    }
    CHECK(words.letters.symbols().size() <= 26);

    // shared prefixes share their letter patterns exactly
    const auto& that = words.set.sequences[0];
    const auto& they = words.set.sequences[2];
    CHECK(words.set.texts[0] == "that");
    CHECK(words.set.texts[2] == "they");
    CHECK(that[0] == they[0]);
    CHECK(that[1] == they[1]);
    CHECK(that[2] != they[2]);

    // all words decode back to their text
    for (std::size_t i = 0; i < 5; ++i) {
        std::string rebuilt;
        for (const auto& pattern : words.set.sequences[i]) {
            rebuilt.push_back(*words.letters.decode(pattern));
        }
        CHECK(rebuilt == words.set.texts[i]);
    }
}
