#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pam/errors.hpp"
#include "pam/metrics.hpp"
#include "pam/sdr.hpp"

using namespace pam;

TEST_CASE("Sdr construction validates and normalizes") {
    const Sdr x(10, {7, 2, 5});
    CHECK(x.width() == 3);
    CHECK(x.active()[0] == 2);
    CHECK(x.active()[2] == 7);
    CHECK(x.contains(5));
    CHECK(!x.contains(3));
    CHECK_THROWS_AS(Sdr(10, {10}), std::invalid_argument);
    CHECK_THROWS_AS(Sdr(10, {-1}), std::invalid_argument);
    CHECK_THROWS_AS(Sdr(10, {3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(Sdr(0), std::invalid_argument);
}

TEST_CASE("random_sdr draws the requested cardinality") {
    Rng rng(17);
    const Sdr x = random_sdr(100, 5, rng);
    CHECK(x.size() == 100);
    CHECK(x.width() == 5);
    for (auto i : x.active()) {
        CHECK(i < 100);
    }

    Rng empty_rng(17);
    CHECK(random_sdr(100, 0, empty_rng).width() == 0);

    Rng a(42);
    Rng b(42);
    CHECK(random_sdr(100, 5, a) == random_sdr(100, 5, b));

    Rng bad(1);
    CHECK_THROWS_AS(random_sdr(100, 101, bad), std::invalid_argument);
    CHECK_THROWS_AS(random_sdr(0, 0, bad), std::invalid_argument);
}

TEST_CASE("random_sdr index frequencies are near uniform") {
    Rng rng(7);
    std::vector<int> hits(20, 0);
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const Sdr x = random_sdr(20, 2, rng);
        for (auto idx : x.active()) {
            ++hits[static_cast<std::size_t>(idx)];
        }
    }
    // each index expected draws * 2/20 = 400; 5 sigma ~ +-95
    for (int h : hits) {
        CHECK(h > 300);
        CHECK(h < 500);
    }
}

TEST_CASE("project_up activates all rows of active columns") {
    const LatentSdr z = project_up(Sdr(10, {2}), 3);
    CHECK(z.kind() == LatentKind::Prior);
    CHECK(z.width() == 3);
    CHECK(z.contains(LatentSdr::flat_index(2, 0, 3)));
    CHECK(z.contains(LatentSdr::flat_index(2, 1, 3)));
    CHECK(z.contains(LatentSdr::flat_index(2, 2, 3)));

    CHECK(project_up(Sdr(10), 4).empty());

    const LatentSdr z2 = project_up(Sdr(10, {0, 7}), 2);
    CHECK(z2.width() == 4);
    CHECK(z2.contains(LatentSdr::flat_index(7, 1, 2)));
}

TEST_CASE("project_down keeps columns with any active row") {
    const LatentSdr z(10, 4, {LatentSdr::flat_index(2, 0, 4), LatentSdr::flat_index(2, 1, 4),
                              LatentSdr::flat_index(5, 3, 4)},
                      LatentKind::Prior);
    const Sdr x = project_down(z);
    CHECK(x == Sdr(10, {2, 5}));
    CHECK(project_down(LatentSdr(10, 4, LatentKind::Prior)).empty());
}

TEST_CASE("project_down after project_up is the identity") {
    Rng rng(3);
    for (int k = 1; k <= 4; ++k) {
        for (int i = 0; i < 20; ++i) {
            const Sdr x = random_sdr(50, static_cast<int>(rng.uniform(20)), rng);
            CHECK(project_down(project_up(x, k)) == x);
        }
    }
}

TEST_CASE("posterior latent patterns reject two rows per column") {
    CHECK_THROWS_AS(LatentSdr(4, 2, {0, 1}, LatentKind::Posterior), std::invalid_argument);
    CHECK_NOTHROW(LatentSdr(4, 2, {0, 1}, LatentKind::Prior));
    CHECK_NOTHROW(LatentSdr(4, 2, {0, 3}, LatentKind::Posterior));
}

TEST_CASE("sample_from_union returns the whole set when wide enough") {
    Rng rng(5);
    const Sdr u(10, {1, 2, 3, 4, 5});
    CHECK(sample_from_union(u, 5, rng) == u);
    CHECK(sample_from_union(u, 9, rng) == u);
    CHECK_THROWS_AS(sample_from_union(Sdr(10), 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_from_union(u, 0, rng), std::invalid_argument);
}

TEST_CASE("sample_from_union picks two-element sets evenly") {
    const Sdr u(10, {1, 9});
    int ones = 0;
    for (int seed = 0; seed < 1000; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        const Sdr s = sample_from_union(u, 1, rng);
        CHECK(s.width() == 1);
        if (s.contains(1)) {
            ++ones;
        } else {
            CHECK(s.contains(9));
        }
    }
    CHECK(ones > 450); // 0.5 +- 0.05
    CHECK(ones < 550);
}

TEST_CASE("sample_from_union output is a subset with uniform coverage") {
    Rng data_rng(8);
    const Sdr u = random_sdr(40, 10, data_rng);
    std::map<std::int32_t, int> hits;
    const int draws = 5000;
    for (int i = 0; i < draws; ++i) {
        const Sdr s = sample_from_union(u, 1, data_rng);
        CHECK(s.width() == 1);
        CHECK(u.contains(s.active()[0]));
        ++hits[s.active()[0]];
    }
    // expected 500 per index; 5 sigma of binomial(5000, 0.1) ~ +-106
    for (auto idx : u.active()) {
        CHECK(hits[idx] > 394);
        CHECK(hits[idx] < 606);
    }
}

TEST_CASE("corrupt preserves cardinality and respects the fraction") {
    Rng rng(10);
    const Sdr x = random_sdr(100, 5, rng);

    CHECK(corrupt(x, 0.0, rng) == x);

    const Sdr full = corrupt(x, 1.0, rng);
    CHECK(full.width() == 5);
    CHECK(full.intersect(x).width() == 0);

    const Sdr part = corrupt(x, 0.4, rng); // k = round(2.0) = 2
    CHECK(part.width() == 5);
    CHECK(part.intersect(x).width() == 3);
    CHECK(metrics::jaccard(x, part) == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("corrupt jaccard follows (W-k)/(W+k)") {
    Rng rng(11);
    for (int w : {1, 4, 10, 20}) {
        for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Sdr x = random_sdr(200, w, rng);
            const int k = static_cast<int>(std::floor(f * w + 0.5));
            const Sdr y = corrupt(x, f, rng);
            CHECK(y.width() == w);
            CHECK(metrics::jaccard(x, y) ==
                  doctest::Approx(static_cast<double>(w - k) / (w + k)));
        }
    }
}

TEST_CASE("corrupt fails when there is no room to relocate") {
    Rng rng(12);
    const Sdr x(10, {0, 1, 2, 3, 4, 5, 6, 7});
    CHECK_THROWS_AS(corrupt(x, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(corrupt(x, -0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(corrupt(x, 1.1, rng), std::invalid_argument);
}

TEST_CASE("bipolar encoding round-trips") {
    const Sdr x(4, {1});
    const auto v = to_bipolar(x);
    CHECK(v == std::vector<float>{-1.0f, 1.0f, -1.0f, -1.0f});
    CHECK(from_bipolar(v) == x);

    CHECK(to_bipolar(Sdr(3)) == std::vector<float>{-1.0f, -1.0f, -1.0f});

    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Sdr r = random_sdr(64, static_cast<int>(rng.uniform(65)), rng);
        CHECK(from_bipolar(to_bipolar(r)) == r);
    }
}

TEST_CASE("textual literal formats and parses") {
    const Sdr x(100, {3, 17, 42, 77, 90});
    CHECK(format_sdr(x) == "100:5:{3,17,42,77,90}");
    CHECK(parse_sdr("100:5:{3,17,42,77,90}") == x);
    CHECK(parse_sdr("100:0:{}") == Sdr(100));

    Rng rng(14);
    for (int i = 0; i < 20; ++i) {
        const Sdr r = random_sdr(128, static_cast<int>(rng.uniform(30)), rng);
        CHECK(parse_sdr(format_sdr(r)) == r);
    }

    CHECK_THROWS_AS(parse_sdr("100:5:{1,2}"), ParseError);    // width mismatch
    CHECK_THROWS_AS(parse_sdr("100:2:{5,1}"), ParseError);    // unsorted
    CHECK_THROWS_AS(parse_sdr("100:1:{200}"), ParseError);    // out of range
    CHECK_THROWS_AS(parse_sdr("100:1:{3"), ParseError);       // unterminated
    CHECK_THROWS_AS(parse_sdr("abc"), ParseError);
}

TEST_CASE("set algebra") {
    const Sdr a(10, {1, 2, 3});
    const Sdr b(10, {2, 3, 4});
    CHECK(a.intersect(b) == Sdr(10, {2, 3}));
    CHECK(a.unite(b) == Sdr(10, {1, 2, 3, 4}));
    CHECK(a.difference(b) == Sdr(10, {1}));
}
