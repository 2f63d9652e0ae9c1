#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "cpex/decision_class.hpp"
#include "cpex/rng.hpp"

using namespace cpex;

namespace {

vecd random_costs(rng_stream& rng, int k, double lo = -1.0, double hi = 1.0) {
    vecd c(std::size_t(k), 0.0);
    for (auto& x : c) x = rng.uniform(lo, hi);
    return c;
}

// exhaustive reference oracle with the same lexicographic tie-break
hypothesis_vec brute_oracle(const decision_class& cls, const vecd& c) {
    const auto members = cls.enumerate();
    const hypothesis_vec* best = nullptr;
    double best_val = 0;
    for (const auto& v : members) {
        const double val = set_value(v, c);
        if (!best || val > best_val) {
            best = &v;
            best_val = val;
        }
    }
    return *best;
}

} // namespace

TEST_CASE("top_k oracle") {
    const auto cls = decision_class::top_k(3, 2);
    CHECK(cls.oracle({3, 1, 2}) == hypothesis_vec{1, 0, 1});
    CHECK(*cls.constrained_oracle({3, 1, 2}, 0, 0) == hypothesis_vec{0, 1, 1});
    CHECK(cls.contains({1, 0, 1}));
    CHECK_FALSE(cls.contains({1, 1, 1}));
    // tie-break: lexicographically smallest bit vector
    CHECK(decision_class::top_k(4, 1).oracle({1, 1, 1, 1}) == hypothesis_vec{0, 0, 0, 1});
}

TEST_CASE("disj_set oracle") {
    const auto cls = decision_class::disj_set(6, 2);
    CHECK(cls.oracle({0, 0, 5, 5, 1, 1}) == hypothesis_vec{0, 0, 1, 1, 0, 0});
    CHECK(cls.enumerate().size() == 3);
    CHECK(*cls.constrained_oracle({0, 0, 0, 0, 0, 0}, 0, 1) == hypothesis_vec{1, 1, 0, 0, 0, 0});
    // tie-break toward the lex-smallest block
    CHECK(cls.oracle({0, 0, 0, 0, 0, 0}) == hypothesis_vec{0, 0, 0, 0, 1, 1});
    // single block: the v(a)=0 face is empty
    const auto single = decision_class::disj_set(3, 3);
    CHECK_FALSE(single.constrained_oracle({0, 0, 0}, 1, 0).has_value());
}

TEST_CASE("matching class basics") {
    const auto m2 = decision_class::matching(2);
    CHECK(m2.enumerate().size() == 2);
    CHECK(decision_class::matching(3).enumerate().size() == 6);
    // edge set {(0,0),(1,0)} shares a column vertex
    CHECK_FALSE(m2.contains({1, 0, 1, 0}));
    CHECK(m2.contains({1, 0, 0, 1}));
    // constraint edge(0,1) = 1 forces the anti-diagonal matching
    CHECK(*m2.constrained_oracle({1, 1, 1, 1}, 1, 1) == hypothesis_vec{0, 1, 1, 0});
    // n = 1: the only matching uses the single edge
    const auto m1 = decision_class::matching(1);
    CHECK_FALSE(m1.constrained_oracle({1}, 0, 0).has_value());
    CHECK(*m1.constrained_oracle({1}, 0, 1) == hypothesis_vec{1});
}

TEST_CASE("matching oracle equals exhaustive enumeration") {
    rng_stream rng(123);
    for (int n : {2, 3, 4}) {
        const auto cls = decision_class::matching(n);
        for (int it = 0; it < 100; ++it) {
            const auto c = random_costs(rng, n * n, -2.0, 2.0);
            CHECK(cls.oracle(c) == brute_oracle(cls, c));
        }
    }
    // structured ties: all-equal weights give the lex-smallest matching
    const auto m3 = decision_class::matching(3);
    CHECK(m3.oracle(vecd(9, 1.0)) == m3.enumerate().front());
}

TEST_CASE("biclique class") {
    const auto cls = decision_class::biclique(16, 4);
    CHECK(cls.enumerate().size() == 36);
    CHECK_THROWS_AS(cls.oracle(vecd(16, 0.0)), unsupported_oracle_error);
    CHECK_THROWS_AS(cls.constrained_oracle(vecd(16, 0.0), 0, 1), unsupported_oracle_error);
    const auto members = cls.enumerate();
    for (const auto& v : members) CHECK(cls.contains(v));
    // rows {0,1} x cols {0,1} is a member; an L-shape is not
    hypothesis_vec good(16, 0);
    good[0] = good[1] = good[4] = good[5] = 1;
    CHECK(cls.contains(good));
    hypothesis_vec bad = good;
    bad[5] = 0;
    bad[6] = 1;
    CHECK_FALSE(cls.contains(bad));
}

TEST_CASE("oracle attains the enumerated maximum") {
    rng_stream rng(321);
    const decision_class classes[] = {
        decision_class::top_k(6, 2),
        decision_class::top_k(5, 3),
        decision_class::disj_set(8, 2),
        decision_class::matching(3),
        decision_class::explicit_set({{1, 0, 1, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}}),
    };
    for (const auto& cls : classes) {
        const auto members = cls.enumerate();
        for (int it = 0; it < 200; ++it) {
            const auto c = random_costs(rng, cls.arms());
            const auto got = cls.oracle(c);
            CHECK(cls.contains(got));
            double best = -1e300;
            for (const auto& v : members) best = std::max(best, set_value(v, c));
            CHECK(set_value(got, c) == Catch::Approx(best).margin(1e-12));
            // determinism, bit for bit
            CHECK(cls.oracle(c) == got);
        }
    }
}

TEST_CASE("constrained oracle respects the face and attains its maximum") {
    rng_stream rng(17);
    const decision_class classes[] = {
        decision_class::top_k(6, 2),
        decision_class::disj_set(8, 2),
        decision_class::matching(3),
        decision_class::explicit_set({{1, 0, 1, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}}),
    };
    for (const auto& cls : classes) {
        const auto members = cls.enumerate();
        for (int it = 0; it < 120; ++it) {
            const auto c = random_costs(rng, cls.arms());
            const int a = int(rng.uniform_index(std::uint64_t(cls.arms())));
            const int b = int(rng.uniform_index(2));
            const auto got = cls.constrained_oracle(c, a, b);
            double best = -1e300;
            bool nonempty = false;
            for (const auto& v : members)
                if (int(v[std::size_t(a)]) == b) {
                    nonempty = true;
                    best = std::max(best, set_value(v, c));
                }
            REQUIRE(got.has_value() == nonempty);
            if (got) {
                CHECK(int((*got)[std::size_t(a)]) == b);
                CHECK(cls.contains(*got));
                CHECK(set_value(*got, c) == Catch::Approx(best).margin(1e-12));
            }
        }
    }
}

TEST_CASE("enumeration is lexicographic and duplicate-free") {
    for (const auto& cls : {decision_class::top_k(6, 3), decision_class::matching(3),
                            decision_class::biclique(16, 4)}) {
        const auto members = cls.enumerate();
        CHECK(std::is_sorted(members.begin(), members.end()));
        CHECK(std::adjacent_find(members.begin(), members.end()) == members.end());
    }
    CHECK_THROWS_AS(decision_class::matching(12).enumerate(), too_large_error);
}

TEST_CASE("explicit class validation") {
    CHECK_THROWS_AS(decision_class::explicit_set({}), domain_error);
    CHECK_THROWS_AS(decision_class::explicit_set({{1, 0}, {1, 0}}), domain_error);
    CHECK_THROWS_AS(decision_class::explicit_set({{1, 0}, {1, 0, 1}}), dimension_error);
}
