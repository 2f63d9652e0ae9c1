#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cpex/disagreement.hpp"
#include "test_util.hpp"

using namespace cpex;
using namespace cpex::testutil;

namespace {

const decision_class two_class = decision_class::explicit_set({{1, 0}, {0, 1}});

} // namespace

TEST_CASE("ftpl decision: symmetry, domination, near-uniformity") {
    const auto top1 = decision_class::top_k(2, 1);
    rng_stream rng(1);
    int first = 0;
    for (int i = 0; i < 10000; ++i)
        if (ftpl_decision(top1, {0.0, 0.0}, 1.0, rng) == hypothesis_vec{1, 0}) ++first;
    CHECK(std::fabs(first / 10000.0 - 0.5) < 0.05);

    // payoff gap 5 dwarfs a [0,1] perturbation
    for (int i = 0; i < 200; ++i)
        CHECK(ftpl_decision(top1, {5.0, 0.0}, 1.0, rng) == hypothesis_vec{1, 0});

    // tiny epsilon: distribution approaches uniform over the vertices
    const auto top13 = decision_class::top_k(3, 1);
    int counts[3] = {0, 0, 0};
    const int n = 9000;
    for (int i = 0; i < n; ++i) {
        const auto v = ftpl_decision(top13, {0.0, 0.0, 0.0}, 1e-3, rng);
        for (int a = 0; a < 3; ++a)
            if (v[std::size_t(a)]) ++counts[a];
    }
    double chi2 = 0.0;
    for (int a = 0; a < 3; ++a) chi2 += (counts[a] - n / 3.0) * (counts[a] - n / 3.0) / (n / 3.0);
    CHECK(chi2 < 13.8); // chi-square df=2 at the 0.1% level
}

TEST_CASE("inner program") {
    SECTION("hand-evaluated example") {
        const auto r = inner_program(two_class, {{1, 0}}, 0.2, {0.5, 0.1}, 1, 1);
        REQUIRE(r.has_value());
        CHECK(r->first == Catch::Approx(0.3));
        CHECK(r->second == hypothesis_vec{0, 1});
    }
    SECTION("singleton face wins regardless of cost") {
        const auto r = inner_program(two_class, {{0, 1}}, 0.9, {-1.0, 1.0}, 0, 1);
        REQUIRE(r.has_value());
        CHECK(r->second == hypothesis_vec{1, 0});
    }
    SECTION("averaging is idempotent on identical samples") {
        const std::vector<hypothesis_vec> one = {{1, 0}};
        const std::vector<hypothesis_vec> many(7, hypothesis_vec{1, 0});
        const auto a = inner_program(two_class, one, 0.2, {0.5, 0.1}, 1, 1);
        const auto b = inner_program(two_class, many, 0.2, {0.5, 0.1}, 1, 1);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->first == Catch::Approx(b->first));
        CHECK(a->second == b->second);
    }
    SECTION("infeasible face propagates") {
        const auto solo = decision_class::explicit_set({{1, 0}});
        CHECK_FALSE(inner_program(solo, {{1, 0}}, 0.2, {0.0, 0.0}, 0, 0).has_value());
        CHECK_THROWS_AS(inner_program(two_class, {}, 0.2, {0.0, 0.0}, 0, 0), domain_error);
    }
}

TEST_CASE("paper round count magnitude") {
    const auto plan = plan_ftpl(4, 0.5, 0.1, disagreement_config::ftpl_paper());
    CHECK(plan.rounds >= 210'000);
    CHECK(plan.rounds <= 230'000);
    CHECK(plan.epsilon == Catch::Approx(std::sqrt(1.0 / (25.0 * 4 * double(plan.rounds) *
                                                         std::log(4.0 * 4 / 0.1)))));
}

TEST_CASE("disagree on the two-hypothesis instance") {
    rng_stream rng(3);
    const vecd mu_hat = {0.5, 0.1};
    const auto brute = disagreement_config::brute();
    const auto ftpl = disagreement_config::ftpl_scaled(1e-2, 1e-2);
    SECTION("radius 0.3 admits the competitor") {
        for (const auto& cfg : {brute, ftpl}) {
            const auto v = disagree(two_class, 1, 1, 0.3, mu_hat, 0.1, cfg, rng);
            CHECK(v.feasible);
            REQUIRE(v.certificate.has_value());
            CHECK((*v.certificate)[1] == Catch::Approx(1.0));
        }
    }
    SECTION("radius 0.1 leaves the face infeasible") {
        for (const auto& cfg : {brute, ftpl}) {
            const auto v = disagree(two_class, 1, 1, 0.1, mu_hat, 0.1, cfg, rng);
            CHECK_FALSE(v.feasible);
        }
    }
    SECTION("empty face is never a disagreement") {
        const auto solo = decision_class::explicit_set({{1, 0}});
        for (const auto& cfg : {brute, ftpl}) {
            const auto v = disagree(solo, 0, 0, 0.3, {0.0, 0.0}, 0.1, cfg, rng);
            CHECK_FALSE(v.feasible);
            CHECK(v.rounds_used == 0);
        }
    }
    SECTION("radius below the clamp is rejected") {
        CHECK_THROWS_AS(disagree(two_class, 1, 1, 1e-7, mu_hat, 0.1, brute, rng), domain_error);
    }
}

TEST_CASE("exact backend decides over the hull, not just the vertices") {
    // face {v(3) = 0} = {e_1, e_2}; each face vertex is beaten by exactly one
    // outside constraint, but the midpoint dilutes both violations
    const auto cls = decision_class::explicit_set(
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 1}, {0, 1, 1, 1}});
    const auto brute = disagreement_config::brute();
    rng_stream rng(5);
    const double delta = 0.4;
    {
        const vecd mu_hat = {0.0, 0.0, 0.5, 0.5};
        bool some_vertex_feasible = false;
        for (const auto& v : cls.enumerate()) {
            if (v[3] != 0) continue;
            bool ok = true;
            for (const auto& u : cls.enumerate())
                if (diff_value(mu_hat, u, v) > delta * distance(u, v)) ok = false;
            some_vertex_feasible = some_vertex_feasible || ok;
        }
        CHECK_FALSE(some_vertex_feasible);
        const auto verdict = disagree(cls, 3, 0, delta, mu_hat, 0.1, brute, rng);
        CHECK(verdict.feasible);
        REQUIRE(verdict.certificate.has_value());
        CHECK(relaxed_feasibility_check(cls, *verdict.certificate, delta, mu_hat, 3, 0));
    }
    {
        // pushing the outside pull past 3*delta closes the whole face
        const vecd mu_hat = {0.0, 0.0, 0.65, 0.65};
        const auto verdict = disagree(cls, 3, 0, delta, mu_hat, 0.1, brute, rng);
        CHECK_FALSE(verdict.feasible);
    }
}

TEST_CASE("ftpl false verdicts are sound against the exact backend") {
    rng_stream rng(1234);
    int falses = 0;
    for (int it = 0; it < 60; ++it) {
        const auto cls = random_small_class(rng);
        const int k = cls.arms();
        const auto mu_hat = random_vec(rng, k, -1.0, 1.0);
        const double delta = rng.uniform(0.05, 1.0);
        const int a = int(rng.uniform_index(std::uint64_t(k)));
        const int b = int(rng.uniform_index(2));
        const auto t_paper = double(paper_round_count(k, delta, 0.1));
        const auto cfg = disagreement_config::ftpl_scaled(600.0 / t_paper, 1e-3);
        const auto verdict = disagree(cls, a, b, delta, mu_hat, 0.1, cfg, rng);
        if (!verdict.feasible) {
            ++falses;
            const auto exact =
                disagree(cls, a, b, delta, mu_hat, 0.1, disagreement_config::brute(), rng);
            CHECK_FALSE(exact.feasible);
        }
    }
    CHECK(falses > 0); // the sweep must actually exercise the false path
}

TEST_CASE("paper constants on a micro instance certify infeasibility fast") {
    // every face point violates the constraint parameterized by (1,0), so the
    // first round's sample mix already witnesses infeasibility
    rng_stream rng(9);
    const auto v = disagree(two_class, 1, 1, 0.8, {0.9, -0.9}, 0.5,
                            disagreement_config::ftpl_paper(), rng);
    CHECK_FALSE(v.feasible);
    CHECK(v.rounds_used <= 3);
    const auto exact = disagree(two_class, 1, 1, 0.8, {0.9, -0.9}, 0.5,
                                disagreement_config::brute(), rng);
    CHECK_FALSE(exact.feasible);
}

TEST_CASE("relaxed feasibility check") {
    const vecd mu_hat = {0.5, 0.1};
    // the strict member (0,1) of the version space passes with slack
    CHECK(relaxed_feasibility_check(two_class, {0.0, 1.0}, 0.3, mu_hat, 1, 1));
    // wrong face coordinate
    CHECK_FALSE(relaxed_feasibility_check(two_class, {0.0, 1.0}, 0.3, mu_hat, 0, 1));
    // violating a constraint by more than 2*delta fails even with the slack
    CHECK_FALSE(relaxed_feasibility_check(two_class, {0.0, 1.0}, 0.1, mu_hat, 1, 1));
}

TEST_CASE("empirical ftpl distribution concentrates around its mean") {
    // two-hypothesis class where the perturbed-leader law has a closed form:
    // p(v1) = P[sigma_0 - sigma_1 > c_1 - c_0], a triangular-distribution tail
    const auto top1 = decision_class::top_k(2, 1);
    const int rounds = 15, m = 400, trials = 250;
    const double delta = 0.1, eps = 0.05;
    const double bound = 6.0 * std::sqrt(std::log(2.0 * 2 * rounds / delta) / (2.0 * m));
    const double M = 1.0 / eps;
    auto tail = [&](double theta) {
        if (theta >= M) return 0.0;
        if (theta <= -M) return 1.0;
        if (theta >= 0) return (M - theta) * (M - theta) / (2.0 * M * M);
        return 1.0 - (theta + M) * (theta + M) / (2.0 * M * M);
    };
    int good = 0;
    rng_stream rng(42);
    for (int trial = 0; trial < trials; ++trial) {
        vecd payoff = {0.0, 0.0};
        bool ok = true;
        for (int t = 0; t < rounds; ++t) {
            const double p1 = tail(payoff[1] - payoff[0]);
            int hits = 0;
            for (int i = 0; i < m; ++i)
                if (ftpl_decision(top1, payoff, eps, rng) == hypothesis_vec{1, 0}) ++hits;
            const vecd loss = {rng.uniform01() < 0.5 ? 1.0 : -1.0,
                               rng.uniform01() < 0.5 ? 1.0 : -1.0};
            const double dev = std::fabs((double(hits) / m - p1) * (loss[0] - loss[1]));
            if (dev > bound) ok = false;
            payoff[0] -= loss[0];
            payoff[1] -= loss[1];
        }
        if (ok) ++good;
    }
    CHECK(double(good) / trials >= 1.0 - delta);
}

TEST_CASE("ftpl regret stays within the analysis bound (small run)") {
    const auto cls = decision_class::top_k(4, 2);
    const int K = 4, T = 100, runs = 10;
    const double delta = 0.1;
    const double eps = std::sqrt(1.0 / (25.0 * K * T * std::log(2.0 * K / delta)));
    const double ra = 5.0 * K * std::sqrt(std::log(2.0 * K / delta));
    const double bound = 2.0 * std::sqrt(double(K) * ra * ra * T);
    const auto members = cls.enumerate();
    double total_regret = 0.0;
    for (int run = 0; run < runs; ++run) {
        rng_stream rng(100 + std::uint64_t(run));
        vecd payoff(4, 0.0), cum_loss(4, 0.0);
        double realized = 0.0;
        for (int t = 0; t < T; ++t) {
            const auto u = ftpl_decision(cls, payoff, eps, rng);
            vecd loss(4, 0.0);
            for (auto& l : loss) l = rng.uniform01() < 0.5 ? 1.0 : -1.0;
            realized += set_value(u, loss);
            for (int i = 0; i < 4; ++i) {
                payoff[std::size_t(i)] -= loss[std::size_t(i)];
                cum_loss[std::size_t(i)] += loss[std::size_t(i)];
            }
        }
        double best = 1e300;
        for (const auto& v : members) best = std::min(best, set_value(v, cum_loss));
        total_regret += realized - best;
    }
    CHECK(total_regret / runs <= bound);
}
