#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cpex/fixed_confidence.hpp"
#include "test_util.hpp"

using namespace cpex;
using namespace cpex::testutil;

namespace {

// conditional-mean vector at a round, rebuilt from the trace
vecd reconstruct_mu_bar(const fc_round_event& ev, const vecd& mu) {
    vecd bar(mu.size());
    for (std::size_t a = 0; a < mu.size(); ++a)
        bar[a] = ev.queried[a] ? mu[a] : 2.0 * double(ev.v_hat[a]) - 1.0;
    return bar;
}

} // namespace

TEST_CASE("delta schedule") {
    CHECK(delta_schedule(1000, std::log(2.0) / 4.0, 4, 6, 0.1) ==
          Catch::Approx(0.2044).margin(5e-4));
    // early rounds clamp at 1
    CHECK(delta_schedule(1, 0.0, 2, 2, 0.1) == 1.0);
    // nonincreasing past the log/t crossover
    for (const auto& [phi, psi, k] :
         {std::tuple{0.17, 4.0, 6}, std::tuple{1.04, 2.0, 6}, std::tuple{0.0, 2.0, 2}}) {
        double prev = delta_schedule(3, phi, psi, k, 0.1);
        for (std::int64_t t = 4; t <= 2000; ++t) {
            const double cur = delta_schedule(t, phi, psi, k, 0.1);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("noiseless run stops exactly at the radius crossing") {
    const auto cls = decision_class::disj_set(4, 2);
    const vecd mu = {0.5, 0.5, -0.5, -0.5};
    bandit_env env(mu, noise_kind::noiseless, 11);
    const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute());
    CHECK(rep.completed);
    CHECK(rep.correct);
    CHECK(rep.answer == hypothesis_vec{1, 1, 0, 0});
    // independent computation of the first round whose radius drops below the
    // normalized gap 0.5 (both hypotheses disagree everywhere, so every arm
    // is live until then)
    const double phi = phi_of(cls);
    const double psi = double(psi_of(cls));
    std::int64_t stop = 0;
    for (std::int64_t t = 1; t < 10000 && stop == 0; ++t)
        if (delta_schedule(t, phi, psi, 4, 0.1) < 0.5) stop = t;
    CHECK(rep.rounds == stop);
    for (auto q : rep.per_arm_queries) {
        CHECK(q == stop); // one initial pull + one per disagreement round
        CHECK(q <= 200);
    }
    CHECK(rep.total_queries == 4 * stop);
    // determinism: identical rerun
    bandit_env env2(mu, noise_kind::noiseless, 11);
    const auto rep2 = run_fixed_confidence(cls, env2, 0.1, disagreement_config::brute());
    CHECK(rep2.answer == rep.answer);
    CHECK(rep2.total_queries == rep.total_queries);
}

TEST_CASE("single-hypothesis class terminates immediately") {
    const auto cls = decision_class::explicit_set({{1, 0, 1}});
    bandit_env env({0.2, 0.1, -0.3}, noise_kind::gaussian, 3);
    const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute());
    CHECK(rep.completed);
    CHECK(rep.rounds == 1);
    CHECK(rep.answer == hypothesis_vec{1, 0, 1});
    CHECK(rep.total_queries == 3); // the initial sweep only
}

TEST_CASE("gaussian runs find the optimum") {
    const auto cls = decision_class::disj_set(6, 2);
    const auto star = cls.enumerate().back();
    const auto mu = homogeneous_mu(star, 0.5);
    int correct = 0;
    for (int trial = 0; trial < 20; ++trial) {
        bandit_env env(mu, noise_kind::gaussian, 500 + std::uint64_t(trial));
        const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute());
        correct += rep.correct;
        CHECK(rep.completed);
        CHECK(rep.total_queries == env.total_queries());
    }
    CHECK(correct >= 19);
}

TEST_CASE("ftpl backend agrees on an easy instance") {
    const auto cls = decision_class::top_k(2, 1);
    bandit_env env({0.5, -0.5}, noise_kind::noiseless, 17);
    fc_options opt;
    opt.max_rounds = 20000;
    const auto rep = run_fixed_confidence(cls, env, 0.1,
                                          disagreement_config::ftpl_scaled(1e-3, 1e-3), opt);
    CHECK(rep.completed);
    CHECK(rep.answer == hypothesis_vec{1, 0});
    CHECK(rep.oracle_calls > 0);
}

TEST_CASE("hallucinated observations favor the survivors") {
    // noiseless heterogeneous instance: the reconstructed conditional means
    // never tilt toward a competitor
    const auto cls = decision_class::disj_set(6, 2);
    const vecd mu = {0.5, 0.5, -0.1, -0.1, -0.5, -0.5};
    bandit_env env(mu, noise_kind::noiseless, 1);
    const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute());
    REQUIRE(rep.correct);
    const auto star = argmax_member(cls, mu);
    for (const auto& ev : rep.fc_trace) {
        const auto bar = reconstruct_mu_bar(ev, mu);
        for (const auto& v : cls.enumerate())
            CHECK(diff_value(bar, star, v) >= diff_value(mu, star, v) - 1e-12);
    }
}

TEST_CASE("a stopped arm stays stopped") {
    // once the verdict is false at a round with delta_t < gap/3, it stays
    // false at every later round
    const auto cls = decision_class::disj_set(6, 2);
    const vecd mu = {0.5, 0.5, -0.1, -0.1, -0.5, -0.5};
    const auto profile = compute_gap_profile(cls, mu);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        bandit_env env(mu, seed == 1 ? noise_kind::noiseless : noise_kind::gaussian, seed);
        const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute());
        for (int a = 0; a < cls.arms(); ++a) {
            const double gap = profile.per_arm[std::size_t(a)];
            bool stopped = false;
            for (const auto& ev : rep.fc_trace) {
                const bool live = ev.verdicts[std::size_t(a)] != 0;
                if (stopped) CHECK_FALSE(live);
                if (!live && ev.delta_t < gap / 3.0) stopped = true;
            }
        }
    }
}

TEST_CASE("per-arm queries respect the sample-complexity cap") {
    const auto cls = decision_class::disj_set(6, 2);
    const auto star = cls.enumerate().back();
    const auto mu = homogeneous_mu(star, 0.5);
    const auto profile = compute_gap_profile(cls, mu);
    const double phi = phi_of(cls), psi = double(psi_of(cls)), delta = 0.1;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        bandit_env env(mu, noise_kind::gaussian, 900 + seed);
        const auto rep = run_fixed_confidence(cls, env, delta, disagreement_config::brute());
        for (int a = 0; a < cls.arms(); ++a) {
            const double g = profile.per_arm[std::size_t(a)];
            const double cap =
                144.0 / (g * g) *
                (phi + (2.0 * std::log(144.0 / (g * g * psi)) +
                        2.0 * std::log(double(cls.arms()) * M_PI * M_PI / delta)) /
                           psi);
            CHECK(double(rep.per_arm_queries[std::size_t(a)]) <= cap);
        }
    }
}

TEST_CASE("martingale deviations stay inside the schedule radius") {
    const auto cls = decision_class::disj_set(4, 2);
    const vecd mu = {0.5, 0.5, -0.5, -0.5};
    const auto star = argmax_member(cls, mu);
    const auto members = cls.enumerate();
    const int trials = 500;
    const double delta = 0.1;
    int good = 0;
    fc_options opt;
    opt.record_observations = true;
    for (int trial = 0; trial < trials; ++trial) {
        bandit_env env(mu, noise_kind::gaussian, 7000 + std::uint64_t(trial));
        const auto rep = run_fixed_confidence(cls, env, delta, disagreement_config::brute(), opt);
        vecd z(4, 0.0); // running sum of (mu_bar_i - y_i)
        bool ok = true;
        for (const auto& ev : rep.fc_trace) {
            if (ev.round > 1000) break;
            const auto bar = reconstruct_mu_bar(ev, mu);
            for (int a = 0; a < 4; ++a)
                z[std::size_t(a)] += bar[std::size_t(a)] - ev.observations[std::size_t(a)];
            for (const auto& v : members) {
                if (v == star) continue;
                const double dev = std::fabs(diff_value(z, star, v)) / double(ev.round);
                if (dev > double(distance(star, v)) * ev.delta_t) ok = false;
            }
        }
        if (ok) ++good;
    }
    CHECK(double(good) / trials >= 1.0 - delta / 2.0 - 0.03);
}

TEST_CASE("hitting max_rounds is flagged, not silent") {
    const auto cls = decision_class::disj_set(6, 2);
    bandit_env env(homogeneous_mu(cls.enumerate().back(), 0.3), noise_kind::gaussian, 5);
    fc_options opt;
    opt.max_rounds = 5;
    const auto rep = run_fixed_confidence(cls, env, 0.1, disagreement_config::brute(), opt);
    CHECK_FALSE(rep.completed);
    CHECK(rep.rounds == 5);
}

TEST_CASE("phi upper-bound fallback still succeeds, with more samples") {
    const auto cls = decision_class::disj_set(6, 2);
    const auto mu = homogeneous_mu(cls.enumerate().back(), 0.5);
    bandit_env e1(mu, noise_kind::noiseless, 8);
    bandit_env e2(mu, noise_kind::noiseless, 8);
    fc_options fallback;
    fallback.phi_log_upper = true;
    const auto exact = run_fixed_confidence(cls, e1, 0.1, disagreement_config::brute());
    const auto loose = run_fixed_confidence(cls, e2, 0.1, disagreement_config::brute(), fallback);
    CHECK(exact.correct);
    CHECK(loose.correct);
    CHECK(loose.total_queries >= exact.total_queries);
}
