// mle.hpp -- the non-interactive baseline: split the budget evenly, take the
// empirical maximizer. Also the Monte Carlo audit of the normalized regret
// inequality that the baseline's budget formula is solved from.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/report.hpp"

namespace cpex {

inline run_report run_mle(const decision_class& cls, bandit_env& env, std::int64_t T) {
    const auto t0 = std::chrono::steady_clock::now();
    const int K = cls.arms();
    require_same_length(std::size_t(K), env.mu().size(), "run_mle");
    if (T < K) throw insufficient_budget_error("run_mle: budget below one sample per arm");
    const std::int64_t per_arm = T / K; // remainder dropped
    vecd mu_hat(std::size_t(K), 0.0);
    for (int a = 0; a < K; ++a) {
        for (std::int64_t i = 0; i < per_arm; ++i) mu_hat[std::size_t(a)] += env.pull(a);
        mu_hat[std::size_t(a)] /= double(per_arm);
    }
    run_report rep;
    rep.seed = env.seed();
    rep.answer = argmax_member(cls, mu_hat);
    rep.oracle_calls = 1;
    rep.rounds = per_arm;
    rep.per_arm_queries = env.query_counts();
    rep.total_queries = env.total_queries();
    rep.correct = rep.answer == argmax_member(cls, env.mu());
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Budget sufficient for the 1 - failure_prob guarantee:
/// ceil((2K / min_v Delta_v^2) (Phi + log(2K/delta) / Psi)), the normalized
/// regret radius solved for T at epsilon = min_v Delta_v.
inline std::int64_t mle_budget(const decision_class& cls, const vecd& mu, double failure_prob) {
    const int K = cls.arms();
    const auto profile = compute_gap_profile(cls, mu);
    const double min_gap = profile.min_hypothesis_gap();
    if (!(min_gap > 0.0)) throw degenerate_instance_error("mle_budget: nonpositive minimum gap");
    const double phi = phi_of(cls);
    const double psi = double(psi_of(cls));
    const double budget = 2.0 * double(K) / (min_gap * min_gap) *
                          (phi + std::log(2.0 * double(K) / failure_prob) / psi);
    return std::int64_t(std::ceil(budget));
}

/// Fraction of `trials` uniform-sampling runs in which some hypothesis
/// violates  |<v* - v, mu_hat - mu>| / d(v*, v) >= sqrt((2K/T)(Phi + log(2K/d)/Psi)).
inline double audit_lemma1(const decision_class& cls, const vecd& mu, std::int64_t T,
                           double failure_prob, int trials, noise_kind kind,
                           std::uint64_t base_seed) {
    const int K = cls.arms();
    const std::int64_t per_arm = T / K;
    if (per_arm < 1) throw insufficient_budget_error("audit_lemma1: budget below one sample per arm");
    const double t_eff = double(per_arm * K);
    const double phi = phi_of(cls);
    const double psi = double(psi_of(cls));
    const double radius =
        std::sqrt(2.0 * double(K) / t_eff * (phi + std::log(2.0 * double(K) / failure_prob) / psi));
    const auto members = cls.enumerate();
    const auto star = argmax_member(cls, mu);

    int violations = 0;
    for (int trial = 0; trial < trials; ++trial) {
        bandit_env env(mu, kind, base_seed + std::uint64_t(trial));
        vecd err(std::size_t(K), 0.0); // mu_hat - mu
        for (int a = 0; a < K; ++a) {
            double s = 0.0;
            for (std::int64_t i = 0; i < per_arm; ++i) s += env.pull(a);
            err[std::size_t(a)] = s / double(per_arm) - mu[std::size_t(a)];
        }
        for (const auto& v : members) {
            if (v == star) continue;
            const double dev = std::fabs(diff_value(err, star, v)) / double(distance(star, v));
            if (dev >= radius) {
                ++violations;
                break;
            }
        }
    }
    return double(violations) / double(trials);
}

} // namespace cpex
