// fixed_budget.hpp -- successive accept/reject under a hard query budget.
// One arm is decided per round; decided arms contribute hallucinated +-1
// values to the running means from their decision round onward.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>

#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/report.hpp"

namespace cpex {

struct budget_schedule {
    std::int64_t total = 0;
    int arms = 0;
    double harmonic = 0.0;            // log~(K) = sum_{i<=K} 1/i
    std::vector<std::int64_t> pulls;  // cumulative per-round targets n_1..n_K
};

/// n_t = ceil((T-K) / (log~(K) (K+1-t))), n_0 = 0. Guarantees
/// sum_t (n_t - n_{t-1}) (K+1-t) <= T.
inline budget_schedule make_budget_schedule(std::int64_t T, int K) {
    if (K < 1) throw domain_error("budget_schedule: need K >= 1");
    if (T < K) throw insufficient_budget_error("budget_schedule: T < K");
    if (T == K)
        throw degenerate_instance_error(
            "budget_schedule: T = K gives an all-zero schedule (no real samples)");
    budget_schedule s;
    s.total = T;
    s.arms = K;
    for (int i = 1; i <= K; ++i) s.harmonic += 1.0 / double(i);
    s.pulls.resize(std::size_t(K));
    for (int t = 1; t <= K; ++t)
        s.pulls[std::size_t(t - 1)] =
            std::int64_t(std::ceil(double(T - K) / (s.harmonic * double(K + 1 - t))));
    return s;
}

/// Empirical normalized arm gap min over {v : a in v_hat (+) v} of
/// <mu_hat, v_hat - v> / d(v_hat, v); nullopt when no member disagrees with
/// v_hat on a.
inline std::optional<double> empirical_arm_gap(const decision_class& cls, const vecd& mu_hat,
                                               const hypothesis_vec& v_hat, int a,
                                               std::uint64_t cap = default_enumeration_cap) {
    std::optional<double> gap;
    for (const auto& v : cls.enumerate(cap)) {
        if (v[std::size_t(a)] == v_hat[std::size_t(a)]) continue;
        const double g = diff_value(mu_hat, v_hat, v) / double(distance(v_hat, v));
        if (!gap || g < *gap) gap = g;
    }
    return gap;
}

inline run_report run_fixed_budget(const decision_class& cls, bandit_env& env, std::int64_t T) {
    const auto t0 = std::chrono::steady_clock::now();
    const int K = cls.arms();
    require_same_length(std::size_t(K), env.mu().size(), "run_fixed_budget");
    const auto schedule = make_budget_schedule(T, K);
    const auto members = cls.enumerate();

    std::vector<signed char> decided(std::size_t(K), -1); // -1 undecided, 0 rejected, 1 accepted
    std::vector<double> real_sum(std::size_t(K), 0.0);
    std::vector<std::int64_t> decided_at(std::size_t(K), 0); // n_i at decision time

    run_report rep;
    rep.seed = env.seed();

    std::int64_t prev_n = 0;
    vecd mu_hat(std::size_t(K), 0.0);
    for (int t = 1; t <= K; ++t) {
        const std::int64_t n_t = schedule.pulls[std::size_t(t - 1)];
        for (int a = 0; a < K; ++a)
            if (decided[std::size_t(a)] < 0)
                for (std::int64_t p = prev_n; p < n_t; ++p) real_sum[std::size_t(a)] += env.pull(a);
        for (int a = 0; a < K; ++a) {
            if (decided[std::size_t(a)] < 0) {
                mu_hat[std::size_t(a)] = real_sum[std::size_t(a)] / double(n_t);
            } else {
                const double hallucinated = decided[std::size_t(a)] == 1 ? 1.0 : -1.0;
                mu_hat[std::size_t(a)] =
                    (real_sum[std::size_t(a)] + double(n_t - decided_at[std::size_t(a)]) * hallucinated) /
                    double(n_t);
            }
        }
        hypothesis_vec v_hat = members.front();
        double best = set_value(v_hat, mu_hat);
        for (const auto& v : members) {
            const double val = set_value(v, mu_hat);
            if (val > best) {
                best = val;
                v_hat = v;
            }
        }

        fb_round_event ev;
        ev.round = t;
        ev.v_hat = v_hat;

        int pick = -1;
        double pick_gap = 0.0;
        for (int a = 0; a < K; ++a) {
            if (decided[std::size_t(a)] >= 0) continue;
            const auto g = empirical_arm_gap(cls, mu_hat, v_hat, a);
            if (!g) continue; // no competitor across v_hat on this arm
            if (pick < 0 || *g > pick_gap) {
                pick = a;
                pick_gap = *g;
            }
        }
        if (pick < 0) {
            // every undecided arm is gap-undefined: settle them all by
            // membership in the empirical leader
            for (int a = 0; a < K; ++a)
                if (decided[std::size_t(a)] < 0) {
                    decided[std::size_t(a)] = v_hat[std::size_t(a)] ? 1 : 0;
                    decided_at[std::size_t(a)] = n_t;
                    ev.decided_arms.push_back(a);
                    ev.accepted.push_back(v_hat[std::size_t(a)]);
                }
            rep.fb_trace.push_back(std::move(ev));
            rep.rounds = t;
            break;
        }
        decided[std::size_t(pick)] = v_hat[std::size_t(pick)] ? 1 : 0;
        decided_at[std::size_t(pick)] = n_t;
        ev.decided_arms.push_back(pick);
        ev.accepted.push_back(v_hat[std::size_t(pick)]);
        rep.fb_trace.push_back(std::move(ev));
        rep.rounds = t;
        prev_n = n_t;
    }

    rep.answer.assign(std::size_t(K), 0);
    for (int a = 0; a < K; ++a) rep.answer[std::size_t(a)] = decided[std::size_t(a)] == 1;
    rep.per_arm_queries = env.query_counts();
    rep.total_queries = env.total_queries();
    rep.correct = rep.answer == argmax_member(cls, env.mu());
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace cpex
