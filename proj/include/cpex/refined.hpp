// refined.hpp -- the version-space elimination algorithm with the symmetric
// pairwise radius. Keeps the explicit survivor set, queries every arm on
// which two survivors disagree (no hallucination), and eliminates a
// hypothesis as soon as some survivor beats it beyond the radius.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/report.hpp"

namespace cpex {

/// Pairwise radius sqrt((8 d / t) (log(pi^2 K t^2 / (3 delta)) + logvol)),
/// with logvol the symmetric log-volume D(v, v').
inline double refined_radius(std::int64_t t, int dist, double logvol, int K, double failure_prob) {
    const double log_term =
        std::log(M_PI * M_PI * double(K) * double(t) * double(t) / (3.0 * failure_prob));
    return std::sqrt(8.0 * double(dist) / double(t) * (log_term + logvol));
}

inline run_report run_refined(const decision_class& cls, bandit_env& env, double failure_prob,
                              std::int64_t max_rounds = 1'000'000) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(failure_prob > 0.0 && failure_prob < 1.0))
        throw domain_error("run_refined: failure probability must lie in (0,1)");
    const int K = cls.arms();
    require_same_length(std::size_t(K), env.mu().size(), "run_refined");

    const auto geo = compute_geometry(cls);
    const int n = int(geo.members.size());
    // pairwise distances and symmetric log-volumes, fixed for the whole run
    std::vector<std::vector<int>> dist(std::size_t(n), std::vector<int>(std::size_t(n), 0));
    std::vector<std::vector<double>> logvol(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int d = distance(geo.members[std::size_t(i)], geo.members[std::size_t(j)]);
            dist[std::size_t(i)][std::size_t(j)] = d;
            logvol[std::size_t(i)][std::size_t(j)] =
                std::max(geo.log_sphere(i, d), geo.log_sphere(j, d));
        }

    std::vector<char> alive(std::size_t(n), 1);
    int alive_count = n;
    vecd sum(std::size_t(K), 0.0), mu_hat(std::size_t(K), 0.0);
    std::vector<std::int64_t> cnt(std::size_t(K), 0);

    run_report rep;
    rep.seed = env.seed();
    rep.completed = false;

    for (std::int64_t t = 1; t <= max_rounds; ++t) {
        re_round_event ev;
        ev.round = t;
        ev.queried.assign(std::size_t(K), 0);
        // disagreement arms among survivors
        for (int a = 0; a < K; ++a) {
            int seen = -1;
            for (int i = 0; i < n && ev.queried[std::size_t(a)] == 0; ++i) {
                if (!alive[std::size_t(i)]) continue;
                const int bit = geo.members[std::size_t(i)][std::size_t(a)];
                if (seen < 0)
                    seen = bit;
                else if (seen != bit)
                    ev.queried[std::size_t(a)] = 1;
            }
        }
        for (int a = 0; a < K; ++a)
            if (ev.queried[std::size_t(a)]) {
                sum[std::size_t(a)] += env.pull(a);
                ++cnt[std::size_t(a)];
                mu_hat[std::size_t(a)] = sum[std::size_t(a)] / double(cnt[std::size_t(a)]);
            }
        // simultaneous elimination against the start-of-round survivor set
        std::vector<char> removed(std::size_t(n), 0);
        for (int i = 0; i < n; ++i) {
            if (!alive[std::size_t(i)]) continue;
            for (int j = 0; j < n; ++j) {
                if (i == j || !alive[std::size_t(j)]) continue;
                const double adv = diff_value(mu_hat, geo.members[std::size_t(j)], geo.members[std::size_t(i)]);
                const double rad = refined_radius(t, dist[std::size_t(i)][std::size_t(j)],
                                                  logvol[std::size_t(i)][std::size_t(j)], K,
                                                  failure_prob);
                if (adv > rad) {
                    removed[std::size_t(i)] = 1;
                    break;
                }
            }
        }
        for (int i = 0; i < n; ++i)
            if (removed[std::size_t(i)]) {
                alive[std::size_t(i)] = 0;
                --alive_count;
            }
        ev.survivors = alive_count;
        rep.re_trace.push_back(std::move(ev));
        rep.rounds = t;
        if (alive_count == 1) {
            for (int i = 0; i < n; ++i)
                if (alive[std::size_t(i)]) rep.answer = geo.members[std::size_t(i)];
            rep.completed = true;
            break;
        }
    }
    if (!rep.completed) {
        // best surviving hypothesis on the current means, flagged incomplete
        double best = -1e300;
        for (int i = 0; i < n; ++i)
            if (alive[std::size_t(i)]) {
                const double val = set_value(geo.members[std::size_t(i)], mu_hat);
                if (val > best) {
                    best = val;
                    rep.answer = geo.members[std::size_t(i)];
                }
            }
    }

    rep.per_arm_queries = env.query_counts();
    rep.total_queries = env.total_queries();
    rep.correct = rep.answer == argmax_member(cls, env.mu());
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Smallest t with t > 32 H1 log(pi^2 K t^2 / (3 delta)) + 32 H2; after that
/// many rounds an arm with these complexities is never queried again.
inline std::int64_t refined_arm_cap(double h1, double h2, int K, double failure_prob) {
    auto ok = [&](std::int64_t t) {
        return double(t) > 32.0 * h1 *
                                   std::log(M_PI * M_PI * double(K) * double(t) * double(t) /
                                            (3.0 * failure_prob)) +
                               32.0 * h2;
    };
    std::int64_t hi = 1;
    while (!ok(hi)) {
        hi *= 2;
        if (hi > (std::int64_t(1) << 50)) throw error("refined_arm_cap: no finite cap found");
    }
    std::int64_t lo = hi / 2;
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace cpex
