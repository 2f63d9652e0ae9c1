// audits.hpp -- Monte Carlo checks of the concentration facts the algorithms
// rest on: the martingale deviation bound behind the radius schedule, and the
// perturbed-leader regret bound behind the disagreement solver.
#pragma once

#include <cmath>
#include <cstdint>

#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/disagreement.hpp"
#include "cpex/fixed_confidence.hpp"

namespace cpex {

struct lemma_audit_result {
    double pass_rate = 0.0;
    int trials = 0;
};

/// Fraction of runs in which the averaged deviation between observations and
/// their conditional means stays inside d(v*, v) * Delta_t for every round up
/// to max_t and every hypothesis.
inline lemma_audit_result audit_martingale_radius(const decision_class& cls, const vecd& mu,
                                                  double delta, int trials, std::int64_t max_t,
                                                  noise_kind noise, std::uint64_t base_seed) {
    lemma_audit_result res;
    res.trials = trials;
    const auto star = argmax_member(cls, mu);
    const auto members = cls.enumerate();
    fc_options opt;
    opt.record_observations = true;
    int good = 0;
    for (int trial = 0; trial < trials; ++trial) {
        bandit_env env(mu, noise, base_seed + std::uint64_t(trial));
        const auto rep = run_fixed_confidence(cls, env, delta, disagreement_config::brute(), opt);
        vecd z(mu.size(), 0.0);
        bool ok = true;
        for (const auto& ev : rep.fc_trace) {
            if (ev.round > max_t) break;
            for (std::size_t a = 0; a < mu.size(); ++a) {
                const double bar = ev.queried[a] ? mu[a] : 2.0 * double(ev.v_hat[a]) - 1.0;
                z[a] += bar - ev.observations[a];
            }
            for (const auto& v : members) {
                if (v == star) continue;
                if (std::fabs(diff_value(z, star, v)) / double(ev.round) >
                    double(distance(star, v)) * ev.delta_t)
                    ok = false;
            }
        }
        if (ok) ++good;
    }
    res.pass_rate = double(good) / double(trials);
    return res;
}

struct ftpl_regret_result {
    double mean_regret = 0.0;
    double bound = 0.0;
    int runs = 0;
};

/// Mean realized regret of the perturbed leader against +-1 losses, compared
/// with the 2 sqrt(D R A T) bound at D = K, R = A = 5K sqrt(log(2K/delta)).
inline ftpl_regret_result audit_ftpl_regret(const decision_class& cls, int rounds, int runs,
                                            double delta, std::uint64_t base_seed) {
    const int K = cls.arms();
    ftpl_regret_result res;
    res.runs = runs;
    const double ra = 5.0 * K * std::sqrt(std::log(2.0 * K / delta));
    res.bound = 2.0 * std::sqrt(double(K) * ra * ra * double(rounds));
    const double eps = std::sqrt(1.0 / (25.0 * K * double(rounds) * std::log(2.0 * K / delta)));
    const auto members = cls.enumerate();
    double total = 0.0;
    for (int run = 0; run < runs; ++run) {
        rng_stream rng(splitmix64(base_seed + std::uint64_t(run)));
        vecd payoff(std::size_t(K), 0.0), cum(std::size_t(K), 0.0);
        double realized = 0.0;
        for (int t = 0; t < rounds; ++t) {
            const auto u = ftpl_decision(cls, payoff, eps, rng);
            vecd loss(std::size_t(K), 0.0);
            for (auto& l : loss) l = rng.uniform01() < 0.5 ? 1.0 : -1.0;
            realized += set_value(u, loss);
            for (int i = 0; i < K; ++i) {
                payoff[std::size_t(i)] -= loss[std::size_t(i)];
                cum[std::size_t(i)] += loss[std::size_t(i)];
            }
        }
        double best = 1e300;
        for (const auto& v : members) best = std::min(best, set_value(v, cum));
        total += realized - best;
    }
    res.mean_regret = total / double(runs);
    return res;
}

} // namespace cpex
