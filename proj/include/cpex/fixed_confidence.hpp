// fixed_confidence.hpp -- the disagreement-driven fixed-confidence algorithm:
// query an arm only while two surviving hypotheses disagree on it,
// hallucinate +-1 observations elsewhere, stop when nothing disagrees.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/disagreement.hpp"
#include "cpex/report.hpp"
#include "cpex/rng.hpp"

namespace cpex {

/// Radius schedule  min{1, sqrt((8/t) (Phi Psi + log(K pi^2 t^2 / delta)) / Psi)}.
inline double delta_schedule(std::int64_t t, double phi, double psi, int K, double failure_prob) {
    const double inner =
        (phi * psi + std::log(double(K) * M_PI * M_PI * double(t) * double(t) / failure_prob)) / psi;
    return std::min(1.0, std::sqrt(8.0 / double(t) * inner));
}

struct fc_options {
    std::int64_t max_rounds = 1'000'000;
    bool phi_log_upper = false;      // use the Phi <= log K fallback
    bool record_observations = false; // keep y_t in the trace (audits)
};

inline run_report run_fixed_confidence(const decision_class& cls, bandit_env& env,
                                       double failure_prob, const disagreement_config& dis_cfg,
                                       const fc_options& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(failure_prob > 0.0 && failure_prob < 1.0))
        throw domain_error("run_fixed_confidence: failure probability must lie in (0,1)");
    const int K = cls.arms();
    require_same_length(std::size_t(K), env.mu().size(), "run_fixed_confidence");

    const double psi = double(psi_of(cls));
    const double phi = opt.phi_log_upper ? std::log(double(K)) : phi_of(cls);

    // the exact backend reuses one enumeration across all rounds
    std::vector<hypothesis_vec> members;
    const std::vector<hypothesis_vec>* members_ptr = nullptr;
    if (dis_cfg.backend == disagreement_backend::brute_force) {
        members = cls.enumerate();
        members_ptr = &members;
    }

    rng_stream rng(splitmix64(env.seed() ^ 0x64697361677265ULL));
    run_report rep;
    rep.seed = env.seed();
    rep.completed = false;

    // round 0: one real sample of every arm
    vecd sums(std::size_t(K), 0.0);
    for (int a = 0; a < K; ++a) sums[std::size_t(a)] = env.pull(a);

    vecd mu_hat(std::size_t(K), 0.0);
    for (std::int64_t t = 1; t <= opt.max_rounds; ++t) {
        for (int a = 0; a < K; ++a) mu_hat[std::size_t(a)] = sums[std::size_t(a)] / double(t);
        const double delta_t = delta_schedule(t, phi, psi, K, failure_prob);
        const hypothesis_vec v_hat = argmax_member(cls, mu_hat);
        rep.oracle_calls += cls.oracle_supported() ? 1 : 0;

        fc_round_event ev;
        ev.round = t;
        ev.delta_t = delta_t;
        ev.v_hat = v_hat;
        ev.queried.assign(std::size_t(K), 0);
        ev.verdicts.assign(std::size_t(K), 0);
        if (opt.record_observations) ev.observations.assign(std::size_t(K), 0.0);

        vecd y(std::size_t(K), 0.0);
        int queried = 0;
        for (int a = 0; a < K; ++a) {
            const int b = 1 - int(v_hat[std::size_t(a)]);
            const auto verdict = disagree(cls, a, b, delta_t, mu_hat,
                                          failure_prob / (double(t) * double(t) * M_PI * M_PI),
                                          dis_cfg, rng, members_ptr);
            rep.oracle_calls += verdict.oracle_calls;
            if (verdict.feasible) {
                y[std::size_t(a)] = env.pull(a);
                ev.queried[std::size_t(a)] = 1;
                ev.verdicts[std::size_t(a)] = 1;
                ++queried;
            } else {
                y[std::size_t(a)] = 2.0 * double(v_hat[std::size_t(a)]) - 1.0;
            }
        }
        if (opt.record_observations) ev.observations = y;
        rep.fc_trace.push_back(std::move(ev));
        rep.rounds = t;
        if (queried == 0) {
            rep.answer = v_hat;
            rep.completed = true;
            break;
        }
        for (int a = 0; a < K; ++a) sums[std::size_t(a)] += y[std::size_t(a)];
        if (t == opt.max_rounds) rep.answer = v_hat; // flagged incomplete
    }

    rep.per_arm_queries = env.query_counts();
    rep.total_queries = env.total_queries();
    rep.correct = rep.answer == argmax_member(cls, env.mu());
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace cpex
