// disagreement.hpp -- deciding whether any surviving hypothesis disagrees
// with the empirical leader on an arm. Formally, the feasibility question
//
//   exists v in conv(V) with v(a) = b  s.t.
//   forall u in V:  <mu_hat, u - v> <= Delta ||u - v||_1
//
// answered two ways: an oracle-efficient FTPL reduction (online learner over
// the constraints, one perturbed-oracle call per sample), and an exact
// backend for enumerable classes (vertex scan, then a matrix-game LP over
// conv(V)).
//
// A "false" answer is certified: it is correct regardless of round and
// sample counts. A "true" answer carries the relaxed guarantee (slack +Delta
// on every constraint) with probability 1 - failure_prob at the paper
// constants; scaling rounds/samples down only trades extra "true" answers
// (and thus extra queries) for speed.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cpex/decision_class.hpp"
#include "cpex/rng.hpp"
#include "cpex/simplex.hpp"
#include "cpex/types.hpp"

namespace cpex {

enum class disagreement_backend { ftpl, brute_force };

struct disagreement_config {
    disagreement_backend backend = disagreement_backend::brute_force;
    // multipliers on the FTPL round count T and per-round sample count m;
    // ignored when paper_constants is set
    double scale_rounds = 1.0;
    double scale_samples = 1.0;
    bool paper_constants = false;

    static disagreement_config brute() { return {}; }
    static disagreement_config ftpl_scaled(double sr, double sm) {
        disagreement_config c;
        c.backend = disagreement_backend::ftpl;
        c.scale_rounds = sr;
        c.scale_samples = sm;
        return c;
    }
    static disagreement_config ftpl_paper() {
        disagreement_config c;
        c.backend = disagreement_backend::ftpl;
        c.paper_constants = true;
        return c;
    }
};

struct feasibility_verdict {
    bool feasible = false;
    std::optional<fractional_vec> certificate; // average iterate when feasible
    std::int64_t rounds_used = 0;
    std::int64_t oracle_calls = 0;
};

struct ftpl_plan {
    std::int64_t rounds = 0;
    std::int64_t samples = 0;
    double epsilon = 0.0;
};

inline std::int64_t paper_round_count(int K, double delta, double failure_prob) {
    return std::int64_t(
        std::ceil(169.0 * double(K) * K * K * std::log(4.0 * K / failure_prob) / (delta * delta)));
}

/// Round/sample/perturbation sizes: T = 169 K^3 log(4K/d)/Delta^2,
/// m = T log(4KT/d), eps = sqrt(1/(25 K T log(4K/d))), with T and m shrunk
/// by the configured multipliers. eps always tracks the round count in use.
inline ftpl_plan plan_ftpl(int K, double delta, double failure_prob,
                           const disagreement_config& cfg) {
    ftpl_plan p;
    const double t_paper = double(paper_round_count(K, delta, failure_prob));
    const double sr = cfg.paper_constants ? 1.0 : cfg.scale_rounds;
    const double sm = cfg.paper_constants ? 1.0 : cfg.scale_samples;
    if (sr <= 0.0 || sm <= 0.0) throw domain_error("plan_ftpl: scale factors must be positive");
    p.rounds = std::max<std::int64_t>(1, std::int64_t(std::ceil(sr * t_paper)));
    const double m_paper = double(p.rounds) * std::log(4.0 * K * double(p.rounds) / failure_prob);
    p.samples = std::max<std::int64_t>(1, std::int64_t(std::ceil(sm * m_paper)));
    p.epsilon = std::sqrt(1.0 / (25.0 * K * double(p.rounds) * std::log(4.0 * K / failure_prob)));
    return p;
}

/// One perturbed-leader draw: sigma ~ Unif[0, 1/epsilon]^K, then
/// argmax_{v in V} <v, accumulated_payoff + sigma>. The caller keeps
/// accumulated_payoff = -(sum of past losses) so that the draw follows the
/// loss-minimizing perturbed leader.
inline hypothesis_vec ftpl_decision(const decision_class& cls, const vecd& accumulated_payoff,
                                    double epsilon, rng_stream& rng) {
    if (!(epsilon > 0.0)) throw domain_error("ftpl_decision: epsilon must be positive");
    const int K = cls.arms();
    vecd c(std::size_t(K), 0.0);
    for (int i = 0; i < K; ++i)
        c[std::size_t(i)] = accumulated_payoff[std::size_t(i)] + rng.uniform(0.0, 1.0 / epsilon);
    return cls.oracle(c);
}

/// The per-round inner program: maximize the sample-averaged slack
///   (1/m) sum_i Delta <v, 1 - 2 u_i>  +  <v, mu_hat>
/// over conv(V) restricted to v(a) = b. The objective is linear, so the
/// optimum is the constrained-oracle vertex for the averaged cost vector.
inline std::optional<std::pair<double, hypothesis_vec>>
inner_program(const decision_class& cls, const std::vector<hypothesis_vec>& samples, double delta,
              const vecd& mu_hat, int a, int b) {
    if (samples.empty()) throw domain_error("inner_program: no samples");
    const int K = cls.arms();
    vecd mean_u(std::size_t(K), 0.0);
    for (const auto& u : samples)
        for (int i = 0; i < K; ++i) mean_u[std::size_t(i)] += u[std::size_t(i)];
    for (auto& x : mean_u) x /= double(samples.size());
    vecd cost(std::size_t(K), 0.0);
    for (int i = 0; i < K; ++i)
        cost[std::size_t(i)] = delta * (1.0 - 2.0 * mean_u[std::size_t(i)]) + mu_hat[std::size_t(i)];
    auto x = cls.constrained_oracle(cost, a, b);
    if (!x) return std::nullopt;
    const double value = set_value(*x, cost);
    return std::make_pair(value, std::move(*x));
}

namespace detail {

// infeasibility thresholds; the FTPL one is looser so that every FTPL
// "false" is also an exact-backend "false" despite floating-point noise
constexpr double ftpl_infeasible_tol = -1e-8;
constexpr double exact_infeasible_tol = -1e-9;

inline feasibility_verdict disagree_ftpl(const decision_class& cls, int a, int b, double delta,
                                         const vecd& mu_hat, double failure_prob,
                                         const disagreement_config& cfg, rng_stream& rng) {
    const int K = cls.arms();
    feasibility_verdict verdict;
    // empty face: nothing satisfies v(a) = b, so nothing disagrees
    {
        const vecd zero(std::size_t(K), 0.0);
        if (!cls.constrained_oracle(zero, a, b)) return verdict;
        verdict.oracle_calls += 1;
    }
    const auto plan = plan_ftpl(K, delta, failure_prob, cfg);
    vecd payoff(std::size_t(K), 0.0); // -(cumulative loss)
    vecd sum_x(std::size_t(K), 0.0);
    std::vector<hypothesis_vec> samples(std::size_t(plan.samples));
    for (std::int64_t t = 1; t <= plan.rounds; ++t) {
        for (auto& u : samples) u = ftpl_decision(cls, payoff, plan.epsilon, rng);
        verdict.oracle_calls += plan.samples;
        auto opt = inner_program(cls, samples, delta, mu_hat, a, b);
        verdict.oracle_calls += 1;
        const auto& [s_val, x_t] = *opt; // face is nonempty
        double val = 0.0;
        vecd mean_u(std::size_t(K), 0.0);
        for (const auto& u : samples)
            for (int i = 0; i < K; ++i) mean_u[std::size_t(i)] += u[std::size_t(i)];
        for (int i = 0; i < K; ++i) {
            mean_u[std::size_t(i)] /= double(plan.samples);
            val += mean_u[std::size_t(i)] * (delta - mu_hat[std::size_t(i)]);
        }
        verdict.rounds_used = t;
        if (s_val + val < ftpl_infeasible_tol) return verdict; // certified infeasible
        for (int i = 0; i < K; ++i) {
            const double loss = delta - 2.0 * delta * double(x_t[std::size_t(i)]) - mu_hat[std::size_t(i)];
            payoff[std::size_t(i)] -= loss;
            sum_x[std::size_t(i)] += double(x_t[std::size_t(i)]);
        }
    }
    verdict.feasible = true;
    for (auto& x : sum_x) x /= double(plan.rounds);
    verdict.certificate = std::move(sum_x);
    return verdict;
}

inline feasibility_verdict disagree_brute(const decision_class& cls,
                                          const std::vector<hypothesis_vec>& members, int a, int b,
                                          double delta, const vecd& mu_hat) {
    feasibility_verdict verdict;
    std::vector<const hypothesis_vec*> face;
    for (const auto& v : members)
        if (int(v[std::size_t(a)]) == b) face.push_back(&v);
    if (face.empty()) return verdict;

    // vertex pass: any member of the face inside the version space settles it
    for (const auto* v : face) {
        bool ok = true;
        for (const auto& u : members) {
            if (diff_value(mu_hat, u, *v) > delta * double(distance(u, *v)) + 1e-12) {
                ok = false;
                break;
            }
        }
        if (ok) {
            verdict.feasible = true;
            verdict.certificate = to_fractional(*v);
            return verdict;
        }
    }

    // exact decision over the convex hull: the face mixture maximizing the
    // worst constraint slack is a matrix game between face vertices and
    // constraints u in V
    std::vector<vecd> G(face.size(), vecd(members.size()));
    for (std::size_t i = 0; i < face.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) {
            const auto& v = *face[i];
            const auto& u = members[j];
            G[i][j] = delta * double(distance(v, u)) - diff_value(mu_hat, u, v);
        }
    const auto game = solve_matrix_game(G);
    if (game.value < exact_infeasible_tol) return verdict;
    verdict.feasible = true;
    fractional_vec cert(std::size_t(cls.arms()), 0.0);
    for (std::size_t i = 0; i < face.size(); ++i)
        for (int k = 0; k < cls.arms(); ++k)
            cert[std::size_t(k)] += game.row_strategy[i] * double((*face[i])[std::size_t(k)]);
    verdict.certificate = std::move(cert);
    return verdict;
}

} // namespace detail

/// Decide the disagreement program for (a, b) at radius delta.
inline feasibility_verdict disagree(const decision_class& cls, int a, int b, double delta,
                                    const vecd& mu_hat, double failure_prob,
                                    const disagreement_config& cfg, rng_stream& rng,
                                    const std::vector<hypothesis_vec>* members = nullptr) {
    if (!(delta >= 1e-6))
        throw domain_error("disagree: radius below 1e-6 is rejected (round count would diverge)");
    if (cfg.backend == disagreement_backend::ftpl)
        return detail::disagree_ftpl(cls, a, b, delta, mu_hat, failure_prob, cfg, rng);
    if (members) return detail::disagree_brute(cls, *members, a, b, delta, mu_hat);
    const auto owned = cls.enumerate();
    return detail::disagree_brute(cls, owned, a, b, delta, mu_hat);
}

/// Test-side certificate check: x(a) = b and every constraint holds with the
/// +Delta slack of the relaxed guarantee.
inline bool relaxed_feasibility_check(const decision_class& cls, const fractional_vec& x,
                                      double delta, const vecd& mu_hat, int a, int b) {
    if (std::fabs(x[std::size_t(a)] - double(b)) > 1e-9) return false;
    const double xv = dot(x, mu_hat);
    for (const auto& u : cls.enumerate()) {
        const double lhs = set_value(u, mu_hat) - xv;
        if (lhs > delta * l1_linearize(x, u) + delta + 1e-9) return false;
    }
    return true;
}

} // namespace cpex
