// bench.hpp -- the experiment harness behind the CLI: TOML config parsing,
// seeded trial sweeps with a worker pool, JSONL traces, CSV summaries, the
// complexity report, and the Monte Carlo audits.
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cpex/audits.hpp"
#include "cpex/bandit_env.hpp"
#include "cpex/complexity.hpp"
#include "cpex/decision_class.hpp"
#include "cpex/disagreement.hpp"
#include "cpex/fixed_budget.hpp"
#include "cpex/fixed_confidence.hpp"
#include "cpex/mle.hpp"
#include "cpex/refined.hpp"
#include "cpex/tomlmini.hpp"

namespace cpex::bench {

using nlohmann::json;

enum class algo_kind { mle, fixed_confidence, fixed_budget, refined };
enum class trace_level { none, rounds, full };

struct experiment_config {
    decision_class cls = decision_class::top_k(2, 1);
    std::string class_kind;
    vecd mu;
    noise_kind noise = noise_kind::gaussian;
    double halfwidth = 1.0;

    algo_kind algo = algo_kind::fixed_confidence;
    double delta = 0.1;        // confidence algorithms
    std::int64_t budget = 0;   // mle / fixed budget
    std::int64_t max_rounds = 1'000'000;
    bool phi_log_upper = false;
    disagreement_config dis;

    int trials = 1;
    std::uint64_t base_seed = 0;
    int workers = 1;
    trace_level trace = trace_level::rounds;
    std::string out_dir = "out";
};

inline decision_class class_from_config(const toml::table& t) {
    const auto kind = t.get_string("class.kind");
    if (kind == "topk")
        return decision_class::top_k(int(t.get_int("class.arms")), int(t.get_int("class.subset")));
    if (kind == "disjset")
        return decision_class::disj_set(int(t.get_int("class.arms")), int(t.get_int("class.subset")));
    if (kind == "matching") return decision_class::matching(int(t.get_int("class.side")));
    if (kind == "biclique")
        return decision_class::biclique(int(t.get_int("class.arms")), int(t.get_int("class.subset")));
    if (kind == "explicit") {
        std::vector<hypothesis_vec> members;
        for (const auto& item : t.get_array("class.members")) {
            const auto* s = std::get_if<std::string>(&item.data);
            if (!s) throw config_error("config field 'class.members': expected bit strings");
            hypothesis_vec v;
            for (char c : *s) {
                if (c != '0' && c != '1')
                    throw config_error("config field 'class.members': bit strings must be 0/1");
                v.push_back(c == '1');
            }
            members.push_back(std::move(v));
        }
        return decision_class::explicit_set(std::move(members));
    }
    throw config_error("config field 'class.kind': unknown kind '" + kind + "'");
}

inline vecd mu_from_config(const toml::table& t, const decision_class& cls) {
    const auto kind = t.get_string_or("mu.kind", "homogeneous");
    vecd mu;
    if (kind == "explicit") {
        for (const auto& item : t.get_array("mu.values")) {
            if (const auto* d = std::get_if<double>(&item.data))
                mu.push_back(*d);
            else if (const auto* i = std::get_if<std::int64_t>(&item.data))
                mu.push_back(double(*i));
            else
                throw config_error("config field 'mu.values': expected numbers");
        }
        if (int(mu.size()) != cls.arms())
            throw config_error("config field 'mu.values': length must equal the arm count");
    } else if (kind == "homogeneous") {
        const double delta = t.get_double("mu.delta");
        const auto members = cls.enumerate();
        const auto star_idx = std::size_t(t.get_int_or("mu.star", 0));
        if (star_idx >= members.size())
            throw config_error("config field 'mu.star': index out of range");
        const auto& star = members[star_idx];
        mu.resize(std::size_t(cls.arms()));
        for (int a = 0; a < cls.arms(); ++a)
            mu[std::size_t(a)] = delta * (2.0 * star[std::size_t(a)] - 1.0);
    } else {
        throw config_error("config field 'mu.kind': unknown kind '" + kind + "'");
    }
    for (double m : mu)
        if (m < -1.0 || m > 1.0)
            throw config_error("config field 'mu': true means must lie in [-1,1]");
    return mu;
}

inline experiment_config load_experiment_config(const toml::table& t) {
    experiment_config c;
    c.cls = class_from_config(t);
    c.class_kind = t.get_string("class.kind");
    c.mu = mu_from_config(t, c.cls);

    const auto noise = t.get_string_or("noise.kind", "gaussian");
    if (noise == "gaussian")
        c.noise = noise_kind::gaussian;
    else if (noise == "noiseless")
        c.noise = noise_kind::noiseless;
    else if (noise == "bounded")
        c.noise = noise_kind::bounded_uniform;
    else
        throw config_error("config field 'noise.kind': unknown kind '" + noise + "'");
    c.halfwidth = t.get_double_or("noise.halfwidth", 1.0);

    const auto algo = t.get_string("algo.name");
    if (algo == "mle")
        c.algo = algo_kind::mle;
    else if (algo == "fixed-confidence")
        c.algo = algo_kind::fixed_confidence;
    else if (algo == "fixed-budget")
        c.algo = algo_kind::fixed_budget;
    else if (algo == "refined")
        c.algo = algo_kind::refined;
    else
        throw config_error("config field 'algo.name': unknown algorithm '" + algo + "'");

    c.delta = t.get_double_or("algo.delta", 0.1);
    if (!(c.delta > 0.0 && c.delta < 1.0))
        throw config_error("config field 'algo.delta': must lie in (0,1)");
    c.budget = t.get_int_or("algo.budget", 0);
    if ((c.algo == algo_kind::mle || c.algo == algo_kind::fixed_budget) && c.budget <= 0)
        throw config_error("config field 'algo.budget': required for budgeted algorithms");
    c.max_rounds = t.get_int_or("algo.max_rounds", 1'000'000);
    c.phi_log_upper = t.get_bool_or("algo.phi_log_upper", false);

    const auto backend = t.get_string_or("disagreement.backend", "brute-force");
    if (backend == "brute-force")
        c.dis.backend = disagreement_backend::brute_force;
    else if (backend == "ftpl")
        c.dis.backend = disagreement_backend::ftpl;
    else
        throw config_error("config field 'disagreement.backend': unknown backend '" + backend + "'");
    c.dis.scale_rounds = t.get_double_or("disagreement.scale_rounds", 1.0);
    c.dis.scale_samples = t.get_double_or("disagreement.scale_samples", 1.0);
    c.dis.paper_constants = t.get_bool_or("disagreement.paper_constants", false);

    c.trials = int(t.get_int_or("experiment.trials", 1));
    if (c.trials < 1) throw config_error("config field 'experiment.trials': must be >= 1");
    c.base_seed = std::uint64_t(t.get_int_or("experiment.seed", 0));
    c.workers = int(t.get_int_or("experiment.workers", 1));
    if (c.workers < 1) throw config_error("config field 'experiment.workers': must be >= 1");
    const auto trace = t.get_string_or("experiment.trace", "rounds");
    if (trace == "none")
        c.trace = trace_level::none;
    else if (trace == "rounds")
        c.trace = trace_level::rounds;
    else if (trace == "full")
        c.trace = trace_level::full;
    else
        throw config_error("config field 'experiment.trace': unknown level '" + trace + "'");
    c.out_dir = t.get_string_or("experiment.out", "out");
    return c;
}

inline run_report run_single_trial(const experiment_config& c, std::uint64_t seed) {
    bandit_env env(c.mu, c.noise, seed, c.halfwidth);
    switch (c.algo) {
        case algo_kind::mle:
            return run_mle(c.cls, env, c.budget);
        case algo_kind::fixed_budget:
            return run_fixed_budget(c.cls, env, c.budget);
        case algo_kind::refined:
            return run_refined(c.cls, env, c.delta, c.max_rounds);
        case algo_kind::fixed_confidence: {
            fc_options opt;
            opt.max_rounds = c.max_rounds;
            opt.phi_log_upper = c.phi_log_upper;
            opt.record_observations = c.trace == trace_level::full;
            return run_fixed_confidence(c.cls, env, c.delta, c.dis, opt);
        }
    }
    throw error("run_single_trial: unreachable");
}

struct experiment_summary {
    std::vector<run_report> reports;
    double success_rate = 0.0;
    double mean_total_queries = 0.0;
    std::int64_t max_total_queries = 0;
    double mean_rounds = 0.0;
    vecd per_arm_mean_queries;
    // instance snapshot
    int psi = 0;
    double phi = 0.0;
    int diameter = 0;
    double min_gap = 0.0;
    double h = 0.0;
    double ht = 0.0;
};

inline experiment_summary run_experiment(const experiment_config& c) {
    experiment_summary s;
    s.reports.resize(std::size_t(c.trials));
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= c.trials) return;
            s.reports[std::size_t(i)] = run_single_trial(c, c.base_seed + std::uint64_t(i));
        }
    };
    const int nthreads = std::min(c.workers, c.trials);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    s.per_arm_mean_queries.assign(std::size_t(c.cls.arms()), 0.0);
    int correct = 0;
    for (const auto& r : s.reports) {
        correct += r.correct;
        s.mean_total_queries += double(r.total_queries);
        s.max_total_queries = std::max(s.max_total_queries, r.total_queries);
        s.mean_rounds += double(r.rounds);
        for (std::size_t a = 0; a < r.per_arm_queries.size(); ++a)
            s.per_arm_mean_queries[a] += double(r.per_arm_queries[a]);
    }
    s.success_rate = double(correct) / double(c.trials);
    s.mean_total_queries /= double(c.trials);
    s.mean_rounds /= double(c.trials);
    for (auto& q : s.per_arm_mean_queries) q /= double(c.trials);

    const auto geo = compute_geometry(c.cls);
    s.psi = geo.psi;
    s.phi = geo.phi;
    s.diameter = geo.diameter;
    const auto profile = compute_gap_profile(c.cls, c.mu);
    s.min_gap = profile.min_hypothesis_gap();
    s.h = h_sum(profile);
    vecd gaps;
    for (double g : profile.per_arm)
        if (!std::isnan(g)) gaps.push_back(g);
    s.ht = gaps.empty() ? 0.0 : h_tilde(gaps);
    return s;
}

// ---- output writers ----------------------------------------------------

inline json report_to_json(const run_report& r, int trial) {
    json j;
    j["trial"] = trial;
    j["event"] = "result";
    j["seed"] = r.seed;
    j["answer"] = to_string(r.answer);
    j["correct"] = r.correct;
    j["per_arm_queries"] = r.per_arm_queries;
    j["total_queries"] = r.total_queries;
    j["rounds"] = r.rounds;
    j["oracle_calls"] = r.oracle_calls;
    j["completed"] = r.completed;
    j["wall_ms"] = r.wall_ms;
    return j;
}

inline void write_trace_jsonl(const experiment_config& c, const experiment_summary& s,
                              std::ostream& out) {
    for (int i = 0; i < c.trials; ++i) {
        const auto& r = s.reports[std::size_t(i)];
        if (c.trace != trace_level::none) {
            for (const auto& ev : r.fc_trace) {
                json j;
                j["trial"] = i;
                j["event"] = "round";
                j["round"] = ev.round;
                j["delta_t"] = ev.delta_t;
                j["v_hat"] = to_string(ev.v_hat);
                j["queried"] = ev.queried;
                j["verdicts"] = ev.verdicts;
                if (c.trace == trace_level::full && !ev.observations.empty())
                    j["observations"] = ev.observations;
                out << j.dump() << '\n';
            }
            for (const auto& ev : r.fb_trace) {
                json j;
                j["trial"] = i;
                j["event"] = "decision";
                j["round"] = ev.round;
                j["v_hat"] = to_string(ev.v_hat);
                j["arms"] = ev.decided_arms;
                j["accepted"] = ev.accepted;
                out << j.dump() << '\n';
            }
            for (const auto& ev : r.re_trace) {
                json j;
                j["trial"] = i;
                j["event"] = "round";
                j["round"] = ev.round;
                j["queried"] = ev.queried;
                j["survivors"] = ev.survivors;
                out << j.dump() << '\n';
            }
        }
        out << report_to_json(r, i).dump() << '\n';
    }
}

inline std::string csv_double(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline void write_trials_csv(const experiment_summary& s, std::ostream& out) {
    out << "trial,seed,correct,total_queries,rounds,oracle_calls,completed,wall_ms\n";
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
        const auto& r = s.reports[i];
        out << i << ',' << r.seed << ',' << int(r.correct) << ',' << r.total_queries << ','
            << r.rounds << ',' << r.oracle_calls << ',' << int(r.completed) << ','
            << csv_double(r.wall_ms) << '\n';
    }
}

inline const char* algo_name(algo_kind a) {
    switch (a) {
        case algo_kind::mle: return "mle";
        case algo_kind::fixed_confidence: return "fixed-confidence";
        case algo_kind::fixed_budget: return "fixed-budget";
        case algo_kind::refined: return "refined";
    }
    return "?";
}

inline void write_summary_csv(const experiment_config& c, const experiment_summary& s,
                              std::ostream& out) {
    out << "algo,class_kind,arms,trials,base_seed,delta,budget,success_rate,"
           "mean_total_queries,max_total_queries,mean_rounds,psi,phi,diameter,min_gap,h,"
           "h_tilde,per_arm_mean_queries\n";
    std::ostringstream arms;
    for (std::size_t a = 0; a < s.per_arm_mean_queries.size(); ++a) {
        if (a) arms << ';';
        arms << csv_double(s.per_arm_mean_queries[a]);
    }
    out << algo_name(c.algo) << ',' << c.class_kind << ',' << c.cls.arms() << ',' << c.trials
        << ',' << c.base_seed << ',' << csv_double(c.delta) << ',' << c.budget << ','
        << csv_double(s.success_rate) << ',' << csv_double(s.mean_total_queries) << ','
        << s.max_total_queries << ',' << csv_double(s.mean_rounds) << ',' << s.psi << ','
        << csv_double(s.phi) << ',' << s.diameter << ',' << csv_double(s.min_gap) << ','
        << csv_double(s.h) << ',' << csv_double(s.ht) << ",\"" << arms.str() << "\"\n";
}

inline void write_outputs(const experiment_config& c, const experiment_summary& s,
                          const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/traces.jsonl");
        write_trace_jsonl(c, s, out);
    }
    {
        std::ofstream out(dir + "/trials.csv");
        write_trials_csv(s, out);
    }
    {
        std::ofstream out(dir + "/summary.csv");
        write_summary_csv(c, s, out);
    }
}

// ---- complexity report ---------------------------------------------------

inline json complexity_report(const decision_class& cls, const std::string& kind,
                              const std::optional<vecd>& mu) {
    json j;
    j["class"] = {{"kind", kind}, {"arms", cls.arms()}};
    j["cardinality"] = cls.cardinality_capped();
    const auto geo = compute_geometry(cls);
    j["psi"] = geo.psi;
    j["phi"] = geo.phi;
    j["diameter"] = geo.diameter;
    if (!mu) return j;
    j["mu"] = *mu;
    const auto profile = compute_gap_profile(cls, *mu);
    j["star"] = to_string(profile.star);
    json hyp = json::array();
    for (const auto& [v, g] : profile.per_hypothesis)
        hyp.push_back({{"v", to_string(v)}, {"gap", g}});
    j["hypothesis_gaps"] = hyp;
    json arm_gaps = json::array();
    vecd finite;
    for (int a = 0; a < cls.arms(); ++a) {
        const double g = profile.per_arm[std::size_t(a)];
        if (std::isnan(g)) {
            arm_gaps.push_back(nullptr);
        } else {
            arm_gaps.push_back(g);
            finite.push_back(g);
        }
    }
    j["arm_gaps"] = arm_gaps;
    j["h"] = h_sum(profile);
    j["h_tilde"] = finite.empty() ? 0.0 : h_tilde(finite);
    json refined = json::array();
    json prior = json::array();
    for (int a = 0; a < cls.arms(); ++a) {
        if (const auto r = refined_complexities(cls, *mu, a))
            refined.push_back({{"arm", a}, {"h1", r->h1}, {"h2", r->h2}});
        if (const auto p = prior_gaps(cls, *mu, a))
            prior.push_back({{"arm", a}, {"delta_c", p->delta_c}, {"delta_g", p->delta_g}});
    }
    j["refined_complexities"] = refined;
    j["prior_gaps"] = prior;
    return j;
}

// ---- sweep -----------------------------------------------------------------

struct sweep_combo {
    std::vector<std::pair<std::string, toml::value>> overrides;
    experiment_config config;
    experiment_summary summary;
};

inline std::vector<sweep_combo> run_sweep(const toml::table& base) {
    const auto keys = base.keys_with_prefix("sweep.");
    if (keys.empty()) throw config_error("sweep: no [sweep] entries in config");
    std::vector<std::pair<std::string, toml::array>> grids;
    for (const auto& k : keys) grids.emplace_back(k.substr(6), base.get_array(k));

    std::vector<sweep_combo> combos;
    std::vector<std::size_t> idx(grids.size(), 0);
    while (true) {
        toml::table t = base;
        sweep_combo combo;
        for (std::size_t g = 0; g < grids.size(); ++g) {
            t.set(grids[g].first, grids[g].second[idx[g]]);
            combo.overrides.emplace_back(grids[g].first, grids[g].second[idx[g]]);
        }
        combo.config = load_experiment_config(t);
        combos.push_back(std::move(combo));
        std::size_t g = 0;
        for (; g < grids.size(); ++g) {
            if (++idx[g] < grids[g].second.size()) break;
            idx[g] = 0;
        }
        if (g == grids.size()) break;
    }
    for (auto& combo : combos) combo.summary = run_experiment(combo.config);
    return combos;
}

inline std::string toml_value_to_string(const toml::value& v) {
    if (const auto* b = std::get_if<bool>(&v.data)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&v.data)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v.data)) return csv_double(*d);
    if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
    return "[]";
}

inline void write_sweep_csv(const std::vector<sweep_combo>& combos, std::ostream& out) {
    out << "combo";
    for (const auto& [k, v] : combos.front().overrides) out << ',' << k;
    out << ",success_rate,mean_total_queries,max_total_queries,mean_rounds\n";
    for (std::size_t i = 0; i < combos.size(); ++i) {
        out << i;
        for (const auto& [k, v] : combos[i].overrides) out << ',' << toml_value_to_string(v);
        const auto& s = combos[i].summary;
        out << ',' << csv_double(s.success_rate) << ',' << csv_double(s.mean_total_queries) << ','
            << s.max_total_queries << ',' << csv_double(s.mean_rounds) << '\n';
    }
}

} // namespace cpex::bench
