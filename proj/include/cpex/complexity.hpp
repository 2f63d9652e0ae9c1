// complexity.hpp -- every complexity measure used by the algorithms and the
// benchmark reports: sphere volumes, Phi, Psi, hypothesis/arm gaps, the
// fixed-budget measure H~, the refined measures H1/H2 and D(v,v'), and the
// unnormalized/complement gaps used for cross-method comparisons.
//
// All logarithms are natural.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cpex/decision_class.hpp"
#include "cpex/types.hpp"

namespace cpex {

/// Per-instance gaps for a fixed mean vector.
///   Delta_v = <v* - v, mu> / d(v*, v)          (per competing hypothesis)
///   Delta_a = min over {v : a in v (+) v*} of Delta_v   (per arm)
/// per_arm[a] is NaN when arm a lies in no symmetric difference with v*.
struct gap_profile {
    hypothesis_vec star;
    std::vector<std::pair<hypothesis_vec, double>> per_hypothesis;
    vecd per_arm;

    double min_hypothesis_gap() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& [v, g] : per_hypothesis) m = std::min(m, g);
        return m;
    }
    bool arm_defined(int a) const { return !std::isnan(per_arm[std::size_t(a)]); }
};

/// Mu-independent geometry of a class.
/// sphere[i][k] = |B(k, members[i])|. For a single-member class psi falls
/// back to K and phi to 0 so that downstream schedules stay well-defined.
struct class_geometry {
    int psi = 0;
    double phi = 0.0;
    int diameter = 0;
    std::vector<hypothesis_vec> members;
    std::vector<std::vector<std::int64_t>> sphere;

    int member_index(const hypothesis_vec& v) const {
        const auto it = std::lower_bound(members.begin(), members.end(), v);
        if (it == members.end() || *it != v) return -1;
        return int(it - members.begin());
    }
    double log_sphere(int i, int k) const {
        return std::log(double(sphere[std::size_t(i)][std::size_t(k)]));
    }
};

inline class_geometry compute_geometry(const decision_class& cls,
                                       std::uint64_t cap = default_enumeration_cap) {
    class_geometry g;
    g.members = cls.enumerate(cap);
    const int n = int(g.members.size());
    const int K = cls.arms();
    g.sphere.assign(std::size_t(n), std::vector<std::int64_t>(std::size_t(K) + 1, 0));
    int psi = K + 1, diam = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int d = distance(g.members[std::size_t(i)], g.members[std::size_t(j)]);
            ++g.sphere[std::size_t(i)][std::size_t(d)];
            if (i != j) {
                psi = std::min(psi, d);
                diam = std::max(diam, d);
            }
        }
    g.diameter = diam;
    g.psi = n >= 2 ? psi : K;
    double phi = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 1; k <= K; ++k)
            if (g.sphere[std::size_t(i)][std::size_t(k)] >= 1)
                phi = std::max(phi, std::log(double(g.sphere[std::size_t(i)][std::size_t(k)])) / double(k));
    g.phi = phi;
    return g;
}

namespace detail {

inline std::int64_t binom64(int n, int k) {
    return std::int64_t(binomial_capped(n, k, std::uint64_t(1) << 62));
}

inline std::int64_t derangements(int n) {
    // !0 = 1, !1 = 0, !n = (n-1)(!(n-1) + !(n-2))
    std::int64_t a = 1, b = 0;
    if (n == 0) return 1;
    if (n == 1) return 0;
    for (int i = 2; i <= n; ++i) {
        const std::int64_t c = std::int64_t(i - 1) * (a + b);
        a = b;
        b = c;
    }
    return b;
}

} // namespace detail

/// Center-independent sphere volumes (radius -> count, radius >= 1) for the
/// four transitive families; empty for explicit classes.
inline std::map<int, std::int64_t> analytic_sphere_profile(const decision_class& cls) {
    std::map<int, std::int64_t> prof;
    switch (cls.family()) {
        case decision_class::kind::top_k: {
            const int K = cls.arms(), s = cls.subset_size();
            for (int j = 1; j <= std::min(s, K - s); ++j)
                prof[2 * j] = detail::binom64(s, j) * detail::binom64(K - s, j);
            break;
        }
        case decision_class::kind::disj_set: {
            const int blocks = cls.arms() / cls.subset_size();
            if (blocks >= 2) prof[2 * cls.subset_size()] = blocks - 1;
            break;
        }
        case decision_class::kind::matching: {
            const int n = cls.side();
            for (int j = 2; j <= n; ++j)
                prof[2 * j] = detail::binom64(n, j) * detail::derangements(j);
            break;
        }
        case decision_class::kind::biclique: {
            const int g = cls.side();
            const int r = std::lround(std::sqrt(double(cls.subset_size())));
            const int s = cls.subset_size();
            // intersect the row/column sets in i and j elements respectively
            for (int i = std::max(0, 2 * r - g); i <= r; ++i)
                for (int j = std::max(0, 2 * r - g); j <= r; ++j) {
                    if (i == r && j == r) continue;
                    const int k = 2 * (s - i * j);
                    prof[k] += detail::binom64(r, i) * detail::binom64(g - r, r - i) *
                               detail::binom64(r, j) * detail::binom64(g - r, r - j);
                }
            break;
        }
        case decision_class::kind::explicit_set:
            break;
    }
    return prof;
}

inline bool has_analytic_profile(const decision_class& cls) {
    return cls.family() != decision_class::kind::explicit_set;
}

/// Psi = min pairwise distance. Analytic for the four named families,
/// enumeration otherwise. Single-member classes fall back to K.
inline int psi_of(const decision_class& cls, std::uint64_t cap = default_enumeration_cap) {
    if (has_analytic_profile(cls)) {
        const auto prof = analytic_sphere_profile(cls);
        if (prof.empty()) return cls.arms(); // single member
        return prof.begin()->first;
    }
    if (cls.cardinality_capped(cap) > cap)
        throw too_large_error("psi: class too large and no analytic path");
    return compute_geometry(cls, cap).psi;
}

/// Phi = max over centers v and radii k of log|B(k,v)| / k.
inline double phi_of(const decision_class& cls, std::uint64_t cap = default_enumeration_cap) {
    if (cls.cardinality_capped(cap) <= cap) return compute_geometry(cls, cap).phi;
    if (has_analytic_profile(cls)) {
        double phi = 0.0;
        for (const auto& [k, count] : analytic_sphere_profile(cls))
            if (count >= 1) phi = std::max(phi, std::log(double(count)) / double(k));
        return phi;
    }
    throw too_large_error("phi: class too large and no analytic path");
}

/// |{u in V : d(v, u) = k}| by enumeration.
inline std::int64_t sphere_volume(const decision_class& cls, const hypothesis_vec& v, int k,
                                  std::uint64_t cap = default_enumeration_cap) {
    if (k < 0 || k > cls.arms()) throw domain_error("sphere_volume: radius out of range");
    if (!cls.contains(v)) throw domain_error("sphere_volume: center is not a member");
    std::int64_t n = 0;
    for (const auto& u : cls.enumerate(cap)) n += (distance(u, v) == k);
    return n;
}

/// D(v, v') = max{log|B(d,v)|, log|B(d,v')|} at d = d(v,v').
inline double symmetric_log_volume(const decision_class& cls, const hypothesis_vec& v,
                                   const hypothesis_vec& w,
                                   std::uint64_t cap = default_enumeration_cap) {
    const int d = distance(v, w);
    const auto bv = sphere_volume(cls, v, d, cap);
    const auto bw = sphere_volume(cls, w, d, cap);
    return std::max(std::log(double(bv)), std::log(double(bw)));
}

inline gap_profile compute_gap_profile(const decision_class& cls, const vecd& mu,
                                       std::uint64_t cap = default_enumeration_cap) {
    require_same_length(mu.size(), std::size_t(cls.arms()), "gap_profile");
    const auto members = cls.enumerate(cap);
    gap_profile p;
    // v* by direct scan; exact ties are a degenerate instance
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : members) best = std::max(best, set_value(v, mu));
    int star_count = 0;
    for (const auto& v : members)
        if (set_value(v, mu) == best) {
            ++star_count;
            if (star_count == 1) p.star = v;
        }
    if (star_count != 1)
        throw degenerate_instance_error("gap_profile: optimum is not unique");
    p.per_arm.assign(std::size_t(cls.arms()), std::numeric_limits<double>::quiet_NaN());
    for (const auto& v : members) {
        if (v == p.star) continue;
        const double gap = diff_value(mu, p.star, v) / double(distance(p.star, v));
        p.per_hypothesis.emplace_back(v, gap);
        for (int a = 0; a < cls.arms(); ++a)
            if (v[std::size_t(a)] != p.star[std::size_t(a)]) {
                auto& g = p.per_arm[std::size_t(a)];
                g = std::isnan(g) ? gap : std::min(g, gap);
            }
    }
    return p;
}

/// H~ = max_j (K+1-j) (Delta^(j))^-2 with Delta^(j) the j-th largest arm gap.
/// Infinite gaps are allowed (their terms vanish); nonpositive gaps are
/// rejected as degenerate.
inline double h_tilde(vecd arm_gaps) {
    if (arm_gaps.empty()) throw degenerate_instance_error("h_tilde: no arm gaps");
    for (double g : arm_gaps)
        if (!(g > 0.0)) throw degenerate_instance_error("h_tilde: nonpositive arm gap");
    std::sort(arm_gaps.begin(), arm_gaps.end(), std::greater<>());
    const int K = int(arm_gaps.size());
    double best = 0.0;
    for (int j = 1; j <= K; ++j) {
        const double g = arm_gaps[std::size_t(j - 1)];
        if (std::isinf(g)) continue;
        best = std::max(best, double(K + 1 - j) / (g * g));
    }
    return best;
}

/// H = sum_a Delta_a^-2 over defined arms.
inline double h_sum(const gap_profile& p) {
    double s = 0.0;
    for (double g : p.per_arm)
        if (!std::isnan(g)) s += 1.0 / (g * g);
    return s;
}

struct refined_pair {
    double h1 = 0.0;
    double h2 = 0.0;
};

/// H1_a = max over {v : a in v (+) v*} of d(v,v*) / <mu, v*-v>^2,
/// H2_a adds the symmetric log-volume factor D(v, v*).
/// nullopt when arm a lies in no symmetric difference with v*.
inline std::optional<refined_pair> refined_complexities(const decision_class& cls, const vecd& mu,
                                                        int a,
                                                        std::uint64_t cap = default_enumeration_cap) {
    const auto p = compute_gap_profile(cls, mu, cap);
    const auto geo = compute_geometry(cls, cap);
    const int star_idx = geo.member_index(p.star);
    refined_pair out;
    bool found = false;
    for (const auto& [v, gap] : p.per_hypothesis) {
        (void)gap;
        if (v[std::size_t(a)] == p.star[std::size_t(a)]) continue;
        found = true;
        const int d = distance(v, p.star);
        const double adv = diff_value(mu, p.star, v);
        const int vi = geo.member_index(v);
        const double dvv = std::max(geo.log_sphere(vi, d), geo.log_sphere(star_idx, d));
        out.h1 = std::max(out.h1, double(d) / (adv * adv));
        out.h2 = std::max(out.h2, double(d) * dvv / (adv * adv));
    }
    if (!found) return std::nullopt;
    return out;
}

struct prior_gap_pair {
    double delta_c = 0.0; // unnormalized nearest-competitor gap
    double delta_g = 0.0; // complement-based normalized gap
};

/// Delta^(C)_a = min over {v : a in v (+) v*} of <mu, v* - v>.
/// Delta^(G)_a = min over the same set of max_{v' : <mu, v'-v> > 0}
///               <mu, v'-v> / d(v',v); ties among maximizers irrelevant for
///               the value (closest-then-lexicographic would pick the
///               witness, which is not reported here).
inline std::optional<prior_gap_pair> prior_gaps(const decision_class& cls, const vecd& mu, int a,
                                                std::uint64_t cap = default_enumeration_cap) {
    const auto p = compute_gap_profile(cls, mu, cap);
    const auto members = cls.enumerate(cap);
    prior_gap_pair out;
    out.delta_c = std::numeric_limits<double>::infinity();
    out.delta_g = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& v : members) {
        if (v == p.star || v[std::size_t(a)] == p.star[std::size_t(a)]) continue;
        found = true;
        out.delta_c = std::min(out.delta_c, diff_value(mu, p.star, v));
        double gv = -std::numeric_limits<double>::infinity();
        for (const auto& w : members) {
            if (w == v) continue;
            const double adv = diff_value(mu, w, v);
            if (adv > 0.0) gv = std::max(gv, adv / double(distance(w, v)));
        }
        out.delta_g = std::min(out.delta_g, gv);
    }
    if (!found) return std::nullopt;
    return out;
}

} // namespace cpex
