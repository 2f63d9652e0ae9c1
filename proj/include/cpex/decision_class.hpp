// decision_class.hpp -- the combinatorial families V and their linear
// optimization oracles.
//
// Supported families:
//   top_k(K, s)      all (K choose s) subsets of size s
//   disj_set(K, s)   K/s consecutive disjoint blocks of s arms
//   matching(n)      perfect matchings of K_{n,n}; arm = edge, row-major
//   biclique(K, s)   sqrt(s) x sqrt(s) bicliques of K_{sqrt K, sqrt K};
//                    enumeration/membership only, no oracle
//   explicit_set     an explicit member list
//
// Every oracle breaks ties toward the lexicographically smallest bit vector.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cpex/hungarian.hpp"
#include "cpex/types.hpp"

namespace cpex {

constexpr std::size_t default_enumeration_cap = 1'000'000;

// Sentinel weight used to forbid a matching edge under the constraint v_a = 0.
constexpr double forbidden_edge_weight = -1e12;

namespace detail {

// n choose k, saturating at `cap`+1 to avoid overflow.
inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n-k+i) / i is always integral at this point
        if (r > (cap + 1) * 2) return cap + 1;
        r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
        if (r > cap) return cap + 1;
    }
    return r;
}

inline std::uint64_t factorial_capped(int n, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= std::uint64_t(i);
        if (r > cap) return cap + 1;
    }
    return r;
}

inline int isqrt_exact(int x) {
    const int r = int(std::lround(std::sqrt(double(x))));
    return r * r == x ? r : -1;
}

} // namespace detail

class decision_class {
public:
    enum class kind { top_k, disj_set, matching, biclique, explicit_set };

    static decision_class top_k(int arms, int subset) {
        if (subset < 1 || subset >= arms)
            throw domain_error("top_k: need 1 <= s < K");
        decision_class c(kind::top_k, arms);
        c.subset_ = subset;
        return c;
    }

    static decision_class disj_set(int arms, int block) {
        if (block < 1 || arms < 1 || arms % block != 0)
            throw domain_error("disj_set: s must divide K");
        decision_class c(kind::disj_set, arms);
        c.subset_ = block;
        return c;
    }

    static decision_class matching(int side) {
        if (side < 1) throw domain_error("matching: need n >= 1");
        decision_class c(kind::matching, side * side);
        c.side_ = side;
        return c;
    }

    static decision_class biclique(int arms, int subset) {
        const int g = detail::isqrt_exact(arms);
        const int r = detail::isqrt_exact(subset);
        if (g < 0 || r < 0 || r < 1 || r > g)
            throw domain_error("biclique: sqrt(K) and sqrt(s) must be integers with s <= K");
        decision_class c(kind::biclique, arms);
        c.subset_ = subset;
        c.side_ = g;
        return c;
    }

    static decision_class explicit_set(std::vector<hypothesis_vec> members) {
        if (members.empty()) throw domain_error("explicit_set: empty member list");
        const std::size_t k = members.front().size();
        for (const auto& v : members) {
            if (v.size() != k) throw dimension_error("explicit_set: mixed lengths");
            if (!is_binary(v)) throw domain_error("explicit_set: non-binary member");
        }
        std::sort(members.begin(), members.end());
        if (std::adjacent_find(members.begin(), members.end()) != members.end())
            throw domain_error("explicit_set: duplicate members");
        decision_class c(kind::explicit_set, int(k));
        c.members_ = std::move(members);
        return c;
    }

    kind family() const { return kind_; }
    int arms() const { return arms_; }
    int subset_size() const { return subset_; }
    int side() const { return side_; }

    bool oracle_supported() const { return kind_ != kind::biclique; }

    /// |V|, saturating at cap+1.
    std::uint64_t cardinality_capped(std::uint64_t cap = default_enumeration_cap) const {
        switch (kind_) {
            case kind::top_k: return detail::binomial_capped(arms_, subset_, cap);
            case kind::disj_set: return std::uint64_t(arms_ / subset_);
            case kind::matching: return detail::factorial_capped(side_, cap);
            case kind::biclique: {
                const int r = detail::isqrt_exact(subset_);
                const std::uint64_t b = detail::binomial_capped(side_, r, cap);
                if (b > cap) return cap + 1;
                const std::uint64_t bb = b * b;
                return bb > cap || bb / b != b ? cap + 1 : bb;
            }
            case kind::explicit_set: return members_.size();
        }
        return 0;
    }

    /// argmax_{v in V} <v, c>; ties -> lexicographically smallest bit vector.
    hypothesis_vec oracle(const vecd& c) const {
        require_same_length(c.size(), std::size_t(arms_), "oracle");
        switch (kind_) {
            case kind::top_k: return top_k_oracle(c, -1, 0);
            case kind::disj_set: return disj_set_oracle(c, -1, 0);
            case kind::matching: return matching_oracle(c, -1, 0);
            case kind::biclique:
                throw unsupported_oracle_error("biclique: linear optimization oracle is unsupported");
            case kind::explicit_set: return scan_oracle(members_, c);
        }
        throw error("oracle: unreachable");
    }

    /// argmax over {v in V : v(a) = b}, same tie-breaking; nullopt when the
    /// face is empty.
    std::optional<hypothesis_vec> constrained_oracle(const vecd& c, int a, int b) const {
        require_same_length(c.size(), std::size_t(arms_), "constrained_oracle");
        if (a < 0 || a >= arms_) throw domain_error("constrained_oracle: arm index out of range");
        if (b != 0 && b != 1) throw domain_error("constrained_oracle: b must be 0 or 1");
        switch (kind_) {
            case kind::top_k: return top_k_constrained(c, a, b);
            case kind::disj_set: return disj_set_constrained(c, a, b);
            case kind::matching: return matching_constrained(c, a, b);
            case kind::biclique:
                throw unsupported_oracle_error("biclique: linear optimization oracle is unsupported");
            case kind::explicit_set: {
                std::vector<hypothesis_vec> face;
                for (const auto& v : members_)
                    if (int(v[std::size_t(a)]) == b) face.push_back(v);
                if (face.empty()) return std::nullopt;
                return scan_oracle(face, c);
            }
        }
        throw error("constrained_oracle: unreachable");
    }

    /// All members in lexicographic order.
    std::vector<hypothesis_vec> enumerate(std::uint64_t cap = default_enumeration_cap) const {
        if (cardinality_capped(cap) > cap)
            throw too_large_error("enumerate: class cardinality exceeds cap");
        std::vector<hypothesis_vec> out;
        switch (kind_) {
            case kind::top_k: {
                std::vector<int> idx(std::size_t(subset_), 0);
                std::iota(idx.begin(), idx.end(), 0);
                while (true) {
                    hypothesis_vec v(std::size_t(arms_), 0);
                    for (int i : idx) v[std::size_t(i)] = 1;
                    out.push_back(std::move(v));
                    int i = subset_ - 1;
                    while (i >= 0 && idx[std::size_t(i)] == arms_ - subset_ + i) --i;
                    if (i < 0) break;
                    ++idx[std::size_t(i)];
                    for (int j = i + 1; j < subset_; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
                }
                break;
            }
            case kind::disj_set: {
                for (int blk = 0; blk < arms_ / subset_; ++blk) out.push_back(block(blk));
                break;
            }
            case kind::matching: {
                std::vector<int> perm(std::size_t(side_), 0);
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    hypothesis_vec v(std::size_t(arms_), 0);
                    for (int i = 0; i < side_; ++i) v[std::size_t(i * side_ + perm[std::size_t(i)])] = 1;
                    out.push_back(std::move(v));
                } while (std::next_permutation(perm.begin(), perm.end()));
                break;
            }
            case kind::biclique: {
                const int r = detail::isqrt_exact(subset_);
                auto subsets = index_subsets(side_, r);
                for (const auto& rows : subsets)
                    for (const auto& cols : subsets) {
                        hypothesis_vec v(std::size_t(arms_), 0);
                        for (int i : rows)
                            for (int j : cols) v[std::size_t(i * side_ + j)] = 1;
                        out.push_back(std::move(v));
                    }
                break;
            }
            case kind::explicit_set:
                out = members_;
                break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool contains(const hypothesis_vec& v) const {
        if (v.size() != std::size_t(arms_) || !is_binary(v)) return false;
        switch (kind_) {
            case kind::top_k: {
                int s = 0;
                for (auto b : v) s += b;
                return s == subset_;
            }
            case kind::disj_set: {
                for (int blk = 0; blk < arms_ / subset_; ++blk)
                    if (v == block(blk)) return true;
                return false;
            }
            case kind::matching: {
                std::vector<int> row(std::size_t(side_), 0), col(std::size_t(side_), 0);
                for (int i = 0; i < side_; ++i)
                    for (int j = 0; j < side_; ++j)
                        if (v[std::size_t(i * side_ + j)]) {
                            ++row[std::size_t(i)];
                            ++col[std::size_t(j)];
                        }
                for (int i = 0; i < side_; ++i)
                    if (row[std::size_t(i)] != 1 || col[std::size_t(i)] != 1) return false;
                return true;
            }
            case kind::biclique: {
                // every nonempty row must equal the column set of the first
                // nonempty row, and there must be exactly sqrt(s) of each
                const int r = detail::isqrt_exact(subset_);
                int first_row = -1;
                for (int a = 0; a < arms_ && first_row < 0; ++a)
                    if (v[std::size_t(a)]) first_row = a / side_;
                if (first_row < 0) return false;
                std::vector<int> cols;
                for (int j = 0; j < side_; ++j)
                    if (v[std::size_t(first_row * side_ + j)]) cols.push_back(j);
                if (int(cols.size()) != r) return false;
                int nonempty_rows = 0;
                for (int i = 0; i < side_; ++i) {
                    bool empty_row = true;
                    for (int j = 0; j < side_; ++j)
                        if (v[std::size_t(i * side_ + j)]) empty_row = false;
                    if (empty_row) continue;
                    ++nonempty_rows;
                    for (int j = 0; j < side_; ++j) {
                        const bool bit = v[std::size_t(i * side_ + j)];
                        const bool want = std::binary_search(cols.begin(), cols.end(), j);
                        if (bit != want) return false;
                    }
                }
                return nonempty_rows == r;
            }
            case kind::explicit_set:
                return std::binary_search(members_.begin(), members_.end(), v);
        }
        return false;
    }

private:
    decision_class(kind k, int arms) : kind_(k), arms_(arms) {}

    hypothesis_vec block(int blk) const {
        hypothesis_vec v(std::size_t(arms_), 0);
        for (int i = 0; i < subset_; ++i) v[std::size_t(blk * subset_ + i)] = 1;
        return v;
    }

    static std::vector<std::vector<int>> index_subsets(int n, int k) {
        std::vector<std::vector<int>> out;
        std::vector<int> idx(std::size_t(k), 0);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            out.push_back(idx);
            int i = k - 1;
            while (i >= 0 && idx[std::size_t(i)] == n - k + i) --i;
            if (i < 0) break;
            ++idx[std::size_t(i)];
            for (int j = i + 1; j < k; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
        }
        return out;
    }

    // Linear scan in lexicographic order; strict improvement keeps the first
    // (lex-smallest) maximizer.
    static hypothesis_vec scan_oracle(const std::vector<hypothesis_vec>& vs, const vecd& c) {
        const hypothesis_vec* best = nullptr;
        double best_val = 0.0;
        for (const auto& v : vs) {
            const double val = set_value(v, c);
            if (!best || val > best_val) {
                best = &v;
                best_val = val;
            }
        }
        return *best;
    }

    // --- top_k ---------------------------------------------------------

    // Index order (c desc, index desc): among tied weights the 1s land on the
    // latest indices, which is the lex-smallest bit vector.
    static std::vector<int> ranked_indices(const vecd& c, int skip) {
        std::vector<int> idx;
        idx.reserve(c.size());
        for (int i = 0; i < int(c.size()); ++i)
            if (i != skip) idx.push_back(i);
        std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
            if (c[std::size_t(i)] != c[std::size_t(j)]) return c[std::size_t(i)] > c[std::size_t(j)];
            return i > j;
        });
        return idx;
    }

    hypothesis_vec top_k_oracle(const vecd& c, int forced_arm, int forced_bit) const {
        hypothesis_vec v(std::size_t(arms_), 0);
        int take = subset_;
        int skip = -1;
        if (forced_arm >= 0) {
            skip = forced_arm;
            if (forced_bit == 1) {
                v[std::size_t(forced_arm)] = 1;
                --take;
            }
        }
        const auto idx = ranked_indices(c, skip);
        for (int i = 0; i < take; ++i) v[std::size_t(idx[std::size_t(i)])] = 1;
        return v;
    }

    std::optional<hypothesis_vec> top_k_constrained(const vecd& c, int a, int b) const {
        // b = 1 always feasible (s >= 1); b = 0 feasible since s < K.
        return top_k_oracle(c, a, b);
    }

    // --- disj_set ------------------------------------------------------

    hypothesis_vec disj_set_oracle(const vecd& c, int excluded_block, int) const {
        const int nblocks = arms_ / subset_;
        int best = -1;
        double best_val = 0.0;
        for (int blk = 0; blk < nblocks; ++blk) {
            if (blk == excluded_block) continue;
            double val = 0.0;
            for (int i = 0; i < subset_; ++i) val += c[std::size_t(blk * subset_ + i)];
            // ties -> larger block index = lex-smaller bit vector
            if (best < 0 || val > best_val || (val == best_val && blk > best)) {
                best = blk;
                best_val = val;
            }
        }
        return block(best);
    }

    std::optional<hypothesis_vec> disj_set_constrained(const vecd& c, int a, int b) const {
        const int blk = a / subset_;
        if (b == 1) return block(blk);
        if (arms_ / subset_ == 1) return std::nullopt;
        return disj_set_oracle(c, blk, 0);
    }

    // --- matching ------------------------------------------------------

    struct edge_sets {
        std::vector<std::pair<int, int>> zeros;
        std::vector<std::pair<int, int>> ones;
    };

    // Constrained max-weight matching; nullopt when the zero-constraints make
    // a perfect matching impossible.
    std::optional<assignment_result> solve_matching(const vecd& c, const edge_sets& fixed) const {
        const int n = side_;
        std::vector<char> row_used(std::size_t(n), 0), col_used(std::size_t(n), 0);
        double forced_value = 0.0;
        for (auto [i, j] : fixed.ones) {
            if (row_used[std::size_t(i)] || col_used[std::size_t(j)]) return std::nullopt;
            row_used[std::size_t(i)] = col_used[std::size_t(j)] = 1;
            forced_value += c[std::size_t(i * n + j)];
        }
        std::vector<int> rows, cols;
        for (int i = 0; i < n; ++i)
            if (!row_used[std::size_t(i)]) rows.push_back(i);
        for (int j = 0; j < n; ++j)
            if (!col_used[std::size_t(j)]) cols.push_back(j);
        const int m = int(rows.size());

        assignment_result out;
        out.row_to_col.assign(std::size_t(n), -1);
        for (auto [i, j] : fixed.ones) out.row_to_col[std::size_t(i)] = j;
        if (m == 0) {
            out.value = forced_value;
            return out;
        }

        std::vector<vecd> w(std::size_t(m), vecd(std::size_t(m), 0.0));
        for (int ri = 0; ri < m; ++ri)
            for (int cj = 0; cj < m; ++cj)
                w[std::size_t(ri)][std::size_t(cj)] = c[std::size_t(rows[std::size_t(ri)] * n + cols[std::size_t(cj)])];
        for (auto [i, j] : fixed.zeros) {
            const auto ri = std::find(rows.begin(), rows.end(), i);
            const auto cj = std::find(cols.begin(), cols.end(), j);
            if (ri != rows.end() && cj != cols.end())
                w[std::size_t(ri - rows.begin())][std::size_t(cj - cols.begin())] = forbidden_edge_weight;
        }
        const auto sub = max_weight_assignment(w);
        for (int ri = 0; ri < m; ++ri) {
            if (w[std::size_t(ri)][std::size_t(sub.row_to_col[std::size_t(ri)])] == forbidden_edge_weight)
                return std::nullopt; // had to use a forbidden edge
            out.row_to_col[std::size_t(rows[std::size_t(ri)])] = cols[std::size_t(sub.row_to_col[std::size_t(ri)])];
        }
        out.value = forced_value + sub.value;
        return out;
    }

    // Lexicographic refinement: walk edges in arm order, keeping v_a = 0
    // whenever an optimal matching without the edge exists.
    std::optional<hypothesis_vec> matching_refine(const vecd& c, edge_sets fixed) const {
        const int n = side_;
        const auto base = solve_matching(c, fixed);
        if (!base) return std::nullopt;
        const double opt = base->value;
        const double tie_eps = 1e-9 * (1.0 + std::fabs(opt));
        std::vector<char> row_used(std::size_t(n), 0), col_used(std::size_t(n), 0);
        std::vector<signed char> decided(std::size_t(arms_), -1);
        for (auto [i, j] : fixed.ones) {
            decided[std::size_t(i * n + j)] = 1;
            row_used[std::size_t(i)] = col_used[std::size_t(j)] = 1;
        }
        for (auto [i, j] : fixed.zeros) decided[std::size_t(i * n + j)] = 0;
        for (int a = 0; a < arms_; ++a) {
            if (decided[std::size_t(a)] >= 0) continue;
            const int i = a / n, j = a % n;
            if (row_used[std::size_t(i)] || col_used[std::size_t(j)]) {
                decided[std::size_t(a)] = 0;
                continue;
            }
            auto zeros = fixed;
            zeros.zeros.emplace_back(i, j);
            const auto r = solve_matching(c, zeros);
            if (r && r->value >= opt - tie_eps) {
                fixed = std::move(zeros);
                decided[std::size_t(a)] = 0;
            } else {
                fixed.ones.emplace_back(i, j);
                row_used[std::size_t(i)] = col_used[std::size_t(j)] = 1;
                decided[std::size_t(a)] = 1;
            }
        }
        hypothesis_vec v(std::size_t(arms_), 0);
        for (auto [i, j] : fixed.ones) v[std::size_t(i * n + j)] = 1;
        return v;
    }

    hypothesis_vec matching_oracle(const vecd& c, int forced_arm, int forced_bit) const {
        edge_sets fixed;
        if (forced_arm >= 0) {
            const int i = forced_arm / side_, j = forced_arm % side_;
            if (forced_bit == 1)
                fixed.ones.emplace_back(i, j);
            else
                fixed.zeros.emplace_back(i, j);
        }
        auto r = matching_refine(c, fixed);
        if (!r) throw error("matching oracle: internal infeasibility");
        return *r;
    }

    std::optional<hypothesis_vec> matching_constrained(const vecd& c, int a, int b) const {
        edge_sets fixed;
        const int i = a / side_, j = a % side_;
        if (b == 1)
            fixed.ones.emplace_back(i, j);
        else
            fixed.zeros.emplace_back(i, j);
        return matching_refine(c, fixed);
    }

    kind kind_;
    int arms_ = 0;
    int subset_ = 0; // s (top_k, disj_set, biclique)
    int side_ = 0;   // n (matching), sqrt(K) (biclique)
    std::vector<hypothesis_vec> members_;
};

/// Best member under the given means: the oracle when available, otherwise a
/// lexicographic scan of the enumeration. Tie-breaking matches the oracle's.
inline hypothesis_vec argmax_member(const decision_class& cls, const vecd& m) {
    if (cls.oracle_supported()) return cls.oracle(m);
    const auto members = cls.enumerate();
    const hypothesis_vec* best = &members.front();
    double best_val = set_value(*best, m);
    for (const auto& v : members) {
        const double val = set_value(v, m);
        if (val > best_val) {
            best = &v;
            best_val = val;
        }
    }
    return *best;
}

} // namespace cpex
