// types.hpp -- shared vocabulary types for combinatorial pure exploration.
#pragma once

#include <cstdint>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpex {

// A candidate subset of arms, encoded as 0/1 indicators over the K arms.
// std::vector's operator< is lexicographic, which is the tie-break order
// used by every oracle in the library.
using hypothesis_vec = std::vector<std::uint8_t>;

// Real vector over arms: true means, empirical means, cost vectors.
using vecd = std::vector<double>;

// A point of conv(V): coordinates in [0,1]^K.
using fractional_vec = std::vector<double>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct dimension_error : error {
    using error::error;
};
struct domain_error : error {
    using error::error;
};
struct too_large_error : error {
    using error::error;
};
struct degenerate_instance_error : error {
    using error::error;
};
struct insufficient_budget_error : error {
    using error::error;
};
struct unsupported_oracle_error : error {
    using error::error;
};
struct config_error : error {
    using error::error;
};

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw dimension_error(std::string(what) + ": length mismatch (" +
                              std::to_string(a) + " vs " + std::to_string(b) + ")");
}

inline bool is_binary(const hypothesis_vec& v) {
    for (auto b : v)
        if (b != 0 && b != 1) return false;
    return true;
}

/// Hamming distance |u (+) v| between two hypotheses.
inline int distance(const hypothesis_vec& u, const hypothesis_vec& v) {
    require_same_length(u.size(), v.size(), "distance");
    int d = 0;
    for (std::size_t i = 0; i < u.size(); ++i) d += (u[i] != v[i]);
    return d;
}

/// <x+u, 1> - 2<x, u>, which equals ||x - u||_1 for binary u and x in [0,1]^K.
/// Linear in x, which is what makes the version space polyhedral.
inline double l1_linearize(const fractional_vec& x, const hypothesis_vec& u) {
    require_same_length(x.size(), u.size(), "l1_linearize");
    if (!is_binary(u)) throw domain_error("l1_linearize: u must be binary");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] + u[i] - 2.0 * x[i] * u[i];
    return s;
}

/// Collective mean <v, m> of the subset v under means m.
inline double set_value(const hypothesis_vec& v, const vecd& m) {
    require_same_length(v.size(), m.size(), "set_value");
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) s += m[i];
    return s;
}

inline double dot(const vecd& a, const vecd& b) {
    require_same_length(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const hypothesis_vec& v, const vecd& m) { return set_value(v, m); }

/// <m, u - v> for hypotheses u, v; sums only the coordinates where they differ.
inline double diff_value(const vecd& m, const hypothesis_vec& u, const hypothesis_vec& v) {
    require_same_length(u.size(), v.size(), "diff_value");
    require_same_length(m.size(), u.size(), "diff_value");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != v[i]) s += m[i] * (double(u[i]) - double(v[i]));
    return s;
}

inline fractional_vec to_fractional(const hypothesis_vec& v) {
    return fractional_vec(v.begin(), v.end());
}

inline std::string to_string(const hypothesis_vec& v) {
    std::string s;
    s.reserve(v.size());
    for (auto b : v) s.push_back(b ? '1' : '0');
    return s;
}

} // namespace cpex
