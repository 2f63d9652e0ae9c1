// bandit_env.hpp -- simulated bandit environment with seeded, counter-based
// per-arm sample streams and real-query accounting.
#pragma once

#include <cstdint>
#include <vector>

#include "cpex/rng.hpp"
#include "cpex/types.hpp"

namespace cpex {

enum class noise_kind { gaussian, noiseless, bounded_uniform };

/// One environment instance per trial. The k-th pull of arm a is a pure
/// function of (seed, a, k), so interleaving across arms never perturbs a
/// given arm's stream.
class bandit_env {
public:
    bandit_env(vecd mu, noise_kind kind, std::uint64_t seed, double halfwidth = 1.0)
        : mu_(std::move(mu)), kind_(kind), seed_(seed), halfwidth_(halfwidth),
          counts_(mu_.size(), 0) {
        for (double m : mu_)
            if (m < -1.0 || m > 1.0) throw domain_error("bandit_env: true means must lie in [-1,1]");
        if (kind == noise_kind::bounded_uniform && (halfwidth <= 0.0 || halfwidth > 1.0))
            throw domain_error("bandit_env: bounded noise halfwidth must lie in (0,1]");
    }

    int arms() const { return int(mu_.size()); }
    const vecd& mu() const { return mu_; }
    std::uint64_t seed() const { return seed_; }

    double pull(int a) {
        if (a < 0 || a >= arms()) throw domain_error("pull: arm index out of range");
        const std::uint64_t k = std::uint64_t(counts_[std::size_t(a)]);
        ++counts_[std::size_t(a)];
        switch (kind_) {
            case noise_kind::noiseless:
                return mu_[std::size_t(a)];
            case noise_kind::gaussian:
                return mu_[std::size_t(a)] + counter_gaussian(seed_, std::uint64_t(a), k);
            case noise_kind::bounded_uniform:
                return mu_[std::size_t(a)] +
                       halfwidth_ * counter_symmetric_uniform(seed_, std::uint64_t(a), k);
        }
        return 0.0;
    }

    /// Real pulls only; hallucinated observations are never counted.
    const std::vector<std::int64_t>& query_counts() const { return counts_; }

    std::int64_t total_queries() const {
        std::int64_t t = 0;
        for (auto c : counts_) t += c;
        return t;
    }

private:
    vecd mu_;
    noise_kind kind_;
    std::uint64_t seed_;
    double halfwidth_;
    std::vector<std::int64_t> counts_;
};

} // namespace cpex
