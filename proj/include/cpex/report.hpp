// report.hpp -- per-run output shared by all algorithms, plus the per-round
// trace events the audits replay.
#pragma once

#include <cstdint>
#include <vector>

#include "cpex/types.hpp"

namespace cpex {

struct fc_round_event {
    std::int64_t round = 0;
    double delta_t = 0.0;
    hypothesis_vec v_hat;
    std::vector<std::uint8_t> queried;  // per arm: real sample drawn this round
    std::vector<std::uint8_t> verdicts; // per arm: disagreement verdict
    vecd observations;                  // y_t; recorded only on request
};

struct fb_round_event {
    std::int64_t round = 0;
    hypothesis_vec v_hat;
    std::vector<int> decided_arms; // normally one arm; several in the
                                   // no-defined-gap corner
    std::vector<std::uint8_t> accepted;
};

struct re_round_event {
    std::int64_t round = 0;
    std::vector<std::uint8_t> queried;
    int survivors = 0;
};

struct run_report {
    hypothesis_vec answer;
    bool correct = false;
    std::vector<std::int64_t> per_arm_queries;
    std::int64_t total_queries = 0;
    std::int64_t rounds = 0;
    std::int64_t oracle_calls = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    bool completed = true; // false when max_rounds was hit

    std::vector<fc_round_event> fc_trace;
    std::vector<fb_round_event> fb_trace;
    std::vector<re_round_event> re_trace;
};

} // namespace cpex
