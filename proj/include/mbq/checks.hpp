#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mbq/core.hpp"

namespace mbq {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::uint64_t cases = 0;
    std::string detail;
};

// The four-queue, seven-server instance separating LCSF/LCQ from the
// brute-force optimum, and the three-queue fully connected instance where
// serving only the longest queues is suboptimal.
SystemState lemma5_state();
SystemState remark1_state();

CheckResult check_lemma5_counterexample();
CheckResult check_remark1_instance();

// kappa(before) + kappa_delta == kappa(after) for every vector with up to
// max_queues real queues (entries 0..max_entry, dummy min_dummy..0) and
// every rank pair that keeps the vector in-domain.
CheckResult check_kappa_delta_identity(int max_queues = 5, int max_entry = 6, int min_dummy = -2);

// Over every state with L <= max_queues, K <= max_servers, entries <=
// max_entry:
//  - any two minimum-kappa withdrawal vectors differ componentwise by at
//    most one, and every delta against the optimum balances to an integer
//    h <= K (check_min_kappa_deltas);
//  - every feasible interchange drawn from the positive/negative delta sets
//    is balancing, and a feasible pair exists whenever h > 0
//    (check_balancing_selection);
//  - conversion to the optimum takes exactly h balancing interchanges, never
//    increases kappa, and each drop matches the predicted delta
//    (check_conversion);
//  - every control minimizing the sorted real queue vector lexicographically
//    also minimizes kappa and is work-conserving (check_lex_optimality).
CheckResult check_min_kappa_deltas(int max_queues = 3, int max_servers = 3, int max_entry = 3);
CheckResult check_balancing_selection(int max_queues = 3, int max_servers = 3, int max_entry = 3);
CheckResult check_conversion(int max_queues = 3, int max_servers = 3, int max_entry = 3);
CheckResult check_lex_optimality(int max_queues = 3, int max_servers = 3, int max_entry = 3);

// Heuristics against the brute-force envelopes on the same grid: the
// longest-queue heuristic never beats the optimum, and the shortest-queue
// heuristic never exceeds the work-conserving worst case while it stays
// work-conserving itself. Reports how often the heuristic matches the
// optimum.
CheckResult check_heuristic_brackets(int max_queues = 3, int max_servers = 3, int max_entry = 3);

std::vector<CheckResult> run_all_checks();

// Enumeration helpers for the exhaustive grids (also used by tests).
void for_each_state(int max_queues, int max_servers, int max_entry,
                    const std::function<void(const SystemState&)>& fn);
void for_each_feasible_control(const SystemState& s,
                               const std::function<void(const SchedulingControl&)>& fn);

} // namespace mbq
