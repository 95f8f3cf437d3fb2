#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mbq/core.hpp"
#include "mbq/imbalance.hpp"

namespace mbq {

// I(from, to): withdraw one packet more from `from`, one packet less from
// `to`. I(f,f) is the null interchange.
struct Interchange {
    int from = 0;
    int to = 0;

    bool operator==(const Interchange&) const = default;
};

// Chain of single-server reallocations realizing I(queues.front(),
// queues.back()): servers[i] moves from queues[i+1] to queues[i].
struct ReallocationPath {
    std::vector<int> queues;  // size m+1, queues[0] = from, queues[m] = to
    std::vector<int> servers; // size m

    int steps() const { return static_cast<int>(servers.size()); }
    int from() const { return queues.front(); }
    int to() const { return queues.back(); }
    ReallocationPath reversed() const;
};

enum class InterchangeKind { Balancing, Unbalancing };

// Difference between a control and an MB control: d = y_mb - y, h = sum|d|/2.
// h counts the balancing interchanges separating the two.
struct PolicyDelta {
    std::vector<int> d; // size L+1
    int h = 0;
};

// Balancing iff the donor queue is strictly longer than the receiver after
// the underlying control; requires from != to.
InterchangeKind classify(const UpdatedQueueVector& v, const Interchange& ic);

// Shortest chain of single-server reallocations realizing I(from, to) under
// control q, found by breadth-first search over queues (edge a <- b exists
// when some server assigned to b is also connected to a). Returns nothing if
// no chain exists or the donor queue has no withdrawable packet.
std::optional<ReallocationPath> find_reallocation_path(const SystemState& s,
                                                       const SchedulingControl& q, int from,
                                                       int to);

// Replays the path's reallocations on q. Throws if the path is stale (a
// listed server is no longer assigned to its expected queue).
SchedulingControl apply_interchange(const SchedulingControl& q, const ReallocationPath& p);

PolicyDelta policy_delta(const WithdrawalVector& y, const WithdrawalVector& y_mb);

// Picks queues f (d_f >= +1) and t (d_t <= -1) with a feasible reallocation
// path, preferring the pair with the largest updated-length gap (ties: lowest
// f, then lowest t). Returns nothing iff h == 0. The returned interchange is
// always balancing.
std::optional<std::pair<Interchange, ReallocationPath>> select_balancing_interchange(
    const SystemState& s, const SchedulingControl& q, const PolicyDelta& delta);

// Transforms q's withdrawal vector into q_mb's through exactly h balancing
// interchanges, recomputing the delta after each applied step.
std::vector<std::pair<Interchange, ReallocationPath>> convert_to_mb(const SystemState& s,
                                                                    const SchedulingControl& q,
                                                                    const SchedulingControl& q_mb);

} // namespace mbq
