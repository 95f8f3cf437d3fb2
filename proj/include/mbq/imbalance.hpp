#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mbq/core.hpp"

namespace mbq {

// Queue sizes after withdrawal and before arrivals. Slot 0 holds the dummy
// queue's updated size x[0] - y[0], which is zero or negative; real entries
// are nonnegative.
struct UpdatedQueueVector {
    std::vector<int> xhat; // size L+1

    explicit UpdatedQueueVector(std::vector<int> xhat);

    int num_queues() const { return static_cast<int>(xhat.size()) - 1; }
};

UpdatedQueueVector updated_queues(const SystemState& s, const WithdrawalVector& y);

// Queue indices by descending rank: ranks 1..L are the real queues ordered by
// value (ties broken by lower queue index); the dummy queue is always rank
// L+1. Returned vector is 0-based: entry r-1 is the queue at rank r.
std::vector<int> rank_order(const UpdatedQueueVector& v);

// Imbalance index: sum of pairwise ordered differences across ranks 1..L+1
// with the dummy ranked last. Equals sum_r (L+2-2r) * value(rank r).
std::int64_t kappa(const UpdatedQueueVector& v);

// Analytic extremes of kappa over redistributions of the real-queue total:
// (L * smallest, 2(L-1) * largest - (L-2) * smallest), taken from the current
// descending real values.
std::pair<std::int64_t, std::int64_t> kappa_bounds(const UpdatedQueueVector& v);

// Exact change of kappa caused by moving one packet from the rank-l queue to
// the rank-s queue (l < s). Requires the rank conventions: l is the last rank
// holding its value, s the first rank holding its value, and value(l) >
// value(s). Returns -2(s-l) when value(l) >= value(s)+2, else 0 (the
// interchange merely permutes two values).
std::int64_t kappa_delta(const UpdatedQueueVector& v, int longer_rank, int shorter_rank);

// Applies the rank-(l,s) interchange above and returns the new vector.
UpdatedQueueVector interchange_at_ranks(const UpdatedQueueVector& v, int longer_rank,
                                        int shorter_rank);

} // namespace mbq
