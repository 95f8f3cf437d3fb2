#include "mbq/imbalance.hpp"

#include <algorithm>
#include <stdexcept>

namespace mbq {

UpdatedQueueVector::UpdatedQueueVector(std::vector<int> xhat_in) : xhat(std::move(xhat_in)) {
    if (xhat.size() < 2) {
        throw std::invalid_argument("updated queues: need dummy plus one queue");
    }
    if (xhat[0] > 0) {
        throw std::invalid_argument("updated queues: dummy entry cannot be positive");
    }
    for (std::size_t i = 1; i < xhat.size(); ++i) {
        if (xhat[i] < 0) throw std::invalid_argument("updated queues: negative real queue");
    }
}

UpdatedQueueVector updated_queues(const SystemState& s, const WithdrawalVector& y) {
    if (y.y.size() != s.x.size()) {
        throw std::invalid_argument("updated queues: dimension mismatch");
    }
    std::vector<int> xhat(s.x.size());
    for (std::size_t i = 0; i < xhat.size(); ++i) {
        xhat[i] = s.x[i] - y.y[i];
    }
    return UpdatedQueueVector(std::move(xhat));
}

std::vector<int> rank_order(const UpdatedQueueVector& v) {
    const int L = v.num_queues();
    std::vector<int> order(L);
    for (int i = 0; i < L; ++i) order[i] = i + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (v.xhat[a] != v.xhat[b]) return v.xhat[a] > v.xhat[b];
        return a < b;
    });
    order.push_back(0); // dummy closes the ranking
    return order;
}

std::int64_t kappa(const UpdatedQueueVector& v) {
    const int L = v.num_queues();
    std::vector<int> sorted(v.xhat.begin() + 1, v.xhat.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    sorted.push_back(v.xhat[0]);
    std::int64_t total = 0;
    for (int r = 1; r <= L + 1; ++r) {
        total += static_cast<std::int64_t>(L + 2 - 2 * r) * sorted[r - 1];
    }
    return total;
}

std::pair<std::int64_t, std::int64_t> kappa_bounds(const UpdatedQueueVector& v) {
    const int L = v.num_queues();
    auto [lo, hi] = std::minmax_element(v.xhat.begin() + 1, v.xhat.end());
    std::int64_t smallest = *lo;
    std::int64_t largest = *hi;
    return {static_cast<std::int64_t>(L) * smallest,
            2 * (L - 1) * largest - (L - 2) * smallest};
}

namespace {

void check_rank_conventions(const UpdatedQueueVector& v, const std::vector<int>& order,
                            int longer_rank, int shorter_rank) {
    const int L = v.num_queues();
    if (longer_rank < 1 || shorter_rank > L + 1 || longer_rank >= shorter_rank) {
        throw std::invalid_argument("kappa delta: ranks must satisfy 1 <= l < s <= L+1");
    }
    int value_l = v.xhat[order[longer_rank - 1]];
    int value_s = v.xhat[order[shorter_rank - 1]];
    if (value_l <= value_s) {
        throw std::invalid_argument("kappa delta: rank-l queue must be strictly longer");
    }
    // l must be the last rank holding its value, s the first holding its.
    if (longer_rank <= L && v.xhat[order[longer_rank]] >= value_l) {
        throw std::invalid_argument("kappa delta: l is not the last rank at its value");
    }
    if (shorter_rank >= 2 && v.xhat[order[shorter_rank - 2]] <= value_s) {
        throw std::invalid_argument("kappa delta: s is not the first rank at its value");
    }
}

} // namespace

std::int64_t kappa_delta(const UpdatedQueueVector& v, int longer_rank, int shorter_rank) {
    std::vector<int> order = rank_order(v);
    check_rank_conventions(v, order, longer_rank, shorter_rank);
    int value_l = v.xhat[order[longer_rank - 1]];
    int value_s = v.xhat[order[shorter_rank - 1]];
    if (value_l >= value_s + 2) {
        return -2 * static_cast<std::int64_t>(shorter_rank - longer_rank);
    }
    return 0;
}

UpdatedQueueVector interchange_at_ranks(const UpdatedQueueVector& v, int longer_rank,
                                        int shorter_rank) {
    std::vector<int> order = rank_order(v);
    check_rank_conventions(v, order, longer_rank, shorter_rank);
    std::vector<int> next = v.xhat;
    next[order[longer_rank - 1]] -= 1;
    next[order[shorter_rank - 1]] += 1;
    return UpdatedQueueVector(std::move(next));
}

} // namespace mbq
