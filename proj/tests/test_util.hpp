#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "mbq/core.hpp"
#include "mbq/imbalance.hpp"

// Test-side oracles, written independently of the library code paths they
// cross-check.
namespace oracle {

// Eq-by-the-book imbalance index: sort descending, dummy last, sum every
// ordered pair difference.
inline long long kappa_pairs(const std::vector<int>& xhat) {
    const int L = static_cast<int>(xhat.size()) - 1;
    std::vector<int> v(xhat.begin() + 1, xhat.end());
    std::sort(v.begin(), v.end(), std::greater<int>());
    v.push_back(xhat[0]);
    long long total = 0;
    for (int i = 0; i < L; ++i) {
        for (int j = i + 1; j <= L; ++j) total += v[i] - v[j];
    }
    return total;
}

// All assignments in {0..L}^K, no pruning.
inline std::vector<std::vector<int>> all_assignments(int num_queues, int num_servers) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(num_servers, 0);
    while (true) {
        out.push_back(a);
        int j = 0;
        while (j < num_servers && a[j] == num_queues) {
            a[j] = 0;
            ++j;
        }
        if (j == num_servers) break;
        ++a[j];
    }
    return out;
}

inline bool assignment_feasible(const mbq::SystemState& s, const std::vector<int>& a) {
    std::vector<int> count(s.x.size(), 0);
    for (int j = 0; j < static_cast<int>(a.size()); ++j) {
        if (!s.g.connected(a[j], j)) return false;
        ++count[a[j]];
    }
    for (int i = 1; i <= s.num_queues(); ++i) {
        if (count[i] > s.x[i]) return false;
    }
    return true;
}

inline mbq::SystemState random_state(std::mt19937_64& rng, int max_queues = 4,
                                     int max_servers = 4, int max_entry = 5,
                                     double link_prob = 0.5) {
    std::uniform_int_distribution<int> pick_L(1, max_queues);
    std::uniform_int_distribution<int> pick_K(1, max_servers);
    const int L = pick_L(rng);
    const int K = pick_K(rng);
    std::uniform_int_distribution<int> entry(0, max_entry);
    std::bernoulli_distribution link(link_prob);
    std::vector<int> x(L + 1, 0);
    for (int i = 1; i <= L; ++i) x[i] = entry(rng);
    mbq::ConnectivityMatrix g(L, K);
    for (int i = 1; i <= L; ++i) {
        for (int j = 0; j < K; ++j) g.set(i, j, link(rng));
    }
    return mbq::SystemState(std::move(x), std::move(g));
}

// Feasible-by-construction random control.
inline mbq::SchedulingControl random_control(std::mt19937_64& rng, const mbq::SystemState& s) {
    std::vector<int> remaining = s.x;
    std::vector<int> a(s.num_servers(), 0);
    for (int j = 0; j < s.num_servers(); ++j) {
        std::vector<int> eligible{0};
        for (int i = 1; i <= s.num_queues(); ++i) {
            if (s.g.connected(i, j) && remaining[i] > 0) eligible.push_back(i);
        }
        std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
        a[j] = eligible[pick(rng)];
        if (a[j] != 0) --remaining[a[j]];
    }
    return mbq::SchedulingControl(std::move(a), s.num_queues());
}

} // namespace oracle
