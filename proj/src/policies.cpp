#include "mbq/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbq/imbalance.hpp"
#include "mbq/interchange.hpp"
#include "mbq/rng.hpp"

namespace mbq {

namespace {

void refuse_if_over_cap(const SystemState& s, std::uint64_t cap, const char* which) {
    double space = std::pow(static_cast<double>(s.num_queues() + 1), s.num_servers());
    if (space > static_cast<double>(cap)) {
        throw EnumerationCapError(std::string(which) +
                                      ": control space (L+1)^K = " + std::to_string(space) +
                                      " exceeds enumeration cap " + std::to_string(cap) +
                                      "; shrink the instance or raise the cap",
                                  space, cap);
    }
}

// Depth-first enumeration of feasible controls with shared scratch buffers.
// Visits assignments in lexicographic order, so keeping the first strict
// improvement yields the lexicographically smallest optimum.
struct ControlEnumerator {
    const SystemState& s;
    int L;
    int K;
    std::vector<int> assignment;
    std::vector<int> count;
    std::vector<int> sort_buf;

    explicit ControlEnumerator(const SystemState& state)
        : s(state), L(state.num_queues()), K(state.num_servers()),
          assignment(static_cast<std::size_t>(K), 0),
          count(static_cast<std::size_t>(L) + 1, 0), sort_buf(static_cast<std::size_t>(L) + 1) {}

    std::int64_t leaf_kappa() {
        for (int i = 1; i <= L; ++i) sort_buf[i - 1] = s.x[i] - count[i];
        std::sort(sort_buf.begin(), sort_buf.begin() + L, std::greater<int>());
        sort_buf[L] = -count[0]; // dummy's updated size
        std::int64_t total = 0;
        for (int r = 1; r <= L + 1; ++r) {
            total += static_cast<std::int64_t>(L + 2 - 2 * r) * sort_buf[r - 1];
        }
        return total;
    }

    template <typename LeafFn> void walk(int server, LeafFn&& leaf) {
        if (server == K) {
            leaf();
            return;
        }
        for (int i = 0; i <= L; ++i) {
            if (i >= 1 && (!s.g.connected(i, server) || count[i] >= s.x[i])) continue;
            assignment[server] = i;
            ++count[i];
            walk(server + 1, leaf);
            --count[i];
        }
        assignment[server] = 0;
    }
};

PolicyDecision decision_from_assignment(const SystemState& s, const std::vector<int>& assignment) {
    SchedulingControl q(assignment, s.num_queues());
    WithdrawalVector y = withdrawal_from_schedule(q);
    return PolicyDecision{std::move(y), std::move(q)};
}

} // namespace

PolicyDecision mb_bruteforce(const SystemState& s, std::uint64_t cap) {
    refuse_if_over_cap(s, cap, "mb");
    ControlEnumerator en(s);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::vector<int> best_assignment;
    en.walk(0, [&] {
        std::int64_t k = en.leaf_kappa();
        if (k < best) {
            best = k;
            best_assignment = en.assignment;
        }
    });
    return decision_from_assignment(s, best_assignment);
}

PolicyDecision lb_bruteforce(const SystemState& s, std::uint64_t cap) {
    refuse_if_over_cap(s, cap, "lb");
    // Work conservation is equivalent to serving the maximum number of real
    // packets: an idle server admits a reallocation chain onto some queue
    // with a leftover packet exactly when the service assignment is not a
    // maximum matching.
    const int max_served = max_real_service(s);
    ControlEnumerator en(s);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<int> best_assignment;
    en.walk(0, [&] {
        if (en.K - en.count[0] != max_served) return;
        std::int64_t k = en.leaf_kappa();
        if (k > best) {
            best = k;
            best_assignment = en.assignment;
        }
    });
    return decision_from_assignment(s, best_assignment);
}

namespace {

enum class QueueChoice { Longest, Shortest, Uniform };

std::vector<int> server_order(const SystemState& s, bool least_connected_first) {
    std::vector<int> order(s.num_servers());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int da = s.g.server_degree(a);
        int db = s.g.server_degree(b);
        if (da != db) return least_connected_first ? da < db : da > db;
        return a < b;
    });
    return order;
}

PolicyDecision sequential_allocate(const SystemState& s, const std::vector<int>& order,
                                   QueueChoice choice, std::mt19937_64* rng) {
    const int L = s.num_queues();
    std::vector<int> remaining(s.x);
    std::vector<int> assignment(s.num_servers(), 0);
    std::vector<int> eligible;
    for (int j : order) {
        int picked = 0;
        if (choice == QueueChoice::Uniform) {
            eligible.clear();
            for (int i = 1; i <= L; ++i) {
                if (s.g.connected(i, j) && remaining[i] > 0) eligible.push_back(i);
            }
            if (!eligible.empty()) {
                picked = eligible.size() == 1
                             ? eligible.front()
                             : eligible[uniform_index(*rng, static_cast<int>(eligible.size()))];
            }
        } else {
            for (int i = 1; i <= L; ++i) {
                if (!s.g.connected(i, j) || remaining[i] <= 0) continue;
                if (picked == 0 ||
                    (choice == QueueChoice::Longest ? remaining[i] > remaining[picked]
                                                    : remaining[i] < remaining[picked])) {
                    picked = i;
                }
            }
        }
        assignment[j] = picked;
        if (picked != 0) --remaining[picked];
    }
    return decision_from_assignment(s, assignment);
}

} // namespace

PolicyDecision lcsf_lcq(const SystemState& s) {
    return sequential_allocate(s, server_order(s, true), QueueChoice::Longest, nullptr);
}

PolicyDecision mcsf_scq(const SystemState& s) {
    return sequential_allocate(s, server_order(s, false), QueueChoice::Shortest, nullptr);
}

PolicyDecision mcsf_lcq(const SystemState& s) {
    return sequential_allocate(s, server_order(s, false), QueueChoice::Longest, nullptr);
}

PolicyDecision lcsf_scq(const SystemState& s) {
    return sequential_allocate(s, server_order(s, true), QueueChoice::Shortest, nullptr);
}

PolicyDecision randomized(const SystemState& s, std::mt19937_64& rng) {
    std::vector<int> natural(s.num_servers());
    std::iota(natural.begin(), natural.end(), 0);
    return sequential_allocate(s, natural, QueueChoice::Uniform, &rng);
}

bool is_work_conserving(const SystemState& s, const SchedulingControl& q) {
    if (!is_feasible_schedule(s, q)) {
        throw std::invalid_argument("work conserving: control infeasible for state");
    }
    WithdrawalVector y = withdrawal_from_schedule(q);
    if (y.y[0] == 0) return true;
    for (int f = 1; f <= s.num_queues(); ++f) {
        if (s.x[f] - y.y[f] < 1) continue;
        if (find_reallocation_path(s, q, f, 0)) return false;
    }
    return true;
}

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names{"mb",       "lb",       "lcsf-lcq", "mcsf-scq",
                                                "mcsf-lcq", "lcsf-scq", "random"};
    return names;
}

Policy policy_by_name(const std::string& name, std::uint64_t cap) {
    if (name == "mb") {
        return {name, true, [cap](const SystemState& s, std::mt19937_64&) {
                    return mb_bruteforce(s, cap);
                }};
    }
    if (name == "lb") {
        return {name, true, [cap](const SystemState& s, std::mt19937_64&) {
                    return lb_bruteforce(s, cap);
                }};
    }
    if (name == "lcsf-lcq") {
        return {name, true, [](const SystemState& s, std::mt19937_64&) { return lcsf_lcq(s); }};
    }
    if (name == "mcsf-scq") {
        return {name, true, [](const SystemState& s, std::mt19937_64&) { return mcsf_scq(s); }};
    }
    if (name == "mcsf-lcq") {
        return {name, true, [](const SystemState& s, std::mt19937_64&) { return mcsf_lcq(s); }};
    }
    if (name == "lcsf-scq") {
        return {name, true, [](const SystemState& s, std::mt19937_64&) { return lcsf_scq(s); }};
    }
    if (name == "random") {
        return {name, false,
                [](const SystemState& s, std::mt19937_64& rng) { return randomized(s, rng); }};
    }
    throw std::invalid_argument("unknown policy '" + name + "'");
}

} // namespace mbq
