#include "mbq/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mbq {

ConnectivityMatrix::ConnectivityMatrix(int num_queues, int num_servers)
    : queues_(num_queues), servers_(num_servers),
      link_(static_cast<std::size_t>(num_queues + 1) * num_servers, 0) {
    if (num_queues < 1 || num_servers < 1) {
        throw std::invalid_argument("connectivity: need at least one queue and one server");
    }
    for (int j = 0; j < servers_; ++j) {
        link_[j] = 1; // dummy row
    }
}

ConnectivityMatrix ConnectivityMatrix::fully_connected(int num_queues, int num_servers) {
    ConnectivityMatrix g(num_queues, num_servers);
    std::fill(g.link_.begin(), g.link_.end(), std::uint8_t{1});
    return g;
}

void ConnectivityMatrix::set(int queue, int server, bool on) {
    if (queue < 1 || queue > queues_ || server < 0 || server >= servers_) {
        throw std::invalid_argument("connectivity: index out of range (dummy row is fixed)");
    }
    link_[static_cast<std::size_t>(queue) * servers_ + server] = on ? 1 : 0;
}

int ConnectivityMatrix::queue_degree(int queue) const {
    int d = 0;
    for (int j = 0; j < servers_; ++j) {
        d += connected(queue, j) ? 1 : 0;
    }
    return d;
}

int ConnectivityMatrix::server_degree(int server) const {
    int d = 0;
    for (int i = 1; i <= queues_; ++i) {
        d += connected(i, server) ? 1 : 0;
    }
    return d;
}

SystemState::SystemState(std::vector<int> x_in, ConnectivityMatrix g_in, long slot_in)
    : x(std::move(x_in)), g(std::move(g_in)), slot(slot_in) {
    if (static_cast<int>(x.size()) != g.queues() + 1) {
        throw std::invalid_argument("state: queue vector size must be L+1");
    }
    if (x[0] != 0) {
        throw std::invalid_argument("state: dummy queue must be empty at slot boundaries");
    }
    for (int v : x) {
        if (v < 0) throw std::invalid_argument("state: negative queue length");
    }
    if (slot < 1) {
        throw std::invalid_argument("state: slot index starts at 1");
    }
}

long SystemState::total_real_packets() const {
    return std::accumulate(x.begin() + 1, x.end(), 0L);
}

SchedulingControl::SchedulingControl(std::vector<int> q_in, int num_queues)
    : q(std::move(q_in)), num_queues_(num_queues) {
    if (q.empty()) throw std::invalid_argument("control: no servers");
    for (int i : q) {
        if (i < 0 || i > num_queues_) {
            throw std::invalid_argument("control: queue index out of range");
        }
    }
}

WithdrawalVector::WithdrawalVector(std::vector<int> y_in) : y(std::move(y_in)) {
    if (y.size() < 2) throw std::invalid_argument("withdrawal: need dummy plus one queue");
    for (int v : y) {
        if (v < 0) throw std::invalid_argument("withdrawal: negative entry");
    }
}

int WithdrawalVector::servers() const {
    return std::accumulate(y.begin(), y.end(), 0);
}

ArrivalVector::ArrivalVector(std::vector<int> z_in) : z(std::move(z_in)) {
    if (z.size() < 2) throw std::invalid_argument("arrivals: need dummy plus one queue");
    for (int v : z) {
        if (v < 0) throw std::invalid_argument("arrivals: negative entry");
    }
}

WithdrawalVector withdrawal_from_schedule(const SchedulingControl& q) {
    std::vector<int> y(static_cast<std::size_t>(q.num_queues()) + 1, 0);
    for (int i : q.q) {
        ++y[i];
    }
    return WithdrawalVector(std::move(y));
}

bool is_feasible_schedule(const SystemState& s, const SchedulingControl& q) {
    if (q.servers() != s.num_servers() || q.num_queues() != s.num_queues()) {
        throw std::invalid_argument("schedule feasibility: dimension mismatch");
    }
    std::vector<int> count(s.x.size(), 0);
    for (int j = 0; j < q.servers(); ++j) {
        if (!s.g.connected(q.q[j], j)) return false;
        ++count[q.q[j]];
    }
    for (int i = 1; i <= s.num_queues(); ++i) {
        if (count[i] > s.x[i]) return false;
    }
    return true;
}

bool satisfies_withdrawal_conditions(const SystemState& s, const WithdrawalVector& y) {
    if (y.y.size() != s.x.size()) {
        throw std::invalid_argument("withdrawal feasibility: dimension mismatch");
    }
    if (y.servers() != s.num_servers()) return false;
    for (int i = 1; i <= s.num_queues(); ++i) {
        if (y.y[i] > std::min(s.x[i], s.g.queue_degree(i))) return false;
    }
    return true;
}

namespace {

// Kuhn-style augmenting search; queue i accepts up to cap[i] servers.
struct DemandMatcher {
    const ConnectivityMatrix& g;
    const std::vector<int>& cap;
    std::vector<std::vector<int>> on_queue; // queue -> servers placed there
    std::vector<int> queue_of;              // server -> queue, -1 if unplaced

    DemandMatcher(const ConnectivityMatrix& g_in, const std::vector<int>& cap_in)
        : g(g_in), cap(cap_in), on_queue(cap_in.size()), queue_of(g_in.servers(), -1) {}

    // Place `server` on some unvisited queue, re-routing an occupant if the
    // queue is full. Queue i is marked visited before descending, so the
    // on_queue[i] loop below never mutates the vector it iterates.
    bool place(int server, std::vector<char>& visited) {
        for (int i = 0; i < static_cast<int>(cap.size()); ++i) {
            if (!g.connected(i, server) || visited[i]) continue;
            visited[i] = 1;
            if (static_cast<int>(on_queue[i].size()) < cap[i]) {
                on_queue[i].push_back(server);
                queue_of[server] = i;
                return true;
            }
            for (int& occupant : on_queue[i]) {
                int moved = occupant;
                if (place(moved, visited)) {
                    occupant = server;
                    queue_of[server] = i;
                    return true;
                }
            }
        }
        return false;
    }

    int run_all() {
        int placed = 0;
        for (int j = 0; j < g.servers(); ++j) {
            std::vector<char> visited(cap.size(), 0);
            if (place(j, visited)) ++placed;
        }
        return placed;
    }
};

} // namespace

std::optional<SchedulingControl> find_schedule_for(const SystemState& s, const WithdrawalVector& y) {
    if (!satisfies_withdrawal_conditions(s, y)) return std::nullopt;
    DemandMatcher matcher(s.g, y.y);
    if (matcher.run_all() != s.num_servers()) return std::nullopt;
    return SchedulingControl(matcher.queue_of, s.num_queues());
}

bool is_feasible_withdrawal(const SystemState& s, const WithdrawalVector& y) {
    return find_schedule_for(s, y).has_value();
}

int max_real_service(const SystemState& s) {
    std::vector<int> cap(s.x.size());
    cap[0] = 0; // dummy excluded: count real service only
    for (int i = 1; i <= s.num_queues(); ++i) cap[i] = s.x[i];
    DemandMatcher matcher(s.g, cap);
    return matcher.run_all();
}

SystemState evolve(const SystemState& s, const WithdrawalVector& y, const ArrivalVector& z,
                   ConnectivityMatrix g_next) {
    if (y.y.size() != s.x.size() || z.z.size() != s.x.size()) {
        throw std::invalid_argument("evolve: dimension mismatch");
    }
    if (z.z[0] != y.y[0]) {
        throw std::invalid_argument("evolve: dummy arrivals must equal dummy withdrawals");
    }
    if (!satisfies_withdrawal_conditions(s, y)) {
        throw std::invalid_argument("evolve: withdrawal vector infeasible for state");
    }
    std::vector<int> next(s.x.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] = s.x[i] - y.y[i] + z.z[i];
    }
    return SystemState(std::move(next), std::move(g_next), s.slot + 1);
}

} // namespace mbq
