#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mbq {

// Queue/server connectivity for one slot. Queues are indexed 0..L where
// queue 0 is the dummy queue (serving it idles the server); the dummy row
// is permanently connected to every server.
class ConnectivityMatrix {
public:
    ConnectivityMatrix(int num_queues, int num_servers);
    static ConnectivityMatrix fully_connected(int num_queues, int num_servers);

    int queues() const { return queues_; }   // L, real queues only
    int servers() const { return servers_; } // K

    bool connected(int queue, int server) const {
        return link_[static_cast<std::size_t>(queue) * servers_ + server] != 0;
    }
    void set(int queue, int server, bool on);

    int queue_degree(int queue) const;   // servers connected to `queue`
    int server_degree(int server) const; // real queues connected to `server`

    bool operator==(const ConnectivityMatrix& other) const = default;

private:
    int queues_;
    int servers_;
    std::vector<std::uint8_t> link_; // (L+1) x K, row-major
};

// Queue lengths plus connectivity at the beginning of a slot.
struct SystemState {
    std::vector<int> x;   // size L+1, x[0] == 0
    ConnectivityMatrix g;
    long slot = 1;

    SystemState(std::vector<int> x, ConnectivityMatrix g, long slot = 1);

    int num_queues() const { return g.queues(); }
    int num_servers() const { return g.servers(); }
    long total_real_packets() const;
};

// Per-server queue assignment; q[j] == 0 idles server j.
struct SchedulingControl {
    std::vector<int> q;

    SchedulingControl(std::vector<int> q, int num_queues);

    int servers() const { return static_cast<int>(q.size()); }
    int num_queues() const { return num_queues_; }

    bool operator==(const SchedulingControl& other) const { return q == other.q; }

private:
    int num_queues_;
};

// Packets withdrawn per queue in one slot; entries sum to K because every
// server withdraws exactly one packet (dummy packets included).
struct WithdrawalVector {
    std::vector<int> y; // size L+1

    explicit WithdrawalVector(std::vector<int> y);

    int servers() const;              // sum of entries
    int num_queues() const { return static_cast<int>(y.size()) - 1; }

    bool operator==(const WithdrawalVector& other) const { return y == other.y; }
};

// Exogenous arrivals per queue; z[0] mirrors the control's y[0] so the dummy
// queue stays at zero across slot boundaries.
struct ArrivalVector {
    std::vector<int> z; // size L+1

    explicit ArrivalVector(std::vector<int> z);
};

WithdrawalVector withdrawal_from_schedule(const SchedulingControl& q);

bool is_feasible_schedule(const SystemState& s, const SchedulingControl& q);

// True iff y satisfies the per-queue/server-count necessary conditions for
// state s. Necessary but not sufficient; see is_feasible_withdrawal.
bool satisfies_withdrawal_conditions(const SystemState& s, const WithdrawalVector& y);

// Exact decision: finds a feasible scheduling control implementing y, or
// nothing if none exists. Decided by augmenting-path matching of servers to
// per-queue demand slots.
std::optional<SchedulingControl> find_schedule_for(const SystemState& s, const WithdrawalVector& y);

bool is_feasible_withdrawal(const SystemState& s, const WithdrawalVector& y);

// Largest number of servers that can simultaneously serve real packets in
// state s (maximum matching against queue capacities x_i).
int max_real_service(const SystemState& s);

// One-slot evolution x' = x - y + z with the next slot's connectivity.
// Requires z[0] == y[0]; rejects withdrawals violating the necessary
// feasibility conditions rather than clamping.
SystemState evolve(const SystemState& s, const WithdrawalVector& y, const ArrivalVector& z,
                   ConnectivityMatrix g_next);

} // namespace mbq
