#include "mbq/interchange.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace mbq {

ReallocationPath ReallocationPath::reversed() const {
    ReallocationPath r;
    r.queues.assign(queues.rbegin(), queues.rend());
    r.servers.assign(servers.rbegin(), servers.rend());
    return r;
}

InterchangeKind classify(const UpdatedQueueVector& v, const Interchange& ic) {
    if (ic.from == ic.to) {
        throw std::invalid_argument("classify: null interchange has no class");
    }
    const int L = v.num_queues();
    if (ic.from < 0 || ic.from > L || ic.to < 0 || ic.to > L) {
        throw std::invalid_argument("classify: queue index out of range");
    }
    return v.xhat[ic.from] >= v.xhat[ic.to] + 1 ? InterchangeKind::Balancing
                                                : InterchangeKind::Unbalancing;
}

std::optional<ReallocationPath> find_reallocation_path(const SystemState& s,
                                                       const SchedulingControl& q, int from,
                                                       int to) {
    if (from == to) {
        throw std::invalid_argument("reallocation path: from and to must differ");
    }
    const int L = s.num_queues();
    const int K = s.num_servers();
    if (from < 0 || from > L || to < 0 || to > L) {
        throw std::invalid_argument("reallocation path: queue index out of range");
    }
    if (from >= 1) {
        WithdrawalVector y = withdrawal_from_schedule(q);
        if (s.x[from] - y.y[from] < 1) return std::nullopt; // nothing left to withdraw
    }

    // BFS over queues; an edge a <- b is witnessed by a server currently on b
    // that is also connected to a.
    std::vector<int> parent(L + 1, -1);
    std::vector<int> via_server(L + 1, -1);
    std::vector<char> seen(L + 1, 0);
    std::deque<int> frontier{from};
    seen[from] = 1;
    while (!frontier.empty()) {
        int a = frontier.front();
        frontier.pop_front();
        if (a == to) break;
        for (int k = 0; k < K; ++k) {
            int b = q.q[k];
            if (seen[b] || !s.g.connected(a, k)) continue;
            seen[b] = 1;
            parent[b] = a;
            via_server[b] = k;
            frontier.push_back(b);
        }
    }
    if (!seen[to]) return std::nullopt;

    ReallocationPath path;
    for (int node = to; node != -1; node = parent[node]) {
        path.queues.push_back(node);
        if (parent[node] != -1) path.servers.push_back(via_server[node]);
    }
    std::reverse(path.queues.begin(), path.queues.end());
    std::reverse(path.servers.begin(), path.servers.end());
    return path;
}

SchedulingControl apply_interchange(const SchedulingControl& q, const ReallocationPath& p) {
    if (p.steps() < 1 || p.queues.size() != p.servers.size() + 1) {
        throw std::invalid_argument("apply interchange: malformed path");
    }
    std::vector<int> next = q.q;
    for (int i = 0; i < p.steps(); ++i) {
        int server = p.servers[i];
        if (server < 0 || server >= q.servers()) {
            throw std::invalid_argument("apply interchange: server index out of range");
        }
        if (next[server] != p.queues[i + 1]) {
            throw std::invalid_argument("apply interchange: stale path, server moved");
        }
        next[server] = p.queues[i];
    }
    return SchedulingControl(std::move(next), q.num_queues());
}

PolicyDelta policy_delta(const WithdrawalVector& y, const WithdrawalVector& y_mb) {
    if (y.y.size() != y_mb.y.size()) {
        throw std::invalid_argument("policy delta: dimension mismatch");
    }
    PolicyDelta delta;
    delta.d.resize(y.y.size());
    int abs_sum = 0;
    int signed_sum = 0;
    for (std::size_t i = 0; i < y.y.size(); ++i) {
        delta.d[i] = y_mb.y[i] - y.y[i];
        abs_sum += std::abs(delta.d[i]);
        signed_sum += delta.d[i];
    }
    if (signed_sum != 0) {
        throw std::invalid_argument("policy delta: controls withdraw different totals");
    }
    delta.h = abs_sum / 2;
    return delta;
}

std::optional<std::pair<Interchange, ReallocationPath>> select_balancing_interchange(
    const SystemState& s, const SchedulingControl& q, const PolicyDelta& delta) {
    if (delta.h == 0) return std::nullopt;
    const int L = s.num_queues();
    if (static_cast<int>(delta.d.size()) != L + 1) {
        throw std::invalid_argument("select interchange: dimension mismatch");
    }
    UpdatedQueueVector xhat = updated_queues(s, withdrawal_from_schedule(q));

    std::optional<std::pair<Interchange, ReallocationPath>> best;
    long best_gap = 0;
    for (int f = 0; f <= L; ++f) {
        if (delta.d[f] < 1) continue;
        for (int t = 0; t <= L; ++t) {
            if (delta.d[t] > -1 || t == f) continue;
            auto path = find_reallocation_path(s, q, f, t);
            if (!path) continue;
            long gap = xhat.xhat[f] - xhat.xhat[t];
            if (!best || gap > best_gap) {
                best = {Interchange{f, t}, std::move(*path)};
                best_gap = gap;
            }
        }
    }
    if (!best) {
        throw std::logic_error("select interchange: no feasible pair although h > 0; "
                               "delta was not computed against an MB control");
    }
    if (classify(xhat, best->first) != InterchangeKind::Balancing) {
        throw std::logic_error("select interchange: selected pair is not balancing");
    }
    return best;
}

std::vector<std::pair<Interchange, ReallocationPath>> convert_to_mb(const SystemState& s,
                                                                    const SchedulingControl& q,
                                                                    const SchedulingControl& q_mb) {
    WithdrawalVector target = withdrawal_from_schedule(q_mb);
    SchedulingControl current = q;
    std::vector<std::pair<Interchange, ReallocationPath>> steps;
    PolicyDelta delta = policy_delta(withdrawal_from_schedule(current), target);
    const int budget = delta.h;
    while (delta.h > 0) {
        auto selected = select_balancing_interchange(s, current, delta);
        current = apply_interchange(current, selected->second);
        steps.push_back(std::move(*selected));
        if (static_cast<int>(steps.size()) > budget) {
            throw std::logic_error("convert to mb: exceeded the h-step budget");
        }
        delta = policy_delta(withdrawal_from_schedule(current), target);
    }
    return steps;
}

} // namespace mbq
