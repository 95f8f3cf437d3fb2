#include "mbq/order.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mbq {

namespace {

bool moves_cannot_reach(const std::vector<int>& target, const std::vector<int>& from) {
    // No move increases the total or the largest component.
    long sum_t = std::accumulate(target.begin(), target.end(), 0L);
    long sum_f = std::accumulate(from.begin(), from.end(), 0L);
    if (sum_t > sum_f) return true;
    int max_t = *std::max_element(target.begin(), target.end());
    int max_f = *std::max_element(from.begin(), from.end());
    return max_t > max_f;
}

} // namespace

Ternary preferred_leq(const std::vector<int>& target, const std::vector<int>& from,
                      const SearchCaps& caps) {
    if (target.size() != from.size() || target.empty()) {
        throw std::invalid_argument("preferred order: vectors must share a nonzero dimension");
    }
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target[i] < 0 || from[i] < 0) {
            throw std::invalid_argument("preferred order: entries must be nonnegative");
        }
    }
    if (target == from) return Ternary::True;
    if (moves_cannot_reach(target, from)) return Ternary::False;

    const int d = static_cast<int>(from.size());
    std::set<std::vector<int>> visited{from};
    std::deque<std::vector<int>> frontier{from};
    std::vector<int> next;

    auto push = [&](std::vector<int>&& v) -> bool {
        if (v == target) return true;
        if (visited.insert(v).second) frontier.push_back(std::move(v));
        return false;
    };

    while (!frontier.empty()) {
        if (visited.size() > caps.max_nodes) return Ternary::Unknown;
        std::vector<int> v = std::move(frontier.front());
        frontier.pop_front();

        for (int i = 0; i < d; ++i) {
            // R1: drop one unit anywhere.
            if (v[i] >= 1) {
                next = v;
                next[i] -= 1;
                if (push(std::move(next))) return Ternary::True;
            }
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                // R2: swap two components.
                if (j > i && v[i] != v[j]) {
                    next = v;
                    std::swap(next[i], next[j]);
                    if (push(std::move(next))) return Ternary::True;
                }
                // R3: balancing interchange, donor must be a real queue.
                if (i >= 1 && v[i] >= v[j] + 1) {
                    next = v;
                    next[i] -= 1;
                    next[j] += 1;
                    if (push(std::move(next))) return Ternary::True;
                }
            }
        }
    }
    return Ternary::False;
}

CostFunction total_occupancy_cost() {
    return {"total", [](const std::vector<int>& x) {
                return static_cast<double>(std::accumulate(x.begin() + 1, x.end(), 0L));
            }};
}

CostFunction max_queue_cost() {
    return {"max", [](const std::vector<int>& x) {
                return static_cast<double>(*std::max_element(x.begin() + 1, x.end()));
            }};
}

namespace {

// f(X(t)) for each sampled slot, one entry per seed.
std::vector<std::vector<double>> sampled_costs(const ExperimentConfig& cfg,
                                               const std::string& policy,
                                               const CostFunction& cost,
                                               const std::vector<long>& slots) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.policy = policy;
    run_cfg.validate();
    std::vector<std::vector<double>> per_slot(slots.size(),
                                              std::vector<double>(cfg.seeds.size()));
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
        std::size_t cursor = 0;
        simulate_seed(run_cfg, cfg.seeds[si], [&](const SlotRecord& r) {
            while (cursor < slots.size() && slots[cursor] == r.slot) {
                per_slot[cursor][si] = cost.value(r.x_before);
                ++cursor;
            }
        });
    }
    return per_slot;
}

} // namespace

DominanceReport empirical_dominance(const ExperimentConfig& cfg, const std::string& policy_a,
                                    const std::string& policy_b, const CostFunction& cost,
                                    int num_samples, double tolerance) {
    if (num_samples < 1) {
        throw std::invalid_argument("dominance: need at least one sampled slot");
    }
    if (cfg.seeds.empty() || cfg.horizon < 1) {
        throw std::invalid_argument("dominance: degenerate configuration");
    }

    DominanceReport report;
    report.policy_a = policy_a;
    report.policy_b = policy_b;
    report.cost = cost.name;
    report.tolerance = tolerance;

    num_samples = static_cast<int>(std::min<long>(num_samples, cfg.horizon));
    for (int k = 1; k <= num_samples; ++k) {
        long slot = cfg.horizon * static_cast<long>(k) / num_samples;
        if (report.sample_slots.empty() || report.sample_slots.back() != slot) {
            report.sample_slots.push_back(slot);
        }
    }

    auto costs_a = sampled_costs(cfg, policy_a, cost, report.sample_slots);
    auto costs_b = sampled_costs(cfg, policy_b, cost, report.sample_slots);
    const double n = static_cast<double>(cfg.seeds.size());

    for (std::size_t ti = 0; ti < report.sample_slots.size(); ++ti) {
        DominanceCurve curve;
        curve.slot = report.sample_slots[ti];
        std::vector<double> grid = costs_a[ti];
        grid.insert(grid.end(), costs_b[ti].begin(), costs_b[ti].end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

        std::vector<double> sa = costs_a[ti];
        std::vector<double> sb = costs_b[ti];
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) report.identical = false;

        for (double v : grid) {
            double ca = (std::upper_bound(sa.begin(), sa.end(), v) - sa.begin()) / n;
            double cb = (std::upper_bound(sb.begin(), sb.end(), v) - sb.begin()) / n;
            curve.values.push_back(v);
            curve.cdf_a.push_back(ca);
            curve.cdf_b.push_back(cb);
            ++report.points_total;
            if (ca >= cb - tolerance) ++report.points_dominating;
        }
        report.curves.push_back(std::move(curve));
    }
    return report;
}

} // namespace mbq
