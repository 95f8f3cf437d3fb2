#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mbq/sim.hpp"

namespace mbq {

enum class Ternary { False, True, Unknown };

struct SearchCaps {
    std::size_t max_nodes = 1'000'000;
};

// Decides whether `target` is reachable from `from` through unit reductions,
// two-component permutations, and balancing interchanges (donor component
// must have index >= 1; index 0 plays the dummy-queue role and may only
// receive). Breadth-first search over the finite reachable set; Unknown only
// when the node budget runs out.
Ternary preferred_leq(const std::vector<int>& target, const std::vector<int>& from,
                      const SearchCaps& caps = {});

// Cost of a queue-length vector (index 0 is the dummy and never counted).
struct CostFunction {
    std::string name;
    std::function<double(const std::vector<int>&)> value;
};

CostFunction total_occupancy_cost(); // sum of real queue lengths
CostFunction max_queue_cost();       // longest real queue

// Empirical CDFs of f(X(t)) for both policies at one sampled slot, over the
// pooled grid of observed values.
struct DominanceCurve {
    long slot = 0;
    std::vector<double> values;
    std::vector<double> cdf_a;
    std::vector<double> cdf_b;
};

struct DominanceReport {
    std::string policy_a;
    std::string policy_b;
    std::string cost;
    double tolerance = 0.0;
    std::vector<long> sample_slots;
    std::vector<DominanceCurve> curves;
    std::size_t points_total = 0;
    std::size_t points_dominating = 0; // points where cdf_a >= cdf_b - tolerance
    bool identical = true;             // every sampled value pair coincided

    double fraction_dominating() const {
        return points_total == 0 ? 0.0
                                 : static_cast<double>(points_dominating) / points_total;
    }
};

// Runs both policies on identically seeded environment streams and compares
// the empirical CDFs of f(X(t)) across seeds at `num_samples` slots spread
// over the horizon. Policy A "weakly dominates" at a grid point when its CDF
// is at least policy B's minus the tolerance. Evidence, not proof: the
// report carries the full grids so the claim can be audited.
DominanceReport empirical_dominance(const ExperimentConfig& cfg, const std::string& policy_a,
                                    const std::string& policy_b, const CostFunction& cost,
                                    int num_samples = 20, double tolerance = 0.0);

} // namespace mbq
