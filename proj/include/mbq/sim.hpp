#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mbq/core.hpp"
#include "mbq/policies.hpp"

namespace mbq {

struct BernoulliTraffic {
    double rate = 0.0; // per-queue arrival probability per slot
};

// With probability `prob` a batch arrives, its size uniform on 1..max_batch.
struct BatchTraffic {
    double prob = 0.0;
    int max_batch = 1;
};

using TrafficModel = std::variant<BernoulliTraffic, BatchTraffic>;

double offered_load_per_queue(const TrafficModel& traffic);

struct ExperimentConfig {
    int queues = 1;
    int servers = 1;
    double conn_prob = 1.0;
    TrafficModel traffic = BernoulliTraffic{};
    long horizon = 1000;
    long warmup = 100;
    std::vector<std::uint64_t> seeds;
    std::string policy;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    int jobs = 1;

    void validate() const; // throws std::invalid_argument
};

// One slot as observed by the engine: state before control, the decision,
// the arrivals, and the derived quantities recorded for metrics.
struct SlotRecord {
    long slot = 0;
    std::vector<int> x_before;
    std::vector<int> y;
    std::vector<int> q;
    std::vector<int> z;
    std::int64_t kappa = 0;
    long total_occupancy = 0; // real packets at the start of the slot
    int served = 0;           // real packets withdrawn this slot
};

struct SeedMetrics {
    std::uint64_t seed = 0;
    double eq = 0.0;
    double throughput = 0.0;
};

struct MetricsSummary {
    double eq = 0.0;
    double ci_half_width = 0.0;
    double throughput = 0.0;
    std::vector<SeedMetrics> per_seed;
};

using SlotObserver = std::function<void(const SlotRecord&)>;

// Runs one seed; slots are 1..horizon, the system starts empty, and each
// slot draws connectivity, applies the policy, then draws arrivals. The
// observer (when set) sees every slot in order.
SeedMetrics simulate_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                          const SlotObserver& observer = {});

// Runs all seeds (in parallel when cfg.jobs > 1) and aggregates EQ with a
// 95% confidence half-width across seeds.
MetricsSummary run(const ExperimentConfig& cfg);

struct TraceRow {
    std::uint64_t seed = 0;
    long slot = 0;
    long total_occupancy = 0;
    std::int64_t kappa = 0;
    int served = 0;
};

struct TracedRun {
    MetricsSummary metrics;
    std::vector<TraceRow> rows; // ordered by seed-list position, then slot
};

TracedRun run_traced(const ExperimentConfig& cfg);

// Per-queue arrival-rate ceiling for stable operation: (K/L)(1-(1-p)^L).
double stability_bound(int queues, int servers, double conn_prob);

// Two-sided 95% Student-t critical value (table lookup, exact enough for
// confidence intervals over seed counts used here).
double t_critical_95(int degrees_of_freedom);

inline bool intervals_overlap(double center_a, double half_a, double center_b, double half_b) {
    return std::abs(center_a - center_b) <= half_a + half_b;
}

// Least-squares slope of values against their index; used for occupancy
// trend tests around the stability bound.
double linear_trend_slope(const std::vector<long>& values);

} // namespace mbq
