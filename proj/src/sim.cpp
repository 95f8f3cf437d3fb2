#include "mbq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mbq/imbalance.hpp"
#include "mbq/rng.hpp"

namespace mbq {

namespace {

constexpr std::uint64_t kEnvStream = 0x656e7669726f6e00ULL; // per-slot environment draws
constexpr std::uint64_t kPolicyStream = 0x706f6c6963790000ULL;

} // namespace

double offered_load_per_queue(const TrafficModel& traffic) {
    if (const auto* b = std::get_if<BernoulliTraffic>(&traffic)) {
        return b->rate;
    }
    const auto& batch = std::get<BatchTraffic>(traffic);
    return batch.prob * (batch.max_batch + 1) / 2.0;
}

void ExperimentConfig::validate() const {
    if (queues < 1) throw std::invalid_argument("config: need at least one queue");
    if (servers < 1) throw std::invalid_argument("config: need at least one server");
    if (conn_prob < 0.0 || conn_prob > 1.0) {
        throw std::invalid_argument("config: connectivity probability outside [0,1]");
    }
    if (const auto* b = std::get_if<BernoulliTraffic>(&traffic)) {
        if (b->rate < 0.0 || b->rate > 1.0) {
            throw std::invalid_argument("config: arrival rate outside [0,1]");
        }
    } else {
        const auto& batch = std::get<BatchTraffic>(traffic);
        if (batch.prob < 0.0 || batch.prob > 1.0) {
            throw std::invalid_argument("config: batch probability outside [0,1]");
        }
        if (batch.max_batch < 1) {
            throw std::invalid_argument("config: maximum batch size must be at least 1");
        }
    }
    if (horizon < 1) throw std::invalid_argument("config: horizon must be positive");
    if (warmup < 0 || warmup >= horizon) {
        throw std::invalid_argument("config: warmup must lie in [0, horizon)");
    }
    if (seeds.empty()) throw std::invalid_argument("config: no seeds given");
    if (policy.empty()) throw std::invalid_argument("config: no policy given");
    if (jobs < 1) throw std::invalid_argument("config: jobs must be positive");
    policy_by_name(policy); // throws on unknown names
}

namespace {

ConnectivityMatrix draw_connectivity(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    ConnectivityMatrix g(cfg.queues, cfg.servers);
    for (int i = 1; i <= cfg.queues; ++i) {
        for (int j = 0; j < cfg.servers; ++j) {
            g.set(i, j, bernoulli_draw(rng, cfg.conn_prob));
        }
    }
    return g;
}

std::vector<int> draw_arrivals(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    std::vector<int> z(static_cast<std::size_t>(cfg.queues) + 1, 0);
    if (const auto* b = std::get_if<BernoulliTraffic>(&cfg.traffic)) {
        for (int i = 1; i <= cfg.queues; ++i) {
            z[i] = bernoulli_draw(rng, b->rate) ? 1 : 0;
        }
    } else {
        const auto& batch = std::get<BatchTraffic>(cfg.traffic);
        for (int i = 1; i <= cfg.queues; ++i) {
            z[i] = bernoulli_draw(rng, batch.prob) ? 1 + uniform_index(rng, batch.max_batch) : 0;
        }
    }
    return z;
}

} // namespace

SeedMetrics simulate_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                          const SlotObserver& observer) {
    cfg.validate();
    Policy policy = policy_by_name(cfg.policy, cfg.enumeration_cap);
    std::mt19937_64 policy_rng = make_stream(seed, kPolicyStream);

    std::mt19937_64 env0 = make_stream(seed, kEnvStream, 1);
    SystemState state(std::vector<int>(static_cast<std::size_t>(cfg.queues) + 1, 0),
                      draw_connectivity(cfg, env0), 1);

    double occupancy_sum = 0.0;
    double served_sum = 0.0;
    long counted = 0;

    for (long slot = 1; slot <= cfg.horizon; ++slot) {
        PolicyDecision decision = policy.decide(state, policy_rng);

        std::mt19937_64 env = make_stream(seed, kEnvStream, static_cast<std::uint64_t>(slot) + 1);
        ConnectivityMatrix g_next = draw_connectivity(cfg, env);
        std::vector<int> z = draw_arrivals(cfg, env);
        z[0] = decision.y.y[0];

        const long total = state.total_real_packets();
        const int served = cfg.servers - decision.y.y[0];
        if (slot > cfg.warmup) {
            occupancy_sum += static_cast<double>(total);
            served_sum += served;
            ++counted;
        }
        if (observer) {
            SlotRecord record;
            record.slot = slot;
            record.x_before = state.x;
            record.y = decision.y.y;
            record.q = decision.q.q;
            record.z = z;
            record.kappa = kappa(updated_queues(state, decision.y));
            record.total_occupancy = total;
            record.served = served;
            observer(record);
        }

        state = evolve(state, decision.y, ArrivalVector(std::move(z)), std::move(g_next));
    }

    SeedMetrics metrics;
    metrics.seed = seed;
    metrics.eq = occupancy_sum / static_cast<double>(counted);
    metrics.throughput = served_sum / static_cast<double>(counted);
    return metrics;
}

namespace {

MetricsSummary summarize(std::vector<SeedMetrics> per_seed) {
    MetricsSummary summary;
    summary.per_seed = std::move(per_seed);
    const int n = static_cast<int>(summary.per_seed.size());
    for (const SeedMetrics& m : summary.per_seed) {
        summary.eq += m.eq;
        summary.throughput += m.throughput;
    }
    summary.eq /= n;
    summary.throughput /= n;
    if (n > 1) {
        double ss = 0.0;
        for (const SeedMetrics& m : summary.per_seed) {
            ss += (m.eq - summary.eq) * (m.eq - summary.eq);
        }
        double sd = std::sqrt(ss / (n - 1));
        summary.ci_half_width = t_critical_95(n - 1) * sd / std::sqrt(static_cast<double>(n));
    }
    return summary;
}

template <typename PerSeed>
void run_seeds(const ExperimentConfig& cfg, PerSeed&& per_seed) {
    const int n = static_cast<int>(cfg.seeds.size());
    const int jobs = std::max(1, std::min(cfg.jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) per_seed(i);
        return;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += jobs) per_seed(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : workers) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace

MetricsSummary run(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<SeedMetrics> per_seed(cfg.seeds.size());
    run_seeds(cfg, [&](int i) { per_seed[i] = simulate_seed(cfg, cfg.seeds[i]); });
    return summarize(std::move(per_seed));
}

TracedRun run_traced(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<SeedMetrics> per_seed(cfg.seeds.size());
    std::vector<std::vector<TraceRow>> per_seed_rows(cfg.seeds.size());
    run_seeds(cfg, [&](int i) {
        const std::uint64_t seed = cfg.seeds[i];
        std::vector<TraceRow>& rows = per_seed_rows[i];
        rows.reserve(static_cast<std::size_t>(cfg.horizon));
        per_seed[i] = simulate_seed(cfg, seed, [&](const SlotRecord& r) {
            rows.push_back(TraceRow{seed, r.slot, r.total_occupancy, r.kappa, r.served});
        });
    });
    TracedRun traced;
    traced.metrics = summarize(std::move(per_seed));
    for (std::vector<TraceRow>& rows : per_seed_rows) {
        traced.rows.insert(traced.rows.end(), rows.begin(), rows.end());
    }
    return traced;
}

double stability_bound(int queues, int servers, double conn_prob) {
    if (queues < 1 || servers < 1) {
        throw std::invalid_argument("stability bound: need at least one queue and one server");
    }
    double miss_all = std::pow(1.0 - conn_prob, queues);
    return static_cast<double>(servers) / queues * (1.0 - miss_all);
}

double t_critical_95(int degrees_of_freedom) {
    static constexpr double table[] = {
        0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201, 2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
        2.074, 2.069,  2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (degrees_of_freedom < 1) {
        throw std::invalid_argument("t critical: need positive degrees of freedom");
    }
    if (degrees_of_freedom <= 30) return table[degrees_of_freedom];
    if (degrees_of_freedom <= 40) return 2.021;
    if (degrees_of_freedom <= 60) return 2.000;
    if (degrees_of_freedom <= 120) return 1.980;
    return 1.960;
}

double linear_trend_slope(const std::vector<long>& values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("trend slope: need at least two points");
    double mean_i = (n - 1) / 2.0;
    double mean_v = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (i - mean_i) * (values[i] - mean_v);
        var += (i - mean_i) * (i - mean_i);
    }
    return cov / var;
}

} // namespace mbq
