#include "mbq/presets.hpp"

#include <algorithm>
#include <stdexcept>

#include "mbq/report.hpp"

namespace mbq {

namespace {

const std::vector<std::string> kSweepPolicies{"lcsf-lcq", "mcsf-lcq", "random", "lcsf-scq",
                                              "mcsf-scq"};

ExperimentConfig sweep_base(int queues, int servers, double conn_prob, TrafficModel traffic) {
    ExperimentConfig cfg;
    cfg.queues = queues;
    cfg.servers = servers;
    cfg.conn_prob = conn_prob;
    cfg.traffic = std::move(traffic);
    cfg.horizon = 4000;
    cfg.warmup = 400;
    cfg.seeds = parse_seed_spec("1..5");
    return cfg;
}

std::vector<Preset> build_presets() {
    std::vector<Preset> all;
    all.push_back({"fig3", "EQ vs load, L=16 K=16 p=0.2",
                   sweep_base(16, 16, 0.2, BernoulliTraffic{}),
                   {0.2, 0.4, 0.6, 0.8, 0.9},
                   kSweepPolicies});
    all.push_back({"fig4-k8", "EQ vs load, L=16 K=8 p=0.2",
                   sweep_base(16, 8, 0.2, BernoulliTraffic{}),
                   {0.1, 0.2, 0.3, 0.4, 0.45},
                   kSweepPolicies});
    all.push_back({"fig5-k4", "EQ vs load, L=16 K=4 p=0.2",
                   sweep_base(16, 4, 0.2, BernoulliTraffic{}),
                   {0.06, 0.12, 0.18, 0.22},
                   kSweepPolicies});
    all.push_back({"fig6-p03", "EQ vs load, L=8 K=4 p=0.3",
                   sweep_base(8, 4, 0.3, BernoulliTraffic{}),
                   {0.15, 0.25, 0.35, 0.42},
                   kSweepPolicies});
    all.push_back({"fig6-p05", "EQ vs load, L=8 K=4 p=0.5",
                   sweep_base(8, 4, 0.5, BernoulliTraffic{}),
                   {0.15, 0.25, 0.35, 0.45},
                   kSweepPolicies});
    all.push_back({"fig6-p09", "EQ vs load, L=8 K=4 p=0.9",
                   sweep_base(8, 4, 0.9, BernoulliTraffic{}),
                   {0.15, 0.25, 0.35, 0.45},
                   kSweepPolicies});
    all.push_back({"fig7-p03", "EQ vs load, L=12 K=4 p=0.3",
                   sweep_base(12, 4, 0.3, BernoulliTraffic{}),
                   {0.1, 0.2, 0.28},
                   kSweepPolicies});
    all.push_back({"fig7-p05", "EQ vs load, L=12 K=4 p=0.5",
                   sweep_base(12, 4, 0.5, BernoulliTraffic{}),
                   {0.1, 0.2, 0.3},
                   kSweepPolicies});
    all.push_back({"fig7-p09", "EQ vs load, L=12 K=4 p=0.9",
                   sweep_base(12, 4, 0.9, BernoulliTraffic{}),
                   {0.1, 0.2, 0.3},
                   kSweepPolicies});
    all.push_back({"fig8-batch-u2", "EQ vs load, batch arrivals U=2, L=16 K=16 p=0.5",
                   sweep_base(16, 16, 0.5, BatchTraffic{0.0, 2}),
                   {0.2, 0.4, 0.6, 0.8},
                   kSweepPolicies});
    all.push_back({"fig8-batch-u5", "EQ vs load, batch arrivals U=5, L=16 K=16 p=0.6",
                   sweep_base(16, 16, 0.6, BatchTraffic{0.0, 5}),
                   {0.2, 0.4, 0.6, 0.8},
                   kSweepPolicies});
    all.push_back({"fig8-batch-u10", "EQ vs load, batch arrivals U=10, L=16 K=16 p=0.8",
                   sweep_base(16, 16, 0.8, BatchTraffic{0.0, 10}),
                   {0.2, 0.4, 0.6, 0.8},
                   kSweepPolicies});
    return all;
}

} // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset& preset_by_name(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : presets()) names.push_back(p.name);
    return names;
}

TrafficModel traffic_at_load(const TrafficModel& base, double load) {
    if (std::holds_alternative<BernoulliTraffic>(base)) {
        return BernoulliTraffic{load};
    }
    const auto& batch = std::get<BatchTraffic>(base);
    return BatchTraffic{2.0 * load / (batch.max_batch + 1), batch.max_batch};
}

} // namespace mbq
