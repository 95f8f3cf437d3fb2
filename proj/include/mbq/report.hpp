#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mbq/order.hpp"
#include "mbq/sim.hpp"

namespace mbq {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal form that round-trips; keeps emitted files byte-stable.
std::string format_double(double v);

// Seed lists are written as "1..30" / "1,2,9" / "1..4,7" specs.
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec);
std::string canonical_seed_spec(const std::vector<std::uint64_t>& seeds);

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::ordered_json metrics_json(const ExperimentConfig& cfg, const MetricsSummary& metrics);
nlohmann::ordered_json dominance_json(const ExperimentConfig& cfg, const DominanceReport& report);

// trace.csv schema: slot,seed,total_occupancy,kappa,served
std::string trace_csv(const std::vector<TraceRow>& rows);

// sweep.csv schema: policy,L,K,p,load,seed,EQ,ci_half_width,throughput
// One row per (policy, load); the seed column carries the canonical seed
// spec of the aggregated runs.
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& policy, int queues, int servers, double conn_prob,
                          double load, const std::string& seed_spec, const MetricsSummary& m);

std::uint64_t fnv1a64(std::string_view bytes);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Manifest of one CLI invocation: resolved configuration plus every emitted
// file with its content hash.
class RunManifest {
public:
    RunManifest(std::string command, nlohmann::ordered_json resolved);

    // Writes `contents` under dir/name and records its hash.
    void emit(const std::filesystem::path& dir, const std::string& name,
              const std::string& contents);
    // Writes dir/manifest.json (which lists every previously emitted file).
    void finalize(const std::filesystem::path& dir) const;

private:
    std::string command_;
    nlohmann::ordered_json resolved_;
    std::vector<std::pair<std::string, std::uint64_t>> files_;
};

} // namespace mbq
