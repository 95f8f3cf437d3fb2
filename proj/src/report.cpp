#include "mbq/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mbq {

std::string format_double(double v) {
    char buf[64];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        double parsed = 0.0;
        std::sscanf(buf, "%lf", &parsed);
        if (parsed == v) break;
    }
    return buf;
}

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    auto read_number = [&]() -> std::uint64_t {
        std::size_t start = pos;
        while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("seed spec: expected a number in '" + spec + "'");
        return std::stoull(spec.substr(start, pos - start));
    };
    while (true) {
        std::uint64_t first = read_number();
        if (pos + 1 < spec.size() && spec[pos] == '.' && spec[pos + 1] == '.') {
            pos += 2;
            std::uint64_t last = read_number();
            if (last < first) throw std::invalid_argument("seed spec: descending range in '" + spec + "'");
            for (std::uint64_t v = first; v <= last; ++v) seeds.push_back(v);
        } else {
            seeds.push_back(first);
        }
        if (pos == spec.size()) break;
        if (spec[pos] != ',') throw std::invalid_argument("seed spec: unexpected '" +
                                                          std::string(1, spec[pos]) + "' in '" + spec + "'");
        ++pos;
    }
    if (seeds.empty()) throw std::invalid_argument("seed spec: empty");
    return seeds;
}

std::string canonical_seed_spec(const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("seed spec: empty seed list");
    std::string out;
    std::size_t i = 0;
    while (i < seeds.size()) {
        std::size_t j = i;
        while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(seeds[i]);
        if (j > i + 1) {
            out += "..";
            out += std::to_string(seeds[j]);
        } else if (j == i + 1) {
            out += ',';
            out += std::to_string(seeds[j]);
        }
        i = j + 1;
    }
    return out;
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["queues"] = cfg.queues;
    j["servers"] = cfg.servers;
    j["conn_prob"] = cfg.conn_prob;
    if (const auto* b = std::get_if<BernoulliTraffic>(&cfg.traffic)) {
        j["traffic"] = {{"type", "bernoulli"}, {"rate", b->rate}};
    } else {
        const auto& batch = std::get<BatchTraffic>(cfg.traffic);
        j["traffic"] = {{"type", "batch"}, {"prob", batch.prob}, {"max_batch", batch.max_batch}};
    }
    j["horizon"] = cfg.horizon;
    j["warmup"] = cfg.warmup;
    j["seeds"] = canonical_seed_spec(cfg.seeds);
    j["policy"] = cfg.policy;
    j["enumeration_cap"] = cfg.enumeration_cap;
    j["jobs"] = cfg.jobs;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.queues = j.at("queues").get<int>();
    cfg.servers = j.at("servers").get<int>();
    cfg.conn_prob = j.at("conn_prob").get<double>();
    const auto& traffic = j.at("traffic");
    std::string type = traffic.at("type").get<std::string>();
    if (type == "bernoulli") {
        cfg.traffic = BernoulliTraffic{traffic.at("rate").get<double>()};
    } else if (type == "batch") {
        cfg.traffic = BatchTraffic{traffic.at("prob").get<double>(),
                                   traffic.at("max_batch").get<int>()};
    } else {
        throw std::invalid_argument("config: unknown traffic type '" + type + "'");
    }
    cfg.horizon = j.at("horizon").get<long>();
    cfg.warmup = j.at("warmup").get<long>();
    cfg.seeds = parse_seed_spec(j.at("seeds").get<std::string>());
    cfg.policy = j.at("policy").get<std::string>();
    if (j.contains("enumeration_cap")) cfg.enumeration_cap = j["enumeration_cap"].get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    return cfg;
}

nlohmann::ordered_json metrics_json(const ExperimentConfig& cfg, const MetricsSummary& metrics) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_json(cfg);
    j["load_per_queue"] = offered_load_per_queue(cfg.traffic);
    j["EQ"] = metrics.eq;
    j["ci_half_width"] = metrics.ci_half_width;
    j["throughput"] = metrics.throughput;
    nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
    for (const SeedMetrics& m : metrics.per_seed) {
        per_seed.push_back({{"seed", m.seed}, {"EQ", m.eq}, {"throughput", m.throughput}});
    }
    j["per_seed"] = per_seed;
    return j;
}

nlohmann::ordered_json dominance_json(const ExperimentConfig& cfg, const DominanceReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    nlohmann::ordered_json env = config_json(cfg);
    env.erase("policy");
    j["config"] = env;
    j["policy_a"] = report.policy_a;
    j["policy_b"] = report.policy_b;
    j["cost"] = report.cost;
    j["tolerance"] = report.tolerance;
    j["direction"] = "cdf_a >= cdf_b - tolerance means policy_a weakly dominates";
    j["sample_slots"] = report.sample_slots;
    j["points_total"] = report.points_total;
    j["points_dominating"] = report.points_dominating;
    j["fraction_dominating"] = report.fraction_dominating();
    j["identical"] = report.identical;
    nlohmann::ordered_json curves = nlohmann::ordered_json::array();
    for (const DominanceCurve& c : report.curves) {
        curves.push_back({{"slot", c.slot},
                          {"values", c.values},
                          {"cdf_a", c.cdf_a},
                          {"cdf_b", c.cdf_b}});
    }
    j["curves"] = curves;
    return j;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::string out = "slot,seed,total_occupancy,kappa,served\n";
    char buf[128];
    for (const TraceRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%ld,%" PRIu64 ",%ld,%" PRId64 ",%d\n", r.slot, r.seed,
                      r.total_occupancy, r.kappa, r.served);
        out += buf;
    }
    return out;
}

std::string sweep_csv_header() {
    return "policy,L,K,p,load,seed,EQ,ci_half_width,throughput\n";
}

std::string sweep_csv_row(const std::string& policy, int queues, int servers, double conn_prob,
                          double load, const std::string& seed_spec, const MetricsSummary& m) {
    std::string out = policy;
    out += ',' + std::to_string(queues);
    out += ',' + std::to_string(servers);
    out += ',' + format_double(conn_prob);
    out += ',' + format_double(load);
    out += ',' + seed_spec;
    out += ',' + format_double(m.eq);
    out += ',' + format_double(m.ci_half_width);
    out += ',' + format_double(m.throughput);
    out += '\n';
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

RunManifest::RunManifest(std::string command, nlohmann::ordered_json resolved)
    : command_(std::move(command)), resolved_(std::move(resolved)) {}

void RunManifest::emit(const std::filesystem::path& dir, const std::string& name,
                       const std::string& contents) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / name, contents);
    files_.emplace_back(name, fnv1a64(contents));
}

void RunManifest::finalize(const std::filesystem::path& dir) const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command_;
    j["resolved"] = resolved_;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    char hash[32];
    for (const auto& [name, value] : files_) {
        std::snprintf(hash, sizeof(hash), "%016" PRIx64, value);
        files.push_back({{"path", name}, {"fnv1a64", hash}});
    }
    j["files"] = files;
    std::filesystem::create_directories(dir);
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

} // namespace mbq
