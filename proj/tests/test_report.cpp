#include <doctest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "mbq/presets.hpp"
#include "mbq/report.hpp"

using namespace mbq;

TEST_SUITE_BEGIN("report");

TEST_CASE("seed specs parse and canonicalize") {
    CHECK(parse_seed_spec("1..5") == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(parse_seed_spec("7") == std::vector<std::uint64_t>{7});
    CHECK(parse_seed_spec("1,2,9") == std::vector<std::uint64_t>{1, 2, 9});
    CHECK(parse_seed_spec("1..3,8,10..11") ==
          std::vector<std::uint64_t>{1, 2, 3, 8, 10, 11});

    CHECK(canonical_seed_spec({1, 2, 3, 4, 5}) == "1..5");
    CHECK(canonical_seed_spec({1, 2}) == "1,2");
    CHECK(canonical_seed_spec({4}) == "4");
    CHECK(canonical_seed_spec({1, 2, 3, 8, 10, 11}) == "1..3,8,10,11");

    // round trip: parse(canonical(s)) == s for ascending seed lists
    for (const char* spec : {"1..30", "2,4,6", "5", "1..4,7"}) {
        CHECK(canonical_seed_spec(parse_seed_spec(spec)) == spec);
    }

    CHECK_THROWS_AS(parse_seed_spec(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed_spec("5..2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed_spec("1;2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed_spec("a"), std::invalid_argument);
}

TEST_CASE("config serialization round-trips") {
    ExperimentConfig cfg;
    cfg.queues = 16;
    cfg.servers = 8;
    cfg.conn_prob = 0.2;
    cfg.traffic = BatchTraffic{0.25, 5};
    cfg.horizon = 20000;
    cfg.warmup = 2000;
    cfg.seeds = parse_seed_spec("1..30");
    cfg.policy = "mcsf-scq";
    cfg.jobs = 3;

    nlohmann::ordered_json j = config_json(cfg);
    ExperimentConfig back = config_from_json(nlohmann::json::parse(j.dump()));
    CHECK(config_json(back) == j);
    CHECK(back.seeds == cfg.seeds);
    CHECK(std::get<BatchTraffic>(back.traffic).max_batch == 5);

    cfg.traffic = BernoulliTraffic{0.45};
    nlohmann::ordered_json j2 = config_json(cfg);
    CHECK(config_json(config_from_json(nlohmann::json::parse(j2.dump()))) == j2);
}

TEST_CASE("double formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 0.9718525023289344, 123456.789, 0.0, 2e-17}) {
        double parsed = std::stod(format_double(v));
        CHECK(parsed == v);
    }
}

TEST_CASE("metrics json carries the schema version and per-seed data") {
    ExperimentConfig cfg;
    cfg.queues = 2;
    cfg.servers = 1;
    cfg.conn_prob = 0.5;
    cfg.traffic = BernoulliTraffic{0.1};
    cfg.horizon = 100;
    cfg.warmup = 10;
    cfg.seeds = {1, 2};
    cfg.policy = "lcsf-lcq";
    MetricsSummary m = run(cfg);
    nlohmann::ordered_json j = metrics_json(cfg, m);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["per_seed"].size() == 2);
    CHECK(j["config"]["seeds"] == "1,2");
    CHECK(j.contains("EQ"));
}

TEST_CASE("trace csv has the documented schema") {
    std::vector<TraceRow> rows{{1, 1, 0, 0, 0}, {1, 2, 3, 5, 1}};
    std::string csv = trace_csv(rows);
    CHECK(csv == "slot,seed,total_occupancy,kappa,served\n1,1,0,0,0\n2,1,3,5,1\n");
    CHECK(sweep_csv_header() == "policy,L,K,p,load,seed,EQ,ci_half_width,throughput\n");
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("identical manifests reproduce identical hashes") {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "mbq_manifest_test";
    fs::remove_all(base);

    auto emit_round = [&](const fs::path& dir) {
        RunManifest manifest("run", nlohmann::ordered_json{{"k", 1}});
        manifest.emit(dir, "metrics.json", "{\"EQ\": 1.5}\n");
        manifest.emit(dir, "trace.csv", "slot,seed\n1,1\n");
        manifest.finalize(dir);
        std::ifstream in(dir / "manifest.json");
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    std::string first = emit_round(base / "a");
    std::string second = emit_round(base / "b");
    CHECK(first == second);
    CHECK(first.find("fnv1a64") != std::string::npos);

    // a changed artifact changes its recorded hash
    RunManifest manifest("run", nlohmann::ordered_json{{"k", 1}});
    manifest.emit(base / "c", "metrics.json", "{\"EQ\": 2.5}\n");
    manifest.finalize(base / "c");
    std::ifstream in(base / "c" / "manifest.json");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() != first);
    fs::remove_all(base);
}

TEST_CASE("presets resolve and validate") {
    CHECK_FALSE(preset_names().empty());
    for (const std::string& name : preset_names()) {
        const Preset& p = preset_by_name(name);
        CHECK_FALSE(p.loads.empty());
        CHECK_FALSE(p.policies.empty());
        CHECK_FALSE(p.mirrors.empty());
        for (double load : p.loads) {
            ExperimentConfig cfg = p.base;
            cfg.policy = p.policies.front();
            cfg.traffic = traffic_at_load(p.base.traffic, load);
            cfg.validate();
            CHECK(offered_load_per_queue(cfg.traffic) == doctest::Approx(load));
        }
    }
    CHECK_THROWS_AS(preset_by_name("fig99"), std::invalid_argument);
    CHECK(preset_by_name("fig3").base.queues == 16);
}

TEST_SUITE_END();
