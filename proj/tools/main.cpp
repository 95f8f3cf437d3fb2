#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbq/checks.hpp"
#include "mbq/order.hpp"
#include "mbq/policies.hpp"
#include "mbq/presets.hpp"
#include "mbq/report.hpp"
#include "mbq/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadFlags = 2;
constexpr int kExitCapRefusal = 3;
constexpr int kExitPropertyFailure = 4;

void print_error(const std::string& type, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

struct EnvFlags {
    int queues = 0;
    int servers = 0;
    double conn_prob = -1.0;
    double arrival_rate = -1.0;
    double batch_prob = -1.0;
    int batch_max = 0;
    long horizon = 0;
    long warmup = -1;
    std::string seeds;
    int jobs = 0;
    std::uint64_t cap = 0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--queues", queues, "number of real queues L");
        cmd.add_option("--servers", servers, "number of servers K");
        cmd.add_option("--conn-prob", conn_prob, "queue-server connectivity probability p");
        cmd.add_option("--arrival-rate", arrival_rate, "Bernoulli arrival probability per queue");
        cmd.add_option("--batch-prob", batch_prob, "batch arrival probability per queue");
        cmd.add_option("--batch-max", batch_max, "maximum batch size U (batch size uniform on 1..U)");
        cmd.add_option("--horizon", horizon, "slots per run");
        cmd.add_option("--warmup", warmup, "slots discarded before metrics (default horizon/10)");
        cmd.add_option("--seeds", seeds, "seed list, e.g. 1..30 or 1,2,9");
        cmd.add_option("--jobs", jobs, "worker threads across seeds");
        cmd.add_option("--cap", cap, "enumeration cap for brute-force policies");
    }

    // Overlay these flags onto a base configuration.
    void apply(mbq::ExperimentConfig& cfg) const {
        if (queues > 0) cfg.queues = queues;
        if (servers > 0) cfg.servers = servers;
        if (conn_prob >= 0.0) cfg.conn_prob = conn_prob;
        if (arrival_rate >= 0.0 && batch_prob >= 0.0) {
            throw std::invalid_argument("choose either --arrival-rate or --batch-prob");
        }
        if (arrival_rate >= 0.0) cfg.traffic = mbq::BernoulliTraffic{arrival_rate};
        if (batch_prob >= 0.0) {
            int u = batch_max > 0 ? batch_max : 1;
            cfg.traffic = mbq::BatchTraffic{batch_prob, u};
        } else if (batch_max > 0) {
            if (auto* b = std::get_if<mbq::BatchTraffic>(&cfg.traffic)) {
                b->max_batch = batch_max;
            } else {
                throw std::invalid_argument("--batch-max requires batch traffic");
            }
        }
        if (horizon > 0) cfg.horizon = horizon;
        if (warmup >= 0) {
            cfg.warmup = warmup;
        } else if (horizon > 0) {
            cfg.warmup = horizon / 10;
        }
        if (!seeds.empty()) cfg.seeds = mbq::parse_seed_spec(seeds);
        if (jobs > 0) cfg.jobs = jobs;
        if (cap > 0) cfg.enumeration_cap = cap;
    }
};

int default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_run(const EnvFlags& env, const std::string& preset_name, const std::string& policy,
            const std::string& loads_csv, const std::string& out_dir, bool trace) {
    namespace fs = std::filesystem;
    if (!preset_name.empty()) {
        const mbq::Preset& preset = mbq::preset_by_name(preset_name);
        mbq::ExperimentConfig base = preset.base;
        base.jobs = default_jobs();
        env.apply(base);
        std::vector<double> loads = preset.loads;
        if (!loads_csv.empty()) {
            loads.clear();
            for (const std::string& piece : CLI::detail::split(loads_csv, ',')) {
                loads.push_back(std::stod(piece));
            }
        }
        std::vector<std::string> policies =
            policy.empty() ? preset.policies : std::vector<std::string>{policy};

        nlohmann::ordered_json resolved;
        resolved["preset"] = preset.name;
        resolved["mirrors"] = preset.mirrors;
        resolved["loads"] = loads;
        resolved["policies"] = policies;
        resolved["base"] = mbq::config_json([&] {
            mbq::ExperimentConfig c = base;
            c.policy = policies.front();
            c.traffic = mbq::traffic_at_load(base.traffic, loads.front());
            return c;
        }());
        mbq::RunManifest manifest("run", resolved);

        std::string csv = mbq::sweep_csv_header();
        for (const std::string& pol : policies) {
            for (double load : loads) {
                mbq::ExperimentConfig cfg = base;
                cfg.policy = pol;
                cfg.traffic = mbq::traffic_at_load(base.traffic, load);
                mbq::MetricsSummary metrics = mbq::run(cfg);
                csv += mbq::sweep_csv_row(pol, cfg.queues, cfg.servers, cfg.conn_prob, load,
                                          mbq::canonical_seed_spec(cfg.seeds), metrics);
            }
        }
        manifest.emit(out_dir, "sweep.csv", csv);
        manifest.finalize(out_dir);
        std::cout << "wrote " << (fs::path(out_dir) / "sweep.csv").string() << "\n";
        return kExitOk;
    }

    mbq::ExperimentConfig cfg;
    cfg.jobs = default_jobs();
    cfg.warmup = -1; // force explicit or derived warmup below
    env.apply(cfg);
    if (cfg.warmup < 0) cfg.warmup = cfg.horizon / 10;
    cfg.policy = policy;
    cfg.validate();

    mbq::RunManifest manifest("run", mbq::config_json(cfg));
    if (trace) {
        mbq::TracedRun traced = mbq::run_traced(cfg);
        manifest.emit(out_dir, "metrics.json", mbq::metrics_json(cfg, traced.metrics).dump(2) + "\n");
        manifest.emit(out_dir, "trace.csv", mbq::trace_csv(traced.rows));
    } else {
        mbq::MetricsSummary metrics = mbq::run(cfg);
        manifest.emit(out_dir, "metrics.json", mbq::metrics_json(cfg, metrics).dump(2) + "\n");
    }
    manifest.finalize(out_dir);
    std::cout << "wrote " << (fs::path(out_dir) / "metrics.json").string() << "\n";
    return kExitOk;
}

int cmd_compare(const EnvFlags& env, const std::string& policy_a, const std::string& policy_b,
                const std::string& cost_name, int samples, double tolerance,
                double assert_fraction, const std::string& out_dir) {
    mbq::ExperimentConfig cfg;
    cfg.jobs = default_jobs();
    cfg.warmup = -1;
    env.apply(cfg);
    if (cfg.warmup < 0) cfg.warmup = cfg.horizon / 10;
    cfg.policy = policy_a; // validated per run inside empirical_dominance

    mbq::CostFunction cost =
        cost_name == "max" ? mbq::max_queue_cost() : mbq::total_occupancy_cost();
    mbq::DominanceReport report =
        mbq::empirical_dominance(cfg, policy_a, policy_b, cost, samples, tolerance);

    mbq::RunManifest manifest("compare", mbq::config_json(cfg));
    manifest.emit(out_dir, "dominance.json", mbq::dominance_json(cfg, report).dump(2) + "\n");
    manifest.finalize(out_dir);

    std::printf("%s vs %s: %zu/%zu points weakly dominating (%.4f)\n", policy_a.c_str(),
                policy_b.c_str(), report.points_dominating, report.points_total,
                report.fraction_dominating());
    if (assert_fraction >= 0.0 && report.fraction_dominating() < assert_fraction) {
        print_error("dominance-assert",
                    "fraction " + mbq::format_double(report.fraction_dominating()) +
                        " below threshold " + mbq::format_double(assert_fraction));
        return kExitPropertyFailure;
    }
    return kExitOk;
}

int cmd_verify(std::vector<std::string> cases, int max_queues, int max_servers, int max_entry) {
    using Clock = std::chrono::steady_clock;
    if (cases.empty()) cases.push_back("all");
    std::vector<mbq::CheckResult> results;
    auto want = [&](const std::string& name) {
        for (const std::string& c : cases) {
            if (c == "all" || c == name) return true;
        }
        return false;
    };
    auto add = [&](const char* name, auto&& fn) {
        if (!want(name)) return;
        auto start = Clock::now();
        mbq::CheckResult r = fn();
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("%-22s %s  cases=%-8llu %.2fs  %s\n", r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", static_cast<unsigned long long>(r.cases), secs,
                    r.detail.c_str());
        results.push_back(std::move(r));
    };

    add("lemma5", [] { return mbq::check_lemma5_counterexample(); });
    add("remark1", [] { return mbq::check_remark1_instance(); });
    add("kappa-delta", [] { return mbq::check_kappa_delta_identity(); });
    add("min-kappa-deltas",
        [&] { return mbq::check_min_kappa_deltas(max_queues, max_servers, max_entry); });
    add("balancing-selection",
        [&] { return mbq::check_balancing_selection(max_queues, max_servers, max_entry); });
    add("conversion", [&] { return mbq::check_conversion(max_queues, max_servers, max_entry); });
    add("lex-optimality",
        [&] { return mbq::check_lex_optimality(max_queues, max_servers, max_entry); });
    add("heuristic-brackets",
        [&] { return mbq::check_heuristic_brackets(max_queues, max_servers, max_entry); });

    if (results.empty()) {
        print_error("bad-case", "no such verification case");
        return kExitBadFlags;
    }
    for (const mbq::CheckResult& r : results) {
        if (!r.passed) {
            print_error("property-failure", r.name + ": " + r.detail);
            return kExitPropertyFailure;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and policy library for scheduling identical servers with random "
                 "connectivity across parallel queues"};
    app.require_subcommand(1);

    EnvFlags run_env;
    std::string run_preset, run_policy, run_loads, run_out = "out";
    bool run_trace = false;
    CLI::App* run = app.add_subcommand("run", "simulate one configuration or a preset sweep");
    run_env.add_to(*run);
    run->add_option("--preset", run_preset, "figure preset: " + CLI::detail::join(mbq::preset_names()));
    run->add_option("--policy", run_policy,
                    "policy: " + CLI::detail::join(mbq::policy_names()));
    run->add_option("--loads", run_loads, "override preset loads, e.g. 0.3,0.5");
    run->add_option("--out", run_out, "output directory");
    run->add_flag("--trace", run_trace, "also write per-slot trace.csv");

    EnvFlags cmp_env;
    std::string cmp_a, cmp_b, cmp_cost = "total", cmp_out = "out";
    int cmp_samples = 20;
    double cmp_tolerance = 0.0, cmp_assert = -1.0;
    CLI::App* cmp = app.add_subcommand("compare", "empirical stochastic-dominance comparison");
    cmp->add_option("policy_a", cmp_a, "candidate dominating policy")->required();
    cmp->add_option("policy_b", cmp_b, "policy compared against")->required();
    cmp_env.add_to(*cmp);
    cmp->add_option("--cost", cmp_cost, "cost function: total or max")
        ->check(CLI::IsMember({"total", "max"}));
    cmp->add_option("--samples", cmp_samples, "number of sampled slots");
    cmp->add_option("--tolerance", cmp_tolerance, "CDF slack at each grid point");
    cmp->add_option("--assert", cmp_assert, "exit nonzero unless this fraction dominates");
    cmp->add_option("--out", cmp_out, "output directory");

    std::vector<std::string> verify_cases;
    int verify_queues = 3, verify_servers = 3, verify_entry = 3;
    CLI::App* verify = app.add_subcommand("verify", "run the exhaustive property suites");
    verify->add_option("--case", verify_cases,
                       "lemma5, remark1, kappa-delta, min-kappa-deltas, balancing-selection, "
                       "conversion, lex-optimality, heuristic-brackets, all");
    verify->add_option("--max-queues", verify_queues, "state grid: queue count bound");
    verify->add_option("--max-servers", verify_servers, "state grid: server count bound");
    verify->add_option("--max-entry", verify_entry, "state grid: queue length bound");

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return cmd_run(run_env, run_preset, run_policy, run_loads, run_out, run_trace);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_env, cmp_a, cmp_b, cmp_cost, cmp_samples, cmp_tolerance,
                               cmp_assert, cmp_out);
        }
        return cmd_verify(verify_cases, verify_queues, verify_servers, verify_entry);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) {
            print_error("bad-flags", e.what());
            return kExitBadFlags;
        }
        return app.exit(e); // --help and friends
    } catch (const mbq::EnumerationCapError& e) {
        print_error("enumeration-cap", e.what());
        return kExitCapRefusal;
    } catch (const std::invalid_argument& e) {
        print_error("bad-flags", e.what());
        return kExitBadFlags;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
