#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "mbq/imbalance.hpp"
#include "mbq/order.hpp"
#include "test_util.hpp"

using namespace mbq;

namespace {

// Independent closure of the move relation, depth-first with explicit sets.
std::set<std::vector<int>> oracle_closure(const std::vector<int>& from) {
    std::set<std::vector<int>> seen{from};
    std::vector<std::vector<int>> stack{from};
    const int d = static_cast<int>(from.size());
    while (!stack.empty()) {
        std::vector<int> v = stack.back();
        stack.pop_back();
        auto add = [&](std::vector<int> w) {
            if (seen.insert(w).second) stack.push_back(std::move(w));
        };
        for (int i = 0; i < d; ++i) {
            if (v[i] >= 1) {
                auto w = v;
                --w[i];
                add(w);
            }
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                if (j > i) {
                    auto w = v;
                    std::swap(w[i], w[j]);
                    add(w);
                }
                if (i >= 1 && v[i] >= v[j] + 1) {
                    auto w = v;
                    --w[i];
                    ++w[j];
                    add(w);
                }
            }
        }
    }
    return seen;
}

std::vector<std::vector<int>> small_grid(int dim, int max_entry) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(dim, 0);
    while (true) {
        out.push_back(v);
        int i = 0;
        while (i < dim && v[i] == max_entry) v[i++] = 0;
        if (i == dim) break;
        ++v[i];
    }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("order");

TEST_CASE("published reachability examples") {
    CHECK(preferred_leq({3, 4, 5}, {4, 5, 3}) == Ternary::True);  // two swaps
    CHECK(preferred_leq({0, 4, 3}, {0, 5, 2}) == Ternary::True);  // one balancing move
    CHECK(preferred_leq({5, 0}, {4, 1}) == Ternary::False);       // only unbalancing reaches it
}

TEST_CASE("reflexivity and the node budget") {
    CHECK(preferred_leq({2, 1}, {2, 1}) == Ternary::True);
    SearchCaps tiny;
    tiny.max_nodes = 2;
    CHECK(preferred_leq({0, 0, 0, 0}, {3, 3, 3, 3}, tiny) == Ternary::Unknown);
}

TEST_CASE("agreement with the closure oracle on a small grid") {
    for (const auto& from : small_grid(3, 2)) {
        std::set<std::vector<int>> closure = oracle_closure(from);
        for (const auto& target : small_grid(3, 2)) {
            Ternary got = preferred_leq(target, from);
            REQUIRE(got != Ternary::Unknown);
            CHECK((got == Ternary::True) == (closure.count(target) > 0));
        }
    }
}

TEST_CASE("transitivity on the explored grid") {
    auto grid = small_grid(2, 2);
    std::map<std::pair<std::vector<int>, std::vector<int>>, bool> leq;
    for (const auto& a : grid) {
        for (const auto& b : grid) {
            leq[{a, b}] = preferred_leq(a, b) == Ternary::True;
        }
    }
    for (const auto& a : grid) {
        for (const auto& b : grid) {
            if (!leq[{a, b}]) continue;
            for (const auto& c : grid) {
                if (leq[{b, c}]) CHECK(leq[{a, c}]);
            }
        }
    }
}

TEST_CASE("mutual reachability happens exactly for rearrangements") {
    auto grid = small_grid(3, 3);
    for (const auto& a : grid) {
        for (const auto& b : grid) {
            bool ab = preferred_leq(a, b) == Ternary::True;
            bool ba = preferred_leq(b, a) == Ternary::True;
            std::vector<int> sa = a, sb = b;
            std::sort(sa.begin(), sa.end());
            std::sort(sb.begin(), sb.end());
            CHECK((ab && ba) == (sa == sb));
        }
    }
}

TEST_CASE("reachability never raises the total or the maximum") {
    auto grid = small_grid(3, 3);
    for (const auto& from : grid) {
        for (const auto& target : oracle_closure(from)) {
            CHECK(std::accumulate(target.begin(), target.end(), 0) <=
                  std::accumulate(from.begin(), from.end(), 0));
            CHECK(*std::max_element(target.begin(), target.end()) <=
                  *std::max_element(from.begin(), from.end()));
        }
    }
}

TEST_CASE("cost functions are monotone along the order") {
    // costs read the real queues only, so compare vectors from the model's
    // domain: slot 0 (the dummy) empty on both sides. Chains may park mass
    // in slot 0 in between; endpoints with an empty dummy still order.
    CostFunction total = total_occupancy_cost();
    CostFunction longest = max_queue_cost();
    auto grid = small_grid(3, 3);
    for (const auto& from : grid) {
        if (from[0] != 0) continue;
        for (const auto& target : oracle_closure(from)) {
            if (target[0] != 0) continue;
            CHECK(total.value(target) <= total.value(from));
            CHECK(longest.value(target) <= longest.value(from));
        }
    }
}

TEST_CASE("balancing moves among real queues never raise kappa") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 800; ++trial) {
        int L = 2 + static_cast<int>(rng() % 4);
        std::vector<int> v(L + 1, 0);
        for (int i = 1; i <= L; ++i) v[i] = static_cast<int>(rng() % 6);
        int i = 1 + static_cast<int>(rng() % L);
        int j = 1 + static_cast<int>(rng() % L);
        if (i == j || v[i] < v[j] + 1) continue;
        std::vector<int> moved = v;
        --moved[i];
        ++moved[j];
        CHECK(kappa(UpdatedQueueVector(moved)) <= kappa(UpdatedQueueVector(v)));
    }
}

TEST_CASE("a policy compared with itself yields identical CDFs") {
    ExperimentConfig cfg;
    cfg.queues = 2;
    cfg.servers = 1;
    cfg.conn_prob = 0.5;
    cfg.traffic = BernoulliTraffic{0.2};
    cfg.horizon = 200;
    cfg.warmup = 0;
    cfg.seeds.resize(40);
    std::iota(cfg.seeds.begin(), cfg.seeds.end(), 1);
    cfg.policy = "lcsf-lcq";

    DominanceReport report =
        empirical_dominance(cfg, "lcsf-lcq", "lcsf-lcq", total_occupancy_cost(), 10);
    CHECK(report.identical);
    CHECK(report.fraction_dominating() == 1.0);
    CHECK(report.points_total > 0);
}

TEST_CASE("the optimum dominates the randomized policy on a small instance") {
    ExperimentConfig cfg;
    cfg.queues = 2;
    cfg.servers = 1;
    cfg.conn_prob = 0.4;
    cfg.traffic = BernoulliTraffic{0.15};
    cfg.horizon = 300;
    cfg.warmup = 0;
    cfg.seeds.resize(120);
    std::iota(cfg.seeds.begin(), cfg.seeds.end(), 1);
    cfg.policy = "mb";

    // one seed's CDF mass of slack absorbs single-sample flips
    DominanceReport report = empirical_dominance(cfg, "mb", "random", total_occupancy_cost(), 15,
                                                 1.0 / cfg.seeds.size());
    CHECK_FALSE(report.identical);
    CHECK(report.fraction_dominating() >= 0.95);
    // same environment draws for both policies: never are both CDFs shifted
    // the wrong way at every point of a slot
    CHECK(report.points_total >= report.curves.size());
}

TEST_CASE("degenerate dominance configurations are rejected") {
    ExperimentConfig cfg;
    cfg.queues = 2;
    cfg.servers = 1;
    cfg.horizon = 10;
    cfg.warmup = 0;
    cfg.policy = "mb";
    CHECK_THROWS_AS(empirical_dominance(cfg, "mb", "random", total_occupancy_cost(), 5),
                    std::invalid_argument); // no seeds
    cfg.seeds = {1};
    CHECK_THROWS_AS(empirical_dominance(cfg, "mb", "random", total_occupancy_cost(), 0),
                    std::invalid_argument); // no samples
}

TEST_SUITE_END();
