#include <doctest.h>

#include <numeric>

#include "mbq/checks.hpp"
#include "mbq/core.hpp"
#include "test_util.hpp"

using namespace mbq;

TEST_SUITE_BEGIN("core");

TEST_CASE("withdrawal counts servers per queue") {
    // the seven-server allocation from the counterexample instance
    SchedulingControl q({1, 2, 3, 1, 2, 3, 4}, 4);
    CHECK(withdrawal_from_schedule(q).y == std::vector<int>{0, 2, 2, 2, 1});

    SchedulingControl idle({0, 0, 0}, 4);
    CHECK(withdrawal_from_schedule(idle).y == std::vector<int>{3, 0, 0, 0, 0});

    SchedulingControl both({2, 2}, 2);
    CHECK(withdrawal_from_schedule(both).y == std::vector<int>{0, 0, 2});
}

TEST_CASE("schedule feasibility checks connectivity and queue caps") {
    ConnectivityMatrix g(2, 2);
    g.set(2, 0, true);
    g.set(2, 1, true);
    SystemState s({0, 1, 2}, g);

    CHECK_FALSE(is_feasible_schedule(s, SchedulingControl({1, 2}, 2))); // queue 1 disconnected
    CHECK(is_feasible_schedule(s, SchedulingControl({2, 2}, 2)));
    CHECK(is_feasible_schedule(s, SchedulingControl({0, 2}, 2)));

    SystemState one_packet({0, 0, 1}, g);
    CHECK_FALSE(is_feasible_schedule(one_packet, SchedulingControl({2, 2}, 2)));

    CHECK(is_feasible_schedule(lemma5_state(), SchedulingControl({1, 2, 3, 1, 2, 3, 4}, 4)));
}

TEST_CASE("withdrawal feasibility is decided by exact search") {
    // Necessary-condition failure: no server reaches queue 2.
    ConnectivityMatrix g(2, 2);
    g.set(1, 0, true);
    g.set(1, 1, true);
    SystemState s({0, 1, 1}, g);
    CHECK_FALSE(is_feasible_withdrawal(s, WithdrawalVector({0, 1, 1})));

    // Conditions (per-queue caps, total K) hold but no implementation exists:
    // server 1 reaches both queues, server 2 reaches neither.
    ConnectivityMatrix g2(2, 2);
    g2.set(1, 0, true);
    g2.set(2, 0, true);
    SystemState hall({0, 1, 1}, g2);
    WithdrawalVector both({0, 1, 1});
    CHECK(satisfies_withdrawal_conditions(hall, both));
    CHECK_FALSE(is_feasible_withdrawal(hall, both));
    bool oracle_found = false;
    for (const auto& a : oracle::all_assignments(2, 2)) {
        if (oracle::assignment_feasible(hall, a)) {
            auto y = withdrawal_from_schedule(SchedulingControl(a, 2));
            if (y == both) oracle_found = true;
        }
    }
    CHECK_FALSE(oracle_found);
}

TEST_CASE("feasible withdrawals come with a feasible witness") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        SystemState s = oracle::random_state(rng);
        SchedulingControl q = oracle::random_control(rng, s);
        WithdrawalVector y = withdrawal_from_schedule(q);
        CHECK(satisfies_withdrawal_conditions(s, y));
        auto witness = find_schedule_for(s, y);
        REQUIRE(witness.has_value());
        CHECK(is_feasible_schedule(s, *witness));
        CHECK(withdrawal_from_schedule(*witness) == y);
    }
}

TEST_CASE("exact search agrees with brute-force enumeration on small states") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        SystemState s = oracle::random_state(rng, 3, 3, 2);
        std::vector<std::vector<int>> feasible_by_oracle;
        for (const auto& a : oracle::all_assignments(s.num_queues(), s.num_servers())) {
            if (!oracle::assignment_feasible(s, a)) continue;
            feasible_by_oracle.push_back(
                withdrawal_from_schedule(SchedulingControl(a, s.num_queues())).y);
        }
        // every vector of per-queue counts reachable from an assignment
        for (const auto& a : oracle::all_assignments(s.num_queues(), s.num_servers())) {
            std::vector<int> y(s.x.size(), 0);
            for (int j = 0; j < static_cast<int>(a.size()); ++j) ++y[a[j]];
            bool expected = std::find(feasible_by_oracle.begin(), feasible_by_oracle.end(), y) !=
                            feasible_by_oracle.end();
            CHECK(is_feasible_withdrawal(s, WithdrawalVector(y)) == expected);
        }
    }
}

TEST_CASE("evolution follows x' = x - y + z") {
    ConnectivityMatrix g = ConnectivityMatrix::fully_connected(2, 2);
    SystemState s({0, 3, 1}, g);
    SystemState next = evolve(s, WithdrawalVector({1, 1, 0}), ArrivalVector({1, 0, 2}), g);
    CHECK(next.x == std::vector<int>{0, 2, 3});
    CHECK(next.slot == 2);

    // full idling leaves the queues untouched
    SystemState idle = evolve(s, WithdrawalVector({2, 0, 0}), ArrivalVector({2, 0, 0}), g);
    CHECK(idle.x == s.x);

    SystemState l5 = lemma5_state();
    SystemState after =
        evolve(l5, withdrawal_from_schedule(SchedulingControl({1, 2, 3, 1, 2, 3, 4}, 4)),
               ArrivalVector({0, 0, 0, 0, 0}), l5.g);
    CHECK(after.x == std::vector<int>{0, 3, 3, 3, 3});
}

TEST_CASE("evolution rejects bad inputs instead of clamping") {
    ConnectivityMatrix g = ConnectivityMatrix::fully_connected(2, 2);
    SystemState s({0, 1, 0}, g);
    CHECK_THROWS_AS(evolve(s, WithdrawalVector({0, 2, 0}), ArrivalVector({0, 0, 0}), g),
                    std::invalid_argument); // withdraws more than present
    CHECK_THROWS_AS(evolve(s, WithdrawalVector({1, 1, 0}), ArrivalVector({0, 0, 0}), g),
                    std::invalid_argument); // dummy arrivals must mirror y0
    CHECK_THROWS_AS(evolve(s, WithdrawalVector({0, 1, 0}), ArrivalVector({0, 0, 0}), g),
                    std::invalid_argument); // sum(y) != K
}

TEST_CASE("construction enforces the dummy-queue invariants") {
    ConnectivityMatrix g = ConnectivityMatrix::fully_connected(2, 1);
    CHECK_THROWS_AS(SystemState({1, 0, 0}, g), std::invalid_argument);
    CHECK_THROWS_AS(SystemState({0, -1, 0}, g), std::invalid_argument);
    CHECK_THROWS_AS(SystemState({0, 0}, g), std::invalid_argument);
    CHECK_THROWS_AS(ConnectivityMatrix(2, 1).set(0, 0, false), std::invalid_argument);
    CHECK(g.connected(0, 0)); // dummy row always on
}

TEST_CASE("conservation holds across random evolutions") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        SystemState s = oracle::random_state(rng);
        SchedulingControl q = oracle::random_control(rng, s);
        WithdrawalVector y = withdrawal_from_schedule(q);
        std::vector<int> z(s.x.size(), 0);
        z[0] = y.y[0];
        for (int i = 1; i <= s.num_queues(); ++i) z[i] = static_cast<int>(rng() % 3);
        SystemState next = evolve(s, y, ArrivalVector(z), s.g);
        CHECK(next.x[0] == 0);
        long expected = std::accumulate(s.x.begin(), s.x.end(), 0L) - y.servers() +
                        std::accumulate(z.begin(), z.end(), 0L);
        CHECK(std::accumulate(next.x.begin(), next.x.end(), 0L) == expected);
    }
}

TEST_SUITE_END();
