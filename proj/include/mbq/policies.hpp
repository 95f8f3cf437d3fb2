#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbq/core.hpp"

namespace mbq {

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

struct PolicyDecision {
    WithdrawalVector y;
    SchedulingControl q;
};

// Raised when a brute-force policy refuses an instance whose control space
// (L+1)^K exceeds the enumeration cap.
class EnumerationCapError : public std::runtime_error {
public:
    EnumerationCapError(std::string message, double required, std::uint64_t cap)
        : std::runtime_error(std::move(message)), required_(required), cap_(cap) {}

    double required() const { return required_; }
    std::uint64_t cap() const { return cap_; }

private:
    double required_;
    std::uint64_t cap_;
};

// Feasible control minimizing the imbalance index over the whole control
// space; ties resolved toward the lexicographically smallest assignment.
PolicyDecision mb_bruteforce(const SystemState& s, std::uint64_t cap = kDefaultEnumerationCap);

// Feasible work-conserving control maximizing the imbalance index; same
// enumeration and tie-break scheme as mb_bruteforce.
PolicyDecision lb_bruteforce(const SystemState& s, std::uint64_t cap = kDefaultEnumerationCap);

// Least connected server first, longest connected queue. O(L*K).
PolicyDecision lcsf_lcq(const SystemState& s);
// Most connected server first, shortest connected queue.
PolicyDecision mcsf_scq(const SystemState& s);
// Most connected server first, longest connected queue.
PolicyDecision mcsf_lcq(const SystemState& s);
// Least connected server first, shortest connected queue.
PolicyDecision lcsf_scq(const SystemState& s);
// Each server uniformly random over its connected queues with packets left.
PolicyDecision randomized(const SystemState& s, std::mt19937_64& rng);

// True iff no idle server could be put to work on a real packet, directly or
// through a chain of reallocations.
bool is_work_conserving(const SystemState& s, const SchedulingControl& q);

struct Policy {
    std::string name;
    bool deterministic = true;
    std::function<PolicyDecision(const SystemState&, std::mt19937_64&)> decide;
};

const std::vector<std::string>& policy_names();
Policy policy_by_name(const std::string& name, std::uint64_t cap = kDefaultEnumerationCap);

} // namespace mbq
