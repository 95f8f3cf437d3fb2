#pragma once

#include <string>
#include <vector>

#include "mbq/sim.hpp"

namespace mbq {

// A figure-reproduction sweep: an environment, a list of per-queue offered
// loads, and the policies to run at each load. Horizons and seed counts are
// desk-scale defaults; flags can override them.
struct Preset {
    std::string name;
    std::string mirrors; // which published curve family this follows
    ExperimentConfig base;
    std::vector<double> loads;
    std::vector<std::string> policies;
};

const std::vector<Preset>& presets();
const Preset& preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

// Applies a per-queue offered load to the preset's traffic model (arrival
// probability for Bernoulli, batch probability for batch traffic).
TrafficModel traffic_at_load(const TrafficModel& base, double load);

} // namespace mbq
