#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsim/feasibility.hpp"
#include "ntnsim/orbital.hpp"
#include "ntnsim/placement.hpp"
#include "ntnsim/topology.hpp"

namespace ntnsim::scenario {

// Knobs for the event loop; everything here has a working default.
struct SimParams {
    double dual_feeder_interval_s = 5.0;
    double feeder_hysteresis_deg = 2.0;

    double w_delay = 0.5;
    double w_load = 0.3;
    double w_quality = 0.2;
    double reassignment_hysteresis = 0.1;
    double min_reassign_interval_s = 10.0;
    bool predictive = true;
    double prediction_horizon_s = 120.0;
    double prediction_guard_s = 5.0;
    double prediction_step_s = 5.0;
    // A reactive reassignment leaves the node unassigned for this long; a
    // predictive one migrates ahead of the exit and avoids the gap.
    double migration_delay_s = 1.0;
    // Link quality = max(0, 1 - path_delay / scale).
    double quality_delay_scale_s = 0.05;
    double ric_capacity = 100.0;
    double e2_node_weight = 1.0;
    double context_size_bytes = 1e6;

    long n_ues = 0;
    int msgs_per_ue = 8;
    int msg_size_bytes = 200;

    double routing_epoch_s = 15.0;
    double follower_loop_budget_s = 0.1;

    struct LeaderFailure {
        int sat = 0;
        double time_s = 0.0;
        bool operator==(const LeaderFailure&) const = default;
    };
    std::vector<LeaderFailure> leader_failures;

    bool operator==(const SimParams&) const = default;
};

struct Window {
    double t0_s = 0.0;
    double t1_s = 60.0;
    double step_s = 1.0;

    bool operator==(const Window&) const = default;
};

struct Scenario {
    std::string name;
    orbital::ConstellationConfig constellation;
    std::vector<orbital::GroundSite> sites;
    placement::AssignmentTemplate placement;
    feasibility::TrafficConfig traffic;
    feasibility::ResourceModel resources;
    topology::TopologyPolicy policy;
    Window window;
    std::uint64_t seed = 0;
    feasibility::EvalOptions eval;
    SimParams params;

    bool operator==(const Scenario&) const = default;

    // Throws std::invalid_argument with a rule id on the first violation.
    void validate() const;
};

// Strict parse: unknown keys are rejected, defaults applied, result validated.
// Throws std::invalid_argument ("parse: ..." or a validation rule id).
Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_file(const std::string& path);

nlohmann::json to_json(const Scenario& sc);

}  // namespace ntnsim::scenario
