#pragma once

#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsim/feasibility.hpp"
#include "ntnsim/orbital.hpp"
#include "ntnsim/placement.hpp"
#include "ntnsim/scenario.hpp"
#include "ntnsim/topology.hpp"

namespace ntnsim::dynamics {

enum class EventKind {
    feeder_handover_start,
    feeder_handover_complete,
    e2_reassignment,
    cluster_reformed,
    leader_changed,
    budget_violation,
    group_ue_handover,
};

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

struct SimEvent {
    double time_s = 0.0;
    EventKind kind = EventKind::budget_violation;
    std::string subject;
    nlohmann::json payload = nlohmann::json::object();

    bool operator==(const SimEvent&) const = default;
};

using EventLog = std::vector<SimEvent>;

struct FeederDecision {
    std::optional<std::string> gateway;  // absent = outage
    bool transition = false;             // switching away from `current`
};

// Highest-elevation visible gateway with hysteresis against the incumbent.
FeederDecision feeder_assignment(const orbital::SatelliteState& sat,
                                 const std::vector<orbital::GroundSite>& gateways, double t_s,
                                 const std::optional<std::string>& current,
                                 double hysteresis_deg = 2.0);

// Burst volume in bytes.
double group_ue_handover_cost(long n_ues, int msgs_per_ue, int msg_size_bytes);

struct RicCandidate {
    int ric = 0;  // NearRT_RIC instance (equals its satellite index)
    double path_delay_s = 0.0;
    double load = 0.0;     // in [0, 1]
    double quality = 0.0;  // in [0, 1]
};

struct RicWeights {
    double w_delay = 0.5;
    double w_load = 0.3;
    double w_quality = 0.2;
};

double ric_score(const RicCandidate& c, const RicWeights& w);

// Lowest-score candidate, ties to the lowest RIC id. The incumbent is kept
// unless its score exceeds the best by more than `hysteresis`. Empty
// candidate list yields nullopt (unassigned).
std::optional<int> select_near_rt_ric(const std::vector<RicCandidate>& candidates,
                                      std::optional<int> incumbent, const RicWeights& weights,
                                      double hysteresis = 0.1);

struct ScheduledReassignment {
    double migrate_at_s = 0.0;
    double exit_time_s = 0.0;
    int target_ric = 0;

    bool operator==(const ScheduledReassignment&) const = default;
};

// Scans the lookahead grid for the first time the serving RIC leaves its
// control region (loop budget violated or unreachable) and schedules a
// migration `guard_s` ahead of it, toward the candidate optimal at exit time.
std::optional<ScheduledReassignment> predict_reassignment(
    int serving_ric, const std::function<std::vector<RicCandidate>(double)>& candidates_at,
    double t_now_s, double horizon_s, double guard_s, double step_s, double loop_budget_s,
    double processing_s, const RicWeights& weights);

struct ClusterPlan {
    struct Cluster {
        std::vector<int> members;  // satellite indices, sorted
        int leader = 0;            // member with max residual compute, ties lowest id
    };
    std::vector<Cluster> clusters;
    placement::ClusterPlanSpec::Rule rule = placement::ClusterPlanSpec::Rule::by_plane_groups;
    int target_size = 3;
};

ClusterPlan form_clusters(const topology::IslTopology& topo, int num_planes, int sats_per_plane,
                          placement::ClusterPlanSpec::Rule rule, int target_size,
                          const std::map<int, double>& residual_compute);

// A1 hierarchy: ground non-RT RIC to each leader, leader to each follower.
std::vector<placement::LogicalLink> hierarchy_links(const ClusterPlan& plan,
                                                    const std::string& ground_nonrt_node,
                                                    const topology::IslTopology& topo);

struct Summary {
    int total_steps = 0;
    int feasible_steps = 0;
    double availability = 0.0;
    double violation_time_fraction = 0.0;
    int feeder_handover_count = 0;
    int e2_reassignment_count = 0;
    int group_ue_handover_count = 0;
    int cluster_reformed_count = 0;
    int leader_changed_count = 0;
    int budget_violation_count = 0;
    double unassigned_time_s = 0.0;
    double peak_feeder_demand_bps = 0.0;
    double mean_e2_loop_s = 0.0;
    double p95_e2_loop_s = 0.0;

    bool operator==(const Summary&) const = default;
};

struct RunResult {
    EventLog events;
    Summary summary;
    std::vector<feasibility::FeasibilityReport> reports;
};

// Deterministic event loop over the scenario window.
RunResult run(const scenario::Scenario& sc);

// Newline-delimited JSON records.
void write_event_log(const EventLog& log, std::ostream& os);
EventLog read_event_log(std::istream& is);
// Per-kind counts, "kind,count" rows.
void write_event_summary_csv(const EventLog& log, std::ostream& os);

nlohmann::json to_json(const Summary& s);

}  // namespace ntnsim::dynamics
