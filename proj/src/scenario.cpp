#include "ntnsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

namespace ntnsim::scenario {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail("parse: " + where + " must be an object");
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    expect_object(j, where);
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) fail("parse: unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void read_optional_double(const json& j, const char* key, double& out, double if_null) {
    auto it = j.find(key);
    if (it == j.end()) return;
    out = it->is_null() ? if_null : it->get<double>();
}

orbital::ConstellationConfig parse_constellation(const json& j) {
    check_keys(j, "constellation",
               {"altitude_km", "inclination_deg", "num_planes", "sats_per_plane", "phasing_factor",
                "raan_spread_deg", "epoch_s"});
    orbital::ConstellationConfig c;
    read(j, "altitude_km", c.altitude_km);
    read(j, "inclination_deg", c.inclination_deg);
    read(j, "num_planes", c.num_planes);
    read(j, "sats_per_plane", c.sats_per_plane);
    read(j, "phasing_factor", c.phasing_factor);
    read(j, "raan_spread_deg", c.raan_spread_deg);
    read(j, "epoch_s", c.epoch_s);
    return c;
}

orbital::GroundSite parse_site(const json& j, size_t i) {
    const std::string where = "sites[" + std::to_string(i) + "]";
    check_keys(j, where, {"id", "latitude_deg", "longitude_deg", "role", "min_elevation_deg"});
    orbital::GroundSite s;
    if (!j.contains("id")) fail("parse: " + where + " missing 'id'");
    read(j, "id", s.id);
    read(j, "latitude_deg", s.latitude_deg);
    read(j, "longitude_deg", s.longitude_deg);
    if (j.contains("role")) s.role = orbital::site_role_from_string(j.at("role"));
    read(j, "min_elevation_deg", s.min_elevation_deg);
    return s;
}

placement::AssignmentTemplate parse_placement(const json& j) {
    check_keys(j, "placement",
               {"split", "extension", "ric_count", "cluster_rule", "cluster_target_size",
                "split_e1"});
    placement::AssignmentTemplate t;
    if (!j.contains("split")) fail("parse: placement missing 'split'");
    t.split = placement::split_option_from_string(j.at("split"));
    if (j.contains("extension"))
        t.extension = placement::ric_extension_from_string(j.at("extension"));
    read(j, "ric_count", t.ric_count);
    read(j, "split_e1", t.split_e1);
    if (j.contains("cluster_rule") || j.contains("cluster_target_size")) {
        placement::ClusterPlanSpec plan;
        if (j.contains("cluster_rule")) {
            const std::string rule = j.at("cluster_rule");
            if (rule == "by_plane_groups") plan.rule = placement::ClusterPlanSpec::Rule::by_plane_groups;
            else if (rule == "by_k_hop") plan.rule = placement::ClusterPlanSpec::Rule::by_k_hop;
            else fail("parse: bad cluster_rule '" + rule + "'");
        }
        read(j, "cluster_target_size", plan.target_size);
        t.cluster_plan = plan;
    }
    return t;
}

std::map<dimensioning::InterfaceClass, double> parse_class_map(const json& j,
                                                               const std::string& where) {
    expect_object(j, where);
    std::map<dimensioning::InterfaceClass, double> out;
    for (const auto& [key, value] : j.items())
        out[dimensioning::interface_class_from_string(key)] = value.get<double>();
    return out;
}

std::map<placement::FunctionKind, double> parse_kind_map(const json& j, const std::string& where) {
    expect_object(j, where);
    std::map<placement::FunctionKind, double> out;
    for (const auto& [key, value] : j.items())
        out[placement::function_kind_from_string(key)] = value.get<double>();
    return out;
}

feasibility::TrafficConfig parse_traffic(const json& j) {
    check_keys(j, "traffic",
               {"air", "feeder_capacity_bps", "isl_capacity_bps", "default_signaling_rate_bps",
                "rate_override_bps", "terrestrial_one_way_s"});
    feasibility::TrafficConfig t;
    if (j.contains("air")) {
        const auto& a = j.at("air");
        check_keys(a, "traffic.air",
                   {"bandwidth_mhz", "scs_khz", "n_prb", "n_symbols", "n_layers", "bitwidth",
                    "modulation_order", "direction"});
        read(a, "bandwidth_mhz", t.air.bandwidth_mhz);
        read(a, "scs_khz", t.air.scs_khz);
        read(a, "n_prb", t.air.n_prb);
        read(a, "n_symbols", t.air.n_symbols);
        read(a, "n_layers", t.air.n_layers);
        read(a, "bitwidth", t.air.bitwidth);
        read(a, "modulation_order", t.air.modulation_order);
        if (a.contains("direction")) t.air.direction = dimensioning::direction_from_string(a.at("direction"));
    }
    read(j, "feeder_capacity_bps", t.feeder_capacity_bps);
    read(j, "isl_capacity_bps", t.isl_capacity_bps);
    read(j, "default_signaling_rate_bps", t.default_signaling_rate_bps);
    if (j.contains("rate_override_bps"))
        t.rate_override_bps = parse_class_map(j.at("rate_override_bps"), "traffic.rate_override_bps");
    read(j, "terrestrial_one_way_s", t.terrestrial_one_way_s);
    return t;
}

feasibility::ResourceModel parse_resources(const json& j) {
    check_keys(j, "resources",
               {"power_budget_per_sat_w", "power_cost_w", "full_gnb_power_w",
                "feeder_modem_power_w", "compute_budget_per_sat", "compute_cost",
                "full_gnb_overhead_factor"});
    feasibility::ResourceModel r;
    read(j, "power_budget_per_sat_w", r.power_budget_per_sat_w);
    read(j, "full_gnb_power_w", r.full_gnb_power_w);
    read(j, "feeder_modem_power_w", r.feeder_modem_power_w);
    read(j, "compute_budget_per_sat", r.compute_budget_per_sat);
    read(j, "full_gnb_overhead_factor", r.full_gnb_overhead_factor);
    if (j.contains("power_cost_w")) r.power_cost_w = parse_kind_map(j.at("power_cost_w"), "resources.power_cost_w");
    if (j.contains("compute_cost")) r.compute_cost = parse_kind_map(j.at("compute_cost"), "resources.compute_cost");
    return r;
}

topology::TopologyPolicy parse_policy(const json& j) {
    check_keys(j, "topology",
               {"max_isl_range_km", "interplane_lat_cutoff_deg", "feeder_capable"});
    topology::TopologyPolicy p;
    read_optional_double(j, "max_isl_range_km", p.max_isl_range_km,
                         std::numeric_limits<double>::infinity());
    read(j, "interplane_lat_cutoff_deg", p.interplane_lat_cutoff_deg);
    if (j.contains("feeder_capable")) {
        std::set<orbital::SatId> caps;
        for (const auto& e : j.at("feeder_capable")) {
            check_keys(e, "topology.feeder_capable[]", {"plane", "slot"});
            caps.insert({e.at("plane").get<int>(), e.at("slot").get<int>()});
        }
        p.feeder_capable = std::move(caps);
    }
    return p;
}

feasibility::EvalOptions parse_eval(const json& j) {
    check_keys(j, "overrides", {"budget_s", "e2_processing_s", "require_strict_nearrt"});
    feasibility::EvalOptions e;
    if (j.contains("budget_s"))
        e.budget_override_s = parse_class_map(j.at("budget_s"), "overrides.budget_s");
    read(j, "e2_processing_s", e.e2_processing_s);
    read(j, "require_strict_nearrt", e.require_strict_nearrt);
    return e;
}

SimParams parse_params(const json& j) {
    check_keys(j, "params",
               {"dual_feeder_interval_s", "feeder_hysteresis_deg", "w_delay", "w_load",
                "w_quality", "reassignment_hysteresis", "min_reassign_interval_s", "predictive",
                "prediction_horizon_s", "prediction_guard_s", "prediction_step_s",
                "migration_delay_s", "quality_delay_scale_s", "ric_capacity", "e2_node_weight",
                "context_size_bytes", "n_ues", "msgs_per_ue", "msg_size_bytes", "routing_epoch_s",
                "follower_loop_budget_s", "leader_failures"});
    SimParams p;
    read(j, "dual_feeder_interval_s", p.dual_feeder_interval_s);
    read(j, "feeder_hysteresis_deg", p.feeder_hysteresis_deg);
    read(j, "w_delay", p.w_delay);
    read(j, "w_load", p.w_load);
    read(j, "w_quality", p.w_quality);
    read(j, "reassignment_hysteresis", p.reassignment_hysteresis);
    read(j, "min_reassign_interval_s", p.min_reassign_interval_s);
    read(j, "predictive", p.predictive);
    read(j, "prediction_horizon_s", p.prediction_horizon_s);
    read(j, "prediction_guard_s", p.prediction_guard_s);
    read(j, "prediction_step_s", p.prediction_step_s);
    read(j, "migration_delay_s", p.migration_delay_s);
    read(j, "quality_delay_scale_s", p.quality_delay_scale_s);
    read(j, "ric_capacity", p.ric_capacity);
    read(j, "e2_node_weight", p.e2_node_weight);
    read(j, "context_size_bytes", p.context_size_bytes);
    read(j, "n_ues", p.n_ues);
    read(j, "msgs_per_ue", p.msgs_per_ue);
    read(j, "msg_size_bytes", p.msg_size_bytes);
    read(j, "routing_epoch_s", p.routing_epoch_s);
    read(j, "follower_loop_budget_s", p.follower_loop_budget_s);
    if (j.contains("leader_failures")) {
        for (const auto& e : j.at("leader_failures")) {
            check_keys(e, "params.leader_failures[]", {"sat", "time_s"});
            p.leader_failures.push_back({e.at("sat").get<int>(), e.at("time_s").get<double>()});
        }
    }
    return p;
}

}  // namespace

void Scenario::validate() const {
    constellation.validate();
    if (sites.empty()) fail("scenario-sites: at least one ground site required");
    std::set<std::string> ids;
    bool has_gateway = false;
    for (const auto& s : sites) {
        s.validate();
        if (!ids.insert(s.id).second) fail("scenario-sites: duplicate site id '" + s.id + "'");
        has_gateway = has_gateway || s.role == orbital::SiteRole::gateway;
    }
    if (!has_gateway) fail("scenario-sites: a gateway site is required");
    if (!placement::compatible(placement.split, placement.extension)) {
        if (placement.extension == placement::RicExtension::ext1)
            fail("ext1-requires-ground-cu");
        fail("ext-requires-space-cu");
    }
    traffic.validate();
    resources.validate();
    if (!(window.t0_s < window.t1_s)) fail("scenario-window: t0 must precede t1");
    if (window.step_s <= 0.0) fail("scenario-window: step must be > 0");
    if (params.dual_feeder_interval_s < 0.0 || params.feeder_hysteresis_deg < 0.0)
        fail("scenario-params: feeder parameters must be nonnegative");
    if (params.prediction_horizon_s <= params.prediction_guard_s ||
        params.prediction_guard_s < 0.0)
        fail("scenario-params: prediction requires horizon > guard >= 0");
    if (params.w_delay < 0.0 || params.w_load < 0.0 || params.w_quality < 0.0)
        fail("scenario-params: scoring weights must be nonnegative");
    if (params.ric_capacity <= 0.0) fail("scenario-params: ric_capacity must be > 0");
}

Scenario parse_scenario(const nlohmann::json& j) {
    check_keys(j, "scenario",
               {"name", "constellation", "sites", "placement", "traffic", "resources", "topology",
                "window", "seed", "overrides", "params"});
    Scenario sc;
    read(j, "name", sc.name);
    if (!j.contains("constellation")) fail("parse: scenario missing 'constellation'");
    sc.constellation = parse_constellation(j.at("constellation"));
    if (!j.contains("sites")) fail("parse: scenario missing 'sites'");
    for (size_t i = 0; i < j.at("sites").size(); ++i)
        sc.sites.push_back(parse_site(j.at("sites")[i], i));
    if (!j.contains("placement")) fail("parse: scenario missing 'placement'");
    sc.placement = parse_placement(j.at("placement"));
    if (j.contains("traffic")) sc.traffic = parse_traffic(j.at("traffic"));
    if (j.contains("resources")) sc.resources = parse_resources(j.at("resources"));
    if (j.contains("topology")) sc.policy = parse_policy(j.at("topology"));
    if (j.contains("window")) {
        const auto& w = j.at("window");
        check_keys(w, "window", {"t0_s", "t1_s", "step_s"});
        read(w, "t0_s", sc.window.t0_s);
        read(w, "t1_s", sc.window.t1_s);
        read(w, "step_s", sc.window.step_s);
    }
    read(j, "seed", sc.seed);
    if (j.contains("overrides")) sc.eval = parse_eval(j.at("overrides"));
    if (j.contains("params")) sc.params = parse_params(j.at("params"));
    sc.validate();
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("parse: cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("parse: ") + e.what());
    }
    return parse_scenario(j);
}

nlohmann::json to_json(const Scenario& sc) {
    nlohmann::json j;
    j["name"] = sc.name;
    j["constellation"] = {{"altitude_km", sc.constellation.altitude_km},
                          {"inclination_deg", sc.constellation.inclination_deg},
                          {"num_planes", sc.constellation.num_planes},
                          {"sats_per_plane", sc.constellation.sats_per_plane},
                          {"phasing_factor", sc.constellation.phasing_factor},
                          {"raan_spread_deg", sc.constellation.raan_spread_deg},
                          {"epoch_s", sc.constellation.epoch_s}};
    j["sites"] = nlohmann::json::array();
    for (const auto& s : sc.sites)
        j["sites"].push_back({{"id", s.id},
                              {"latitude_deg", s.latitude_deg},
                              {"longitude_deg", s.longitude_deg},
                              {"role", orbital::to_string(s.role)},
                              {"min_elevation_deg", s.min_elevation_deg}});
    nlohmann::json pl = {{"split", placement::to_string(sc.placement.split)},
                         {"extension", placement::to_string(sc.placement.extension)},
                         {"ric_count", sc.placement.ric_count},
                         {"split_e1", sc.placement.split_e1}};
    if (sc.placement.cluster_plan) {
        pl["cluster_rule"] =
            sc.placement.cluster_plan->rule == placement::ClusterPlanSpec::Rule::by_plane_groups
                ? "by_plane_groups"
                : "by_k_hop";
        pl["cluster_target_size"] = sc.placement.cluster_plan->target_size;
    }
    j["placement"] = std::move(pl);

    nlohmann::json overrides_map = nlohmann::json::object();
    for (const auto& [cls, v] : sc.traffic.rate_override_bps)
        overrides_map[dimensioning::to_string(cls)] = v;
    j["traffic"] = {{"air",
                     {{"bandwidth_mhz", sc.traffic.air.bandwidth_mhz},
                      {"scs_khz", sc.traffic.air.scs_khz},
                      {"n_prb", sc.traffic.air.n_prb},
                      {"n_symbols", sc.traffic.air.n_symbols},
                      {"n_layers", sc.traffic.air.n_layers},
                      {"bitwidth", sc.traffic.air.bitwidth},
                      {"modulation_order", sc.traffic.air.modulation_order},
                      {"direction", dimensioning::to_string(sc.traffic.air.direction)}}},
                    {"feeder_capacity_bps", sc.traffic.feeder_capacity_bps},
                    {"isl_capacity_bps", sc.traffic.isl_capacity_bps},
                    {"default_signaling_rate_bps", sc.traffic.default_signaling_rate_bps},
                    {"rate_override_bps", std::move(overrides_map)},
                    {"terrestrial_one_way_s", sc.traffic.terrestrial_one_way_s}};

    nlohmann::json power = nlohmann::json::object();
    for (const auto& [k, v] : sc.resources.power_cost_w) power[placement::to_string(k)] = v;
    nlohmann::json compute = nlohmann::json::object();
    for (const auto& [k, v] : sc.resources.compute_cost) compute[placement::to_string(k)] = v;
    j["resources"] = {{"power_budget_per_sat_w", sc.resources.power_budget_per_sat_w},
                      {"power_cost_w", std::move(power)},
                      {"full_gnb_power_w", sc.resources.full_gnb_power_w},
                      {"feeder_modem_power_w", sc.resources.feeder_modem_power_w},
                      {"compute_budget_per_sat", sc.resources.compute_budget_per_sat},
                      {"compute_cost", std::move(compute)},
                      {"full_gnb_overhead_factor", sc.resources.full_gnb_overhead_factor}};

    nlohmann::json topo;
    topo["max_isl_range_km"] = std::isfinite(sc.policy.max_isl_range_km)
                                   ? nlohmann::json(sc.policy.max_isl_range_km)
                                   : nlohmann::json(nullptr);
    topo["interplane_lat_cutoff_deg"] = sc.policy.interplane_lat_cutoff_deg;
    if (sc.policy.feeder_capable) {
        topo["feeder_capable"] = nlohmann::json::array();
        for (const auto& id : *sc.policy.feeder_capable)
            topo["feeder_capable"].push_back({{"plane", id.plane}, {"slot", id.slot}});
    }
    j["topology"] = std::move(topo);

    j["window"] = {{"t0_s", sc.window.t0_s}, {"t1_s", sc.window.t1_s}, {"step_s", sc.window.step_s}};
    j["seed"] = sc.seed;

    nlohmann::json budgets = nlohmann::json::object();
    for (const auto& [cls, v] : sc.eval.budget_override_s)
        budgets[dimensioning::to_string(cls)] = v;
    j["overrides"] = {{"budget_s", std::move(budgets)},
                      {"e2_processing_s", sc.eval.e2_processing_s},
                      {"require_strict_nearrt", sc.eval.require_strict_nearrt}};

    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : sc.params.leader_failures)
        failures.push_back({{"sat", f.sat}, {"time_s", f.time_s}});
    j["params"] = {{"dual_feeder_interval_s", sc.params.dual_feeder_interval_s},
                   {"feeder_hysteresis_deg", sc.params.feeder_hysteresis_deg},
                   {"w_delay", sc.params.w_delay},
                   {"w_load", sc.params.w_load},
                   {"w_quality", sc.params.w_quality},
                   {"reassignment_hysteresis", sc.params.reassignment_hysteresis},
                   {"min_reassign_interval_s", sc.params.min_reassign_interval_s},
                   {"predictive", sc.params.predictive},
                   {"prediction_horizon_s", sc.params.prediction_horizon_s},
                   {"prediction_guard_s", sc.params.prediction_guard_s},
                   {"prediction_step_s", sc.params.prediction_step_s},
                   {"migration_delay_s", sc.params.migration_delay_s},
                   {"quality_delay_scale_s", sc.params.quality_delay_scale_s},
                   {"ric_capacity", sc.params.ric_capacity},
                   {"e2_node_weight", sc.params.e2_node_weight},
                   {"context_size_bytes", sc.params.context_size_bytes},
                   {"n_ues", sc.params.n_ues},
                   {"msgs_per_ue", sc.params.msgs_per_ue},
                   {"msg_size_bytes", sc.params.msg_size_bytes},
                   {"routing_epoch_s", sc.params.routing_epoch_s},
                   {"follower_loop_budget_s", sc.params.follower_loop_budget_s},
                   {"leader_failures", std::move(failures)}};
    return j;
}

}  // namespace ntnsim::scenario
