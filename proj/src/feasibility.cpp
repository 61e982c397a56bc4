#include "ntnsim/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ntnsim::feasibility {

using dimensioning::InterfaceClass;
using placement::FunctionKind;
using placement::Segment;

namespace {

constexpr double kNearRtLoopMinS = 10e-3;
constexpr double kNearRtLoopMaxS = 1.0;

bool hosts_full_gnb(const std::vector<FunctionKind>& functions) {
    auto has = [&](FunctionKind k) {
        return std::find(functions.begin(), functions.end(), k) != functions.end();
    };
    return has(FunctionKind::RU) && has(FunctionKind::DU) && has(FunctionKind::CU_CP) &&
           has(FunctionKind::CU_UP);
}

bool is_gnb_part(FunctionKind k) {
    return k == FunctionKind::RU || k == FunctionKind::DU || k == FunctionKind::CU_CP ||
           k == FunctionKind::CU_UP;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void TrafficConfig::validate() const {
    air.validate();
    if (feeder_capacity_bps <= 0.0 || isl_capacity_bps <= 0.0)
        throw std::invalid_argument("link capacities must be > 0");
}

double TrafficConfig::required_rate_bps(InterfaceClass cls) const {
    if (auto it = rate_override_bps.find(cls); it != rate_override_bps.end()) return it->second;
    switch (cls) {
        case InterfaceClass::OFH:
            return dimensioning::fronthaul_bit_rate(air).bps;
        case InterfaceClass::F1_U:
            return dimensioning::midhaul_bit_rate(air).bps;
        case InterfaceClass::F1_C:
            // Midhaul control-plane share.
            return air.direction == dimensioning::Direction::downlink ? 24e6 : 16e6;
        default:
            return default_signaling_rate_bps;
    }
}

ResourceModel ResourceModel::defaults() { return ResourceModel{}; }

double ResourceModel::power_of(FunctionKind kind) const {
    if (auto it = power_cost_w.find(kind); it != power_cost_w.end()) return it->second;
    switch (kind) {
        case FunctionKind::RU: return 20.0;
        case FunctionKind::DU: return 30.0;
        case FunctionKind::CU_CP: return 7.5;
        case FunctionKind::CU_UP: return 7.5;
        case FunctionKind::UPF: return 25.0;
        case FunctionKind::SEC: return 10.0;
        case FunctionKind::NearRT_RIC: return 10.0;
        case FunctionKind::NearRT_RIC_DU_part: return 5.0;
        case FunctionKind::NearRT_RIC_CU_part: return 5.0;
        case FunctionKind::NonRT_RIC: return 10.0;
        case FunctionKind::NonRT_RIC_cluster_leader: return 10.0;
        case FunctionKind::SMO:
        case FunctionKind::Core_CP:
        case FunctionKind::DataNetwork: return 0.0;
    }
    return 0.0;
}

double ResourceModel::compute_of(FunctionKind kind) const {
    if (auto it = compute_cost.find(kind); it != compute_cost.end()) return it->second;
    switch (kind) {
        case FunctionKind::RU: return 30.0;
        case FunctionKind::DU: return 50.0;
        case FunctionKind::CU_CP: return 10.0;
        case FunctionKind::CU_UP: return 10.0;
        case FunctionKind::UPF: return 30.0;
        case FunctionKind::SEC: return 20.0;
        case FunctionKind::NearRT_RIC: return 10.0;
        case FunctionKind::NearRT_RIC_DU_part: return 5.0;
        case FunctionKind::NearRT_RIC_CU_part: return 5.0;
        case FunctionKind::NonRT_RIC: return 10.0;
        case FunctionKind::NonRT_RIC_cluster_leader: return 10.0;
        case FunctionKind::SMO:
        case FunctionKind::Core_CP:
        case FunctionKind::DataNetwork: return 0.0;
    }
    return 0.0;
}

void ResourceModel::validate() const {
    if (full_gnb_overhead_factor < 1.55 || full_gnb_overhead_factor > 1.70)
        throw std::invalid_argument("full_gnb_overhead_factor must be within [1.55, 1.70]");
    for (const auto& [k, v] : power_cost_w)
        if (v < 0.0) throw std::invalid_argument("negative power cost");
    for (const auto& [k, v] : compute_cost)
        if (v < 0.0) throw std::invalid_argument("negative compute cost");
}

std::string to_string(Verdict v) { return v == Verdict::feasible ? "feasible" : "infeasible"; }

double e2_loop_latency_s(double one_way_s, double processing_s) {
    return 2.0 * one_way_s + processing_s;
}

NodeReport node_resource_check(const std::string& node,
                               const std::vector<FunctionKind>& functions,
                               const ResourceModel& resources, bool feeder_capable) {
    NodeReport report;
    report.node = node;
    report.power_budget_w = resources.power_budget_per_sat_w;
    report.compute_budget = resources.compute_budget_per_sat;

    const bool full_gnb = hosts_full_gnb(functions);
    double power = 0.0;
    double compute = 0.0;
    double gnb_compute = 0.0;
    for (auto k : functions) {
        if (full_gnb && is_gnb_part(k)) {
            gnb_compute += resources.compute_of(k);
            continue;  // covered by the composite figures below
        }
        power += resources.power_of(k);
        compute += resources.compute_of(k);
    }
    if (full_gnb) {
        power += resources.full_gnb_power_w;
        compute += resources.full_gnb_overhead_factor * gnb_compute;
    }
    if (feeder_capable) power += resources.feeder_modem_power_w;

    report.power_used_w = power;
    report.compute_used = compute;
    report.verdict = (power <= report.power_budget_w && compute <= report.compute_budget)
                         ? Verdict::feasible
                         : Verdict::infeasible;
    return report;
}

FeasibilityReport evaluate_snapshot(const placement::PlacementSpec& spec,
                                    const topology::IslTopology& topo,
                                    const topology::RoutingTable& table,
                                    const std::vector<orbital::GroundSite>& sites,
                                    const TrafficConfig& traffic, const ResourceModel& resources,
                                    double t_s, const EvalOptions& opts) {
    traffic.validate();
    resources.validate();

    FeasibilityReport report;
    report.time_s = t_s;

    const auto links = placement::derive_logical_links(spec, sites);

    auto violate = [&](std::string kind, std::string subject, std::string detail) {
        report.violations.push_back({std::move(kind), std::move(subject), std::move(detail)});
    };

    // One-way delay over the physical segment; nullopt when unreachable.
    auto path_delay = [&](const placement::LogicalLink& link) -> std::optional<double> {
        switch (link.segment) {
            case Segment::local:
                return 0.0;
            case Segment::terrestrial:
                return traffic.terrestrial_one_way_s;
            case Segment::feeder: {
                const bool from_sat = placement::is_sat_node(link.from_node);
                const std::string& sat = from_sat ? link.from_node : link.to_node;
                const std::string& ground = from_sat ? link.to_node : link.from_node;
                const int sat_idx = topo.node_index(sat);
                const int ground_idx = topo.node_index(ground);
                if (sat_idx < 0) return std::nullopt;
                if (ground_idx >= 0) {
                    if (auto direct = topo.edge_delay(sat_idx, ground_idx)) return *direct;
                }
                // Route through the nearest visible gateway, then terrestrially.
                double best = std::numeric_limits<double>::infinity();
                for (const auto& nb : topo.adj[static_cast<size_t>(sat_idx)]) {
                    if (nb.kind == topology::EdgeKind::feeder) best = std::min(best, nb.delay_s);
                }
                if (!std::isfinite(best)) return std::nullopt;
                return best + traffic.terrestrial_one_way_s;
            }
            case Segment::isl_path: {
                const int a = topo.node_index(link.from_node);
                const int b = topo.node_index(link.to_node);
                if (a < 0 || b < 0) return std::nullopt;
                const auto r = topology::route(table, topo, a, b);
                if (!r.found) return std::nullopt;
                return r.total_delay_s;
            }
        }
        return std::nullopt;
    };

    for (const auto& link : links) {
        LinkReport lr;
        lr.link = link;
        lr.required_bps = traffic.required_rate_bps(link.interface_class);

        switch (link.segment) {
            case Segment::feeder: lr.capacity_bps = traffic.feeder_capacity_bps; break;
            case Segment::isl_path: lr.capacity_bps = traffic.isl_capacity_bps; break;
            default: break;  // local/terrestrial unbounded
        }

        const auto budget = dimensioning::latency_budget(link.interface_class);
        lr.budget_s = budget.max_one_way_s;
        if (auto it = opts.budget_override_s.find(link.interface_class);
            it != opts.budget_override_s.end())
            lr.budget_s = it->second;

        const auto delay = path_delay(link);
        if (!delay) {
            lr.reachable = false;
            lr.verdict = Verdict::infeasible;
            violate("unreachable", link.id(), "no physical path at t=" + format_double(t_s));
            report.per_link.push_back(std::move(lr));
            continue;
        }
        lr.one_way_delay_s = *delay;

        bool ok = true;
        if (lr.budget_s) {
            lr.margin_s = *lr.budget_s - lr.one_way_delay_s;
            if (lr.one_way_delay_s > *lr.budget_s) {
                ok = false;
                violate("latency-budget", link.id(),
                        "delay " + format_double(lr.one_way_delay_s) + " s exceeds budget " +
                            format_double(*lr.budget_s) + " s");
            }
        }
        if (lr.capacity_bps) {
            lr.margin_bps = *lr.capacity_bps - lr.required_bps;
            if (lr.required_bps > *lr.capacity_bps) {
                ok = false;
                violate("capacity", link.id(),
                        "required " + format_double(lr.required_bps) + " bps exceeds capacity " +
                            format_double(*lr.capacity_bps) + " bps");
            }
        }
        if (link.interface_class == InterfaceClass::E2 ||
            link.interface_class == InterfaceClass::inter_RIC) {
            const double loop = e2_loop_latency_s(lr.one_way_delay_s, opts.e2_processing_s);
            lr.loop_latency_s = loop;
            lr.strict_capable = loop <= kNearRtLoopMinS;
            if (loop > kNearRtLoopMaxS) {
                ok = false;
                violate("e2-loop", link.id(),
                        "loop " + format_double(loop) + " s exceeds the relaxed near-RT bound");
            } else if (opts.require_strict_nearrt && !*lr.strict_capable) {
                ok = false;
                violate("e2-strict", link.id(),
                        "loop " + format_double(loop) + " s misses the strict near-RT window");
            }
        }
        lr.verdict = ok ? Verdict::feasible : Verdict::infeasible;
        report.per_link.push_back(std::move(lr));
    }

    // Per-satellite resource loads.
    std::map<std::string, std::vector<FunctionKind>> hosted;
    for (const auto& [fn, node] : spec.assignments) hosted[node].push_back(fn.kind);
    for (const auto& [node, functions] : hosted) {
        if (!placement::is_sat_node(node)) continue;
        const int idx = topo.node_index(node);
        const bool feeder_capable = idx >= 0 && topo.feeder_capable_nodes.contains(idx);
        auto nr = node_resource_check(node, functions, resources, feeder_capable);
        if (nr.verdict == Verdict::infeasible) {
            if (nr.power_used_w > nr.power_budget_w)
                violate("node-power", node,
                        format_double(nr.power_used_w) + " W exceeds budget " +
                            format_double(nr.power_budget_w) + " W");
            if (nr.compute_used > nr.compute_budget)
                violate("node-compute", node,
                        format_double(nr.compute_used) + " units exceeds budget " +
                            format_double(nr.compute_budget));
        }
        report.per_node.push_back(std::move(nr));
    }

    report.overall = report.violations.empty() ? Verdict::feasible : Verdict::infeasible;
    return report;
}

WindowResult evaluate_window(const placement::PlacementSpec& spec,
                             const orbital::ConstellationConfig& constellation,
                             const std::vector<orbital::GroundSite>& sites,
                             const topology::TopologyPolicy& policy, const TrafficConfig& traffic,
                             const ResourceModel& resources, double t0_s, double t1_s,
                             double step_s, const EvalOptions& opts, double routing_epoch_s) {
    if (t0_s >= t1_s) throw std::invalid_argument("window requires t0 < t1");
    if (step_s <= 0.0) throw std::invalid_argument("step must be > 0");

    WindowResult result;
    topology::RoutingTable table;
    double table_until = -std::numeric_limits<double>::infinity();
    int feasible_steps = 0;

    for (double t = t0_s; t <= t1_s + 1e-9; t += step_s) {
        const auto states = orbital::propagate(constellation, t);
        const auto topo = topology::build_topology(states, sites, policy);
        if (t >= table_until) {
            table_until = t + routing_epoch_s;
            table = topology::build_routing_tables(topo, t, table_until);
        }
        auto report = evaluate_snapshot(spec, topo, table, sites, traffic, resources, t, opts);
        if (report.overall == Verdict::feasible) ++feasible_steps;
        for (const auto& lr : report.per_link) {
            if (!lr.margin_s) continue;
            auto [it, inserted] = result.worst_margin_s.try_emplace(lr.link.interface_class,
                                                                    *lr.margin_s);
            if (!inserted) it->second = std::min(it->second, *lr.margin_s);
        }
        result.steps.push_back(std::move(report));
    }
    result.availability =
        result.steps.empty() ? 0.0
                             : static_cast<double>(feasible_steps) /
                                   static_cast<double>(result.steps.size());
    return result;
}

void write_csv(const std::vector<FeasibilityReport>& steps, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const auto& report : steps) {
        for (const auto& lr : report.per_link) {
            os << format_double(report.time_s) << ',' << lr.link.id() << ','
               << dimensioning::to_string(lr.link.interface_class) << ','
               << placement::to_string(lr.link.segment) << ','
               << format_double(lr.one_way_delay_s * 1e6) << ',';
            if (lr.budget_s) os << format_double(*lr.budget_s * 1e6);
            os << ',' << format_double(lr.required_bps) << ',';
            if (lr.capacity_bps) os << format_double(*lr.capacity_bps);
            os << ',' << to_string(lr.verdict) << '\n';
        }
    }
}

namespace {

nlohmann::json opt_to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<double> opt_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

nlohmann::json link_to_json(const placement::LogicalLink& link) {
    return {{"from", link.from.str()},
            {"to", link.to.str()},
            {"from_kind", placement::to_string(link.from.kind)},
            {"from_instance", link.from.instance},
            {"to_kind", placement::to_string(link.to.kind)},
            {"to_instance", link.to.instance},
            {"from_node", link.from_node},
            {"to_node", link.to_node},
            {"class", dimensioning::to_string(link.interface_class)},
            {"segment", placement::to_string(link.segment)}};
}

placement::LogicalLink link_from_json(const nlohmann::json& j) {
    placement::LogicalLink link;
    link.from = {placement::function_kind_from_string(j.at("from_kind")),
                 j.at("from_instance").get<int>()};
    link.to = {placement::function_kind_from_string(j.at("to_kind")),
               j.at("to_instance").get<int>()};
    link.from_node = j.at("from_node");
    link.to_node = j.at("to_node");
    link.interface_class = dimensioning::interface_class_from_string(j.at("class"));
    const std::string seg = j.at("segment");
    for (auto s : {Segment::local, Segment::feeder, Segment::isl_path, Segment::terrestrial})
        if (placement::to_string(s) == seg) link.segment = s;
    return link;
}

}  // namespace

nlohmann::json to_json(const FeasibilityReport& report) {
    nlohmann::json j;
    j["time_s"] = report.time_s;
    j["overall"] = to_string(report.overall);
    j["per_link"] = nlohmann::json::array();
    for (const auto& lr : report.per_link) {
        nlohmann::json e;
        e["link"] = link_to_json(lr.link);
        e["required_bps"] = lr.required_bps;
        e["capacity_bps"] = opt_to_json(lr.capacity_bps);
        e["one_way_delay_s"] = lr.one_way_delay_s;
        e["budget_s"] = opt_to_json(lr.budget_s);
        e["reachable"] = lr.reachable;
        e["verdict"] = to_string(lr.verdict);
        e["margin_s"] = opt_to_json(lr.margin_s);
        e["margin_bps"] = opt_to_json(lr.margin_bps);
        e["loop_latency_s"] = opt_to_json(lr.loop_latency_s);
        e["strict_capable"] =
            lr.strict_capable ? nlohmann::json(*lr.strict_capable) : nlohmann::json(nullptr);
        j["per_link"].push_back(std::move(e));
    }
    j["per_node"] = nlohmann::json::array();
    for (const auto& nr : report.per_node) {
        j["per_node"].push_back({{"node", nr.node},
                                 {"power_used_w", nr.power_used_w},
                                 {"power_budget_w", nr.power_budget_w},
                                 {"compute_used", nr.compute_used},
                                 {"compute_budget", nr.compute_budget},
                                 {"verdict", to_string(nr.verdict)}});
    }
    j["violations"] = nlohmann::json::array();
    for (const auto& v : report.violations)
        j["violations"].push_back({{"kind", v.kind}, {"subject", v.subject}, {"detail", v.detail}});
    return j;
}

FeasibilityReport report_from_json(const nlohmann::json& j) {
    FeasibilityReport report;
    report.time_s = j.at("time_s").get<double>();
    report.overall = j.at("overall") == "feasible" ? Verdict::feasible : Verdict::infeasible;
    for (const auto& e : j.at("per_link")) {
        LinkReport lr;
        lr.link = link_from_json(e.at("link"));
        lr.required_bps = e.at("required_bps").get<double>();
        lr.capacity_bps = opt_from_json(e.at("capacity_bps"));
        lr.one_way_delay_s = e.at("one_way_delay_s").get<double>();
        lr.budget_s = opt_from_json(e.at("budget_s"));
        lr.reachable = e.at("reachable").get<bool>();
        lr.verdict = e.at("verdict") == "feasible" ? Verdict::feasible : Verdict::infeasible;
        lr.margin_s = opt_from_json(e.at("margin_s"));
        lr.margin_bps = opt_from_json(e.at("margin_bps"));
        lr.loop_latency_s = opt_from_json(e.at("loop_latency_s"));
        if (!e.at("strict_capable").is_null()) lr.strict_capable = e.at("strict_capable").get<bool>();
        report.per_link.push_back(std::move(lr));
    }
    for (const auto& e : j.at("per_node")) {
        NodeReport nr;
        nr.node = e.at("node");
        nr.power_used_w = e.at("power_used_w").get<double>();
        nr.power_budget_w = e.at("power_budget_w").get<double>();
        nr.compute_used = e.at("compute_used").get<double>();
        nr.compute_budget = e.at("compute_budget").get<double>();
        nr.verdict = e.at("verdict") == "feasible" ? Verdict::feasible : Verdict::infeasible;
        report.per_node.push_back(std::move(nr));
    }
    for (const auto& e : j.at("violations"))
        report.violations.push_back({e.at("kind"), e.at("subject"), e.at("detail")});
    return report;
}

}  // namespace ntnsim::feasibility
