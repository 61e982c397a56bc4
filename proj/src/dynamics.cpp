#include "ntnsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ntnsim::dynamics {

using placement::FunctionInstance;
using placement::FunctionKind;

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::feeder_handover_start: return "feeder_handover_start";
        case EventKind::feeder_handover_complete: return "feeder_handover_complete";
        case EventKind::e2_reassignment: return "e2_reassignment";
        case EventKind::cluster_reformed: return "cluster_reformed";
        case EventKind::leader_changed: return "leader_changed";
        case EventKind::budget_violation: return "budget_violation";
        case EventKind::group_ue_handover: return "group_ue_handover";
    }
    throw std::logic_error("bad EventKind");
}

EventKind event_kind_from_string(const std::string& s) {
    for (auto k : {EventKind::feeder_handover_start, EventKind::feeder_handover_complete,
                   EventKind::e2_reassignment, EventKind::cluster_reformed,
                   EventKind::leader_changed, EventKind::budget_violation,
                   EventKind::group_ue_handover}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown event kind: " + s);
}

FeederDecision feeder_assignment(const orbital::SatelliteState& sat,
                                 const std::vector<orbital::GroundSite>& gateways, double t_s,
                                 const std::optional<std::string>& current,
                                 double hysteresis_deg) {
    const orbital::GroundSite* best = nullptr;
    double best_elev = -std::numeric_limits<double>::infinity();
    double current_elev = -std::numeric_limits<double>::infinity();
    bool current_visible = false;
    for (const auto& gw : gateways) {
        if (gw.role != orbital::SiteRole::gateway) continue;
        const auto gw_pos = orbital::site_position_eci(gw, t_s);
        const double elev = orbital::elevation_deg(sat.position_km, gw_pos);
        if (elev < gw.min_elevation_deg) continue;
        if (current && gw.id == *current) {
            current_visible = true;
            current_elev = elev;
        }
        if (elev > best_elev || (elev == best_elev && best && gw.id < best->id)) {
            best = &gw;
            best_elev = elev;
        }
    }
    if (!best) return {};
    if (current_visible) {
        if (best->id == *current || best_elev < current_elev + hysteresis_deg)
            return {current, false};
        return {best->id, true};
    }
    return {best->id, current.has_value()};
}

double group_ue_handover_cost(long n_ues, int msgs_per_ue, int msg_size_bytes) {
    if (n_ues < 0) throw std::invalid_argument("n_ues must be >= 0");
    return static_cast<double>(n_ues) * msgs_per_ue * msg_size_bytes;
}

double ric_score(const RicCandidate& c, const RicWeights& w) {
    return w.w_delay * (c.path_delay_s / 10e-3) + w.w_load * c.load +
           w.w_quality * (1.0 - c.quality);
}

std::optional<int> select_near_rt_ric(const std::vector<RicCandidate>& candidates,
                                      std::optional<int> incumbent, const RicWeights& weights,
                                      double hysteresis) {
    if (candidates.empty()) return std::nullopt;
    const RicCandidate* best = nullptr;
    double best_score = std::numeric_limits<double>::infinity();
    std::optional<double> incumbent_score;
    for (const auto& c : candidates) {
        const double s = ric_score(c, weights);
        if (incumbent && c.ric == *incumbent) incumbent_score = s;
        if (s < best_score || (s == best_score && best && c.ric < best->ric)) {
            best = &c;
            best_score = s;
        }
    }
    if (incumbent_score && *incumbent_score <= best_score + hysteresis) return incumbent;
    return best->ric;
}

std::optional<ScheduledReassignment> predict_reassignment(
    int serving_ric, const std::function<std::vector<RicCandidate>(double)>& candidates_at,
    double t_now_s, double horizon_s, double guard_s, double step_s, double loop_budget_s,
    double processing_s, const RicWeights& weights) {
    if (!(horizon_s > guard_s && guard_s >= 0.0)) throw std::invalid_argument("horizon > guard >= 0");
    if (step_s <= 0.0) throw std::invalid_argument("step must be > 0");
    for (double t = t_now_s + step_s; t <= t_now_s + horizon_s + 1e-9; t += step_s) {
        const auto cands = candidates_at(t);
        bool serving_ok = false;
        for (const auto& c : cands) {
            if (c.ric == serving_ric &&
                feasibility::e2_loop_latency_s(c.path_delay_s, processing_s) <= loop_budget_s) {
                serving_ok = true;
                break;
            }
        }
        if (serving_ok) continue;
        const auto target = select_near_rt_ric(cands, std::nullopt, weights, 0.0);
        if (!target) return std::nullopt;
        return ScheduledReassignment{std::max(t_now_s, t - guard_s), t, *target};
    }
    return std::nullopt;
}

ClusterPlan form_clusters(const topology::IslTopology& topo, int num_planes, int sats_per_plane,
                          placement::ClusterPlanSpec::Rule rule, int target_size,
                          const std::map<int, double>& residual_compute) {
    ClusterPlan plan;
    plan.rule = rule;
    plan.target_size = target_size;
    const auto partition =
        placement::partition_clusters(topo, num_planes, sats_per_plane, rule, target_size);
    for (const auto& members : partition) {
        ClusterPlan::Cluster c;
        c.members = members;
        std::sort(c.members.begin(), c.members.end());
        int leader = c.members.front();
        double best = -std::numeric_limits<double>::infinity();
        for (int m : c.members) {
            const auto it = residual_compute.find(m);
            const double r = it == residual_compute.end() ? 0.0 : it->second;
            if (r > best) {
                best = r;
                leader = m;
            }
        }
        c.leader = leader;
        plan.clusters.push_back(std::move(c));
    }
    return plan;
}

std::vector<placement::LogicalLink> hierarchy_links(const ClusterPlan& plan,
                                                    const std::string& ground_nonrt_node,
                                                    const topology::IslTopology& topo) {
    std::vector<placement::LogicalLink> links;
    const FunctionInstance non_rt{FunctionKind::NonRT_RIC, 0};
    for (const auto& c : plan.clusters) {
        const auto leader_node = topo.nodes[static_cast<size_t>(c.leader)];
        links.push_back({non_rt,
                         {FunctionKind::NonRT_RIC_cluster_leader, c.leader},
                         ground_nonrt_node,
                         leader_node,
                         dimensioning::InterfaceClass::A1,
                         placement::Segment::feeder});
        for (int m : c.members) {
            if (m == c.leader) continue;
            links.push_back({{FunctionKind::NonRT_RIC_cluster_leader, c.leader},
                             {FunctionKind::NearRT_RIC, m},
                             leader_node,
                             topo.nodes[static_cast<size_t>(m)],
                             dimensioning::InterfaceClass::A1,
                             placement::Segment::isl_path});
        }
    }
    return links;
}

namespace {

struct FeederState {
    std::optional<std::string> current;
    std::optional<std::string> target;
    double complete_at_s = 0.0;
    bool in_outage = false;
};

}  // namespace

RunResult run(const scenario::Scenario& sc) {
    sc.validate();
    const auto& p = sc.params;

    RunResult result;
    EventLog& events = result.events;
    auto emit = [&](double t, EventKind kind, std::string subject, nlohmann::json payload) {
        events.push_back({t, kind, std::move(subject), std::move(payload)});
    };

    const auto states0 = orbital::propagate(sc.constellation, sc.window.t0_s);
    const auto topo0 = topology::build_topology(states0, sc.sites, sc.policy);
    auto pspec = placement::assign_functions(sc.placement, states0, topo0, sc.sites);
    const auto links0 = placement::derive_logical_links(pspec, sc.sites);
    const auto profile = placement::option_profile(sc.placement.split, sc.placement.extension);

    const int num_sats = topo0.num_sats;
    const int sats_per_plane = sc.constellation.sats_per_plane;

    std::vector<orbital::GroundSite> gateways;
    for (const auto& s : sc.sites)
        if (s.role == orbital::SiteRole::gateway) gateways.push_back(s);

    // Satellites whose logical links ride the feeder: tracked for handover.
    std::set<int> feeder_sats;
    for (const auto& link : links0) {
        if (link.segment != placement::Segment::feeder) continue;
        for (const auto* node : {&link.from_node, &link.to_node}) {
            if (!placement::is_sat_node(*node)) continue;
            const int idx = topo0.node_index(*node);
            if (idx >= 0 && (!sc.policy.feeder_capable ||
                             sc.policy.feeder_capable->contains(
                                 {idx / sats_per_plane, idx % sats_per_plane})))
                feeder_sats.insert(idx);
        }
    }

    std::map<int, FeederState> feeder_state;
    const RicWeights weights{p.w_delay, p.w_load, p.w_quality};
    const double e2_loop_budget_s = [&] {
        const auto it = sc.eval.budget_override_s.find(dimensioning::InterfaceClass::E2);
        if (it != sc.eval.budget_override_s.end())
            return 2.0 * it->second + sc.eval.e2_processing_s;
        return 1.0;  // relaxed near-RT loop bound
    }();

    // Ext II dynamic state.
    const bool ext2 = sc.placement.extension == placement::RicExtension::ext2;
    std::vector<int> ric_sats;
    for (const auto& fn : pspec.instances_of(FunctionKind::NearRT_RIC))
        ric_sats.push_back(fn.instance);
    std::map<FunctionInstance, int> assignment = pspec.e2_serving;
    std::map<FunctionInstance, double> last_reassign;
    std::map<FunctionInstance, ScheduledReassignment> scheduled;
    for (const auto& [node, ric] : assignment)
        last_reassign[node] = -std::numeric_limits<double>::infinity();

    // Ext III cluster state.
    const bool ext3 = sc.placement.extension == placement::RicExtension::ext3;
    ClusterPlan plan;
    std::set<int> failed_sats;
    const std::string nonrt_node = pspec.node_of({FunctionKind::NonRT_RIC, 0});
    if (ext3) {
        const auto spec_plan = pspec.cluster_plan.value_or(placement::ClusterPlanSpec{});
        std::map<int, double> residual;
        for (int i = 0; i < num_sats; ++i) residual[i] = sc.resources.compute_budget_per_sat;
        plan = form_clusters(topo0, sc.constellation.num_planes, sats_per_plane, spec_plan.rule,
                             spec_plan.target_size, residual);
        emit(sc.window.t0_s, EventKind::cluster_reformed, "constellation",
             {{"clusters", plan.clusters.size()}});
    }

    topology::RoutingTable table;
    double table_until = -std::numeric_limits<double>::infinity();
    bool epoch_boundary = false;

    // Lookahead snapshots for prediction, shared across nodes within a step.
    std::map<long long, std::pair<topology::IslTopology, topology::RoutingTable>> lookahead;

    std::vector<double> e2_loops;
    int feasible_steps = 0;
    int total_steps = 0;

    auto ric_loads = [&]() {
        std::map<int, double> loads;
        for (int r : ric_sats) loads[r] = 0.0;
        for (const auto& [node, ric] : assignment) loads[ric] += p.e2_node_weight;
        for (auto& [r, l] : loads) l = std::min(1.0, l / p.ric_capacity);
        return loads;
    };

    auto candidates_for = [&](const topology::IslTopology& topo,
                              const topology::RoutingTable& tab, int host,
                              const std::map<int, double>& loads) {
        std::vector<RicCandidate> cands;
        for (int r : ric_sats) {
            const auto rt = topology::route(tab, topo, host, r);
            if (!rt.found) continue;
            RicCandidate c;
            c.ric = r;
            c.path_delay_s = rt.total_delay_s;
            const auto it = loads.find(r);
            c.load = it == loads.end() ? 0.0 : it->second;
            c.quality = std::max(0.0, 1.0 - rt.total_delay_s / p.quality_delay_scale_s);
            cands.push_back(c);
        }
        return cands;
    };

    for (double t = sc.window.t0_s; t <= sc.window.t1_s + 1e-9; t += sc.window.step_s) {
        ++total_steps;
        const auto states = orbital::propagate(sc.constellation, t);
        const auto topo = topology::build_topology(states, sc.sites, sc.policy);
        epoch_boundary = false;
        if (t >= table_until) {
            table_until = t + p.routing_epoch_s;
            table = topology::build_routing_tables(topo, t, table_until);
            epoch_boundary = true;
            lookahead.clear();
        }

        bool step_violation = false;
        std::vector<feasibility::Violation> extra_violations;

        // Feeder maintenance.
        for (int sat : feeder_sats) {
            auto& fs = feeder_state[sat];
            const auto& node = topo.nodes[static_cast<size_t>(sat)];
            // Finish an in-flight switchover first.
            if (fs.target && t >= fs.complete_at_s - 1e-9) {
                emit(fs.complete_at_s, EventKind::feeder_handover_complete, node,
                     {{"from", fs.current ? nlohmann::json(*fs.current) : nlohmann::json(nullptr)},
                      {"to", *fs.target}});
                fs.current = fs.target;
                fs.target.reset();
            }
            const auto decision =
                feeder_assignment(states[static_cast<size_t>(sat)], gateways, t, fs.current,
                                  p.feeder_hysteresis_deg);
            if (!decision.gateway) {
                if (!fs.in_outage) {
                    fs.in_outage = true;
                    emit(t, EventKind::budget_violation, node, {{"reason", "feeder-outage"}});
                }
                extra_violations.push_back({"feeder-outage", node, "no visible gateway"});
                step_violation = true;
                fs.current.reset();
                fs.target.reset();
                continue;
            }
            fs.in_outage = false;
            if (!fs.current) {
                fs.current = decision.gateway;  // initial acquisition
                continue;
            }
            if (decision.transition && !fs.target) {
                fs.target = decision.gateway;
                fs.complete_at_s = t + p.dual_feeder_interval_s;
                emit(t, EventKind::feeder_handover_start, node,
                     {{"from", *fs.current},
                      {"to", *fs.target},
                      {"dual_interval_s", p.dual_feeder_interval_s}});
                if (profile.requires_dual_feeder && p.n_ues > 0) {
                    const double bytes =
                        group_ue_handover_cost(p.n_ues, p.msgs_per_ue, p.msg_size_bytes);
                    emit(t, EventKind::group_ue_handover, node,
                         {{"n_ues", p.n_ues}, {"bytes", bytes}});
                    const double burst_bps = bytes * 8.0 / p.dual_feeder_interval_s;
                    result.summary.peak_feeder_demand_bps =
                        std::max(result.summary.peak_feeder_demand_bps, burst_bps);
                    if (burst_bps > sc.traffic.feeder_capacity_bps) {
                        emit(t, EventKind::budget_violation, node,
                             {{"reason", "feeder-burst"}, {"burst_bps", burst_bps}});
                        extra_violations.push_back(
                            {"feeder-burst", node, "group handover exceeds feeder capacity"});
                        step_violation = true;
                    }
                }
            }
        }

        // Ext II: keep every E2 node attached to a reachable, in-budget RIC.
        if (ext2) {
            auto loads = ric_loads();
            for (auto& [e2_node, serving] : assignment) {
                const int host = e2_node.instance;
                const std::string subject = e2_node.str();

                if (auto it = scheduled.find(e2_node);
                    it != scheduled.end() && t >= it->second.migrate_at_s - 1e-9) {
                    if (it->second.target_ric != serving) {
                        emit(t, EventKind::e2_reassignment, subject,
                             {{"from", serving},
                              {"to", it->second.target_ric},
                              {"predicted", true},
                              {"context_bytes", p.context_size_bytes}});
                        serving = it->second.target_ric;
                        last_reassign[e2_node] = t;
                        ++result.summary.e2_reassignment_count;
                    }
                    scheduled.erase(it);
                    continue;
                }

                const auto cands = candidates_for(topo, table, host, loads);
                bool serving_ok = false;
                for (const auto& c : cands) {
                    if (c.ric == serving &&
                        feasibility::e2_loop_latency_s(c.path_delay_s, sc.eval.e2_processing_s) <=
                            e2_loop_budget_s) {
                        serving_ok = true;
                        break;
                    }
                }

                if (!serving_ok) {
                    const auto target = select_near_rt_ric(cands, std::nullopt, weights, 0.0);
                    if (!target) {
                        emit(t, EventKind::budget_violation, subject,
                             {{"reason", "e2-unassigned"}});
                        extra_violations.push_back(
                            {"e2-unassigned", subject, "no reachable near-RT RIC"});
                        step_violation = true;
                        result.summary.unassigned_time_s += sc.window.step_s;
                        continue;
                    }
                    emit(t, EventKind::e2_reassignment, subject,
                         {{"from", serving},
                          {"to", *target},
                          {"predicted", false},
                          {"context_bytes", p.context_size_bytes}});
                    serving = *target;
                    last_reassign[e2_node] = t;
                    ++result.summary.e2_reassignment_count;
                    // Reactive migration leaves a service gap.
                    result.summary.unassigned_time_s += p.migration_delay_s;
                    scheduled.erase(e2_node);
                    continue;
                }

                if (t - last_reassign[e2_node] >= p.min_reassign_interval_s) {
                    const auto sel =
                        select_near_rt_ric(cands, serving, weights, p.reassignment_hysteresis);
                    if (sel && *sel != serving) {
                        emit(t, EventKind::e2_reassignment, subject,
                             {{"from", serving},
                              {"to", *sel},
                              {"predicted", false},
                              {"reason", "score"},
                              {"context_bytes", p.context_size_bytes}});
                        serving = *sel;
                        last_reassign[e2_node] = t;
                        ++result.summary.e2_reassignment_count;
                        scheduled.erase(e2_node);
                        continue;
                    }
                }

                if (p.predictive && epoch_boundary && !scheduled.contains(e2_node)) {
                    auto candidates_at = [&](double tf) {
                        const long long key = std::llround(tf * 1e3);
                        auto it = lookahead.find(key);
                        if (it == lookahead.end()) {
                            auto fstates = orbital::propagate(sc.constellation, tf);
                            auto ftopo = topology::build_topology(fstates, sc.sites, sc.policy);
                            auto ftab = topology::build_routing_tables(ftopo, tf, tf);
                            it = lookahead.emplace(key, std::make_pair(std::move(ftopo),
                                                                       std::move(ftab)))
                                     .first;
                        }
                        return candidates_for(it->second.first, it->second.second, host, loads);
                    };
                    const auto pred = predict_reassignment(
                        serving, candidates_at, t, p.prediction_horizon_s, p.prediction_guard_s,
                        p.prediction_step_s, e2_loop_budget_s, sc.eval.e2_processing_s, weights);
                    if (pred) scheduled[e2_node] = *pred;
                }
            }
            pspec.e2_serving = assignment;
        }

        // Ext III: leader health and follower loop budget.
        if (ext3) {
            for (const auto& f : p.leader_failures) {
                if (t < f.time_s - 1e-9 || t >= f.time_s + sc.window.step_s - 1e-9) continue;
                if (failed_sats.contains(f.sat)) continue;
                failed_sats.insert(f.sat);
                for (auto& c : plan.clusters) {
                    if (c.leader != f.sat) continue;
                    int new_leader = -1;
                    double best = -std::numeric_limits<double>::infinity();
                    for (int m : c.members) {
                        if (failed_sats.contains(m)) continue;
                        const double r = sc.resources.compute_budget_per_sat;
                        if (r > best) {
                            best = r;
                            new_leader = m;
                        }
                    }
                    if (new_leader >= 0) {
                        emit(t, EventKind::leader_changed,
                             topo.nodes[static_cast<size_t>(c.leader)],
                             {{"cluster_leader_from", c.leader}, {"cluster_leader_to", new_leader}});
                        c.leader = new_leader;
                        ++result.summary.leader_changed_count;
                    }
                }
            }
            for (const auto& link : hierarchy_links(plan, nonrt_node, topo)) {
                if (link.segment != placement::Segment::isl_path) continue;
                const int a = topo.node_index(link.from_node);
                const int b = topo.node_index(link.to_node);
                const auto rt = topology::route(table, topo, a, b);
                if (!rt.found) {
                    emit(t, EventKind::budget_violation, link.id(),
                         {{"reason", "leader-unreachable"}});
                    extra_violations.push_back({"leader-unreachable", link.id(), ""});
                    step_violation = true;
                    continue;
                }
                const double loop =
                    feasibility::e2_loop_latency_s(rt.total_delay_s, sc.eval.e2_processing_s);
                if (loop > p.follower_loop_budget_s) {
                    emit(t, EventKind::budget_violation, link.id(),
                         {{"reason", "follower-loop"}, {"loop_s", loop}});
                    extra_violations.push_back({"follower-loop", link.id(), ""});
                    step_violation = true;
                }
            }
        }

        auto report = feasibility::evaluate_snapshot(pspec, topo, table, sc.sites, sc.traffic,
                                                     sc.resources, t, sc.eval);
        for (auto& v : extra_violations) report.violations.push_back(std::move(v));
        if (!report.violations.empty()) report.overall = feasibility::Verdict::infeasible;
        for (const auto& lr : report.per_link)
            if (lr.loop_latency_s) e2_loops.push_back(*lr.loop_latency_s);
        if (report.overall == feasibility::Verdict::feasible && !step_violation)
            ++feasible_steps;
        result.reports.push_back(std::move(report));
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const SimEvent& a, const SimEvent& b) { return a.time_s < b.time_s; });

    auto& s = result.summary;
    s.total_steps = total_steps;
    s.feasible_steps = feasible_steps;
    s.availability = total_steps ? static_cast<double>(feasible_steps) / total_steps : 0.0;
    s.violation_time_fraction = 1.0 - s.availability;
    for (const auto& e : events) {
        switch (e.kind) {
            case EventKind::feeder_handover_complete: ++s.feeder_handover_count; break;
            case EventKind::group_ue_handover: ++s.group_ue_handover_count; break;
            case EventKind::cluster_reformed: ++s.cluster_reformed_count; break;
            case EventKind::budget_violation: ++s.budget_violation_count; break;
            default: break;
        }
    }
    if (!e2_loops.empty()) {
        double sum = 0.0;
        for (double v : e2_loops) sum += v;
        s.mean_e2_loop_s = sum / static_cast<double>(e2_loops.size());
        std::sort(e2_loops.begin(), e2_loops.end());
        const size_t idx = static_cast<size_t>(
            std::ceil(0.95 * static_cast<double>(e2_loops.size()))) - 1;
        s.p95_e2_loop_s = e2_loops[std::min(idx, e2_loops.size() - 1)];
    }
    return result;
}

void write_event_log(const EventLog& log, std::ostream& os) {
    for (const auto& e : log) {
        nlohmann::json j = {{"time_s", e.time_s},
                            {"kind", to_string(e.kind)},
                            {"subject", e.subject},
                            {"payload", e.payload}};
        os << j.dump() << '\n';
    }
}

EventLog read_event_log(std::istream& is) {
    EventLog log;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        log.push_back({j.at("time_s").get<double>(), event_kind_from_string(j.at("kind")),
                       j.at("subject").get<std::string>(), j.at("payload")});
    }
    return log;
}

void write_event_summary_csv(const EventLog& log, std::ostream& os) {
    os << "kind,count\n";
    for (auto k : {EventKind::feeder_handover_start, EventKind::feeder_handover_complete,
                   EventKind::e2_reassignment, EventKind::cluster_reformed,
                   EventKind::leader_changed, EventKind::budget_violation,
                   EventKind::group_ue_handover}) {
        size_t count = 0;
        for (const auto& e : log)
            if (e.kind == k) ++count;
        os << to_string(k) << ',' << count << '\n';
    }
}

nlohmann::json to_json(const Summary& s) {
    return {{"total_steps", s.total_steps},
            {"feasible_steps", s.feasible_steps},
            {"availability", s.availability},
            {"violation_time_fraction", s.violation_time_fraction},
            {"feeder_handover_count", s.feeder_handover_count},
            {"e2_reassignment_count", s.e2_reassignment_count},
            {"group_ue_handover_count", s.group_ue_handover_count},
            {"cluster_reformed_count", s.cluster_reformed_count},
            {"leader_changed_count", s.leader_changed_count},
            {"budget_violation_count", s.budget_violation_count},
            {"unassigned_time_s", s.unassigned_time_s},
            {"peak_feeder_demand_bps", s.peak_feeder_demand_bps},
            {"mean_e2_loop_s", s.mean_e2_loop_s},
            {"p95_e2_loop_s", s.p95_e2_loop_s}};
}

}  // namespace ntnsim::dynamics
