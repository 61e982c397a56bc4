// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ntnsim/dynamics.hpp"

using namespace ntnsim;
namespace fs = std::filesystem;

namespace {

struct Checker {
    std::ostringstream why;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) why << "; ";
            why << what;
            ok = false;
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Checker&)>& body) {
    Checker c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.ok) {
        std::cout << "PASS criterion " << n << ": " << title << "\n";
    } else {
        std::cout << "FAIL criterion " << n << ": " << title << " (" << c.why.str() << ")\n";
        ++failures;
    }
}

dimensioning::AirInterfaceConfig table_config(double bw, int scs, int prb) {
    dimensioning::AirInterfaceConfig cfg;
    cfg.bandwidth_mhz = bw;
    cfg.scs_khz = scs;
    cfg.n_prb = prb;
    cfg.n_symbols = 14;
    cfg.n_layers = 1;
    cfg.bitwidth = 14;
    cfg.modulation_order = 6;
    return cfg;
}

std::vector<orbital::GroundSite> sites_with_core() {
    return {{"gw-0", 0.0, 0.0, orbital::SiteRole::gateway, 10.0},
            {"core-0", 5.0, 5.0, orbital::SiteRole::core, 10.0}};
}

int run_command(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// A 44-satellite equatorial ring where each hop costs about 3.3 ms, plus the
// management plane parked on the CU satellite so no ground path is involved.
placement::PlacementSpec ring_spec(int cu_index) {
    placement::PlacementSpec spec;
    spec.split = placement::SplitOption::o2b_cu_separate;
    const std::string du_sat = "sat-000-000";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "sat-000-%03d", cu_index);
    const std::string cu_sat = buf;
    using K = placement::FunctionKind;
    spec.assignments[{K::RU, 0}] = du_sat;
    spec.assignments[{K::DU, 0}] = du_sat;
    spec.assignments[{K::CU_CP, 0}] = cu_sat;
    spec.assignments[{K::CU_UP, 0}] = cu_sat;
    spec.assignments[{K::NearRT_RIC, 0}] = cu_sat;
    spec.assignments[{K::NonRT_RIC, 0}] = cu_sat;
    spec.assignments[{K::SMO, 0}] = cu_sat;
    spec.assignments[{K::Core_CP, 0}] = cu_sat;
    spec.ru_to_du[0] = 0;
    spec.du_to_cu[0] = 0;
    return spec;
}

}  // namespace

int main() {
    criterion(1, "fronthaul reference rates within 1 percent", [](Checker& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const struct {
            double bw;
            int scs, prb;
            double gbps;
        } rows[] = {{100, 60, 132, 2.48}, {200, 60, 264, 4.97}, {400, 120, 264, 9.96}};
        for (const auto& r : rows) {
            const double got = dimensioning::fronthaul_bit_rate(table_config(r.bw, r.scs, r.prb)).bps;
            c.expect(std::abs(got - r.gbps * 1e9) / (r.gbps * 1e9) < 0.01,
                     "rate off for " + std::to_string(r.bw) + " MHz");
        }
        const auto elapsed = std::chrono::steady_clock::now() - t0;
        c.expect(elapsed < std::chrono::seconds(1), "took longer than 1 s");
    });

    criterion(2, "midhaul reference rates exact to the Mbps", [](Checker& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const struct {
            double bw;
            int scs, prb;
            double mbps;
        } rows[] = {{100, 60, 132, 399}, {200, 60, 264, 774}, {400, 120, 264, 1524}};
        for (const auto& r : rows) {
            const double got = dimensioning::midhaul_bit_rate(table_config(r.bw, r.scs, r.prb)).bps;
            c.expect(std::llround(got / 1e6) == static_cast<long long>(r.mbps),
                     "midhaul off for " + std::to_string(r.bw) + " MHz");
        }
        const auto elapsed = std::chrono::steady_clock::now() - t0;
        c.expect(elapsed < std::chrono::seconds(1), "took longer than 1 s");
    });

    criterion(3, "anchor constants and latency windows", [](Checker& c) {
        auto anchor = table_config(20, 15, 106);
        anchor.n_layers = 2;
        c.expect(std::abs(dimensioning::fronthaul_control_rate(anchor).bps - 1.856e6) < 1e-3,
                 "control-rate anchor");
        const auto ofh = dimensioning::latency_budget(dimensioning::InterfaceClass::OFH);
        c.expect(ofh.max_one_way_s && *ofh.max_one_way_s == 500e-6, "OFH budget");
        const auto f1u = dimensioning::latency_budget(dimensioning::InterfaceClass::F1_U);
        c.expect(f1u.loop_window_s && f1u.loop_window_s->first == 1.5e-3 &&
                     f1u.loop_window_s->second == 10e-3,
                 "midhaul window");
        const auto f1c = dimensioning::latency_budget(dimensioning::InterfaceClass::F1_C);
        c.expect(f1c.loop_window_s && f1c.loop_window_s->first == 2e-3 &&
                     f1c.loop_window_s->second == 10e-3,
                 "F1-C window");
        const auto e2 = dimensioning::latency_budget(dimensioning::InterfaceClass::E2);
        c.expect(e2.loop_window_s && e2.loop_window_s->first == 10e-3 &&
                     e2.loop_window_s->second == 1.0,
                 "near-RT loop window");
    });

    criterion(4, "geometry bands on the 72x22 shell over 600 s", [](Checker& c) {
        const auto t0 = std::chrono::steady_clock::now();
        orbital::ConstellationConfig cfg;
        cfg.altitude_km = 550.0;
        cfg.inclination_deg = 53.0;
        cfg.num_planes = 72;
        cfg.sats_per_plane = 22;
        const std::vector<orbital::GroundSite> sites = {
            {"gw-0", 0.0, 0.0, orbital::SiteRole::gateway, 10.0},
            {"gw-1", 0.0, 60.0, orbital::SiteRole::gateway, 10.0}};  // 6671 km apart

        bool edge_band_ok = true;
        bool hop_band_ok = true;
        for (int t = 0; t <= 600; ++t) {
            const auto states = orbital::propagate(cfg, t);
            const auto topo = topology::build_topology(states, sites, {});
            // Equator-adjacent inter-plane single hop.
            bool found_edge = false;
            for (const auto& e : topo.edges) {
                if (e.kind != topology::EdgeKind::inter_plane) continue;
                const auto& pa = states[static_cast<size_t>(e.a)].position_km;
                const double lat =
                    std::asin(pa.z / pa.norm()) * 180.0 / 3.14159265358979323846;
                if (std::abs(lat) > 10.0) continue;
                found_edge = true;
                if (e.one_way_delay_s < 1.8e-3 || e.one_way_delay_s > 3.6e-3)
                    edge_band_ok = false;
            }
            if (!found_edge) edge_band_ok = false;

            const auto table = topology::build_routing_tables(topo);
            const int a = topo.node_index("gw-0");
            const int b = topo.node_index("gw-1");
            const auto r = topology::route(table, topo, a, b);
            if (!r.found) {
                hop_band_ok = false;
                continue;
            }
            const int isl_hops = static_cast<int>(r.hops.size()) - 1 - 2;  // minus feeder legs
            if (isl_hops < 6 || isl_hops > 10) hop_band_ok = false;
        }
        c.expect(edge_band_ok, "inter-plane edge delay left [1.8, 3.6] ms near the equator");
        c.expect(hop_band_ok, "gateway route left the 6-10 hop band");
        const auto elapsed = std::chrono::steady_clock::now() - t0;
        c.expect(elapsed < std::chrono::seconds(10), "took longer than 10 s");
    });

    criterion(5, "remote-RU fronthaul infeasible on the 72x22 shell", [](Checker& c) {
        orbital::ConstellationConfig cfg;
        cfg.altitude_km = 550.0;
        cfg.inclination_deg = 53.0;
        cfg.num_planes = 72;
        cfg.sats_per_plane = 22;
        const auto sites = sites_with_core();
        const auto states = orbital::propagate(cfg, 0.0);
        const auto topo = topology::build_topology(states, sites, {});
        const auto table = topology::build_routing_tables(topo);
        placement::AssignmentTemplate tmpl;
        tmpl.split = placement::SplitOption::o1b;
        const auto spec = placement::assign_functions(tmpl, states, topo, sites);

        const auto report = feasibility::evaluate_snapshot(
            spec, topo, table, sites, {}, feasibility::ResourceModel::defaults(), 0.0);
        c.expect(report.overall == feasibility::Verdict::infeasible, "overall verdict");
        int ofh_links = 0;
        for (const auto& lr : report.per_link) {
            if (lr.link.interface_class != dimensioning::InterfaceClass::OFH) continue;
            ++ofh_links;
            c.expect(lr.verdict == feasibility::Verdict::infeasible &&
                         lr.one_way_delay_s > 500e-6,
                     "OFH link " + lr.link.id() + " within budget");
        }
        c.expect(ofh_links > 0, "no OFH links derived");
    });

    criterion(6, "F1-C hop budget: 2 hops feasible, 4 hops not", [](Checker& c) {
        c.expect(dimensioning::max_hops_within_budget(10e-3, 3.3e-3) == 3, "max hops at 3.3 ms");

        orbital::ConstellationConfig cfg;
        cfg.altitude_km = 550.0;
        cfg.inclination_deg = 0.0;
        cfg.num_planes = 1;
        cfg.sats_per_plane = 44;  // one ring hop costs about 3.3 ms
        const auto states = orbital::propagate(cfg, 0.0);
        const auto topo = topology::build_topology(states, {}, {});
        const auto table = topology::build_routing_tables(topo);
        c.expect(std::abs(*topo.edge_delay(0, 1) - 3.3e-3) < 0.1e-3, "per-hop delay anchor");

        const auto near_report = feasibility::evaluate_snapshot(
            ring_spec(2), topo, table, {}, {}, feasibility::ResourceModel::defaults(), 0.0);
        c.expect(near_report.overall == feasibility::Verdict::feasible, "2-hop CU infeasible");
        const auto far_report = feasibility::evaluate_snapshot(
            ring_spec(4), topo, table, {}, {}, feasibility::ResourceModel::defaults(), 0.0);
        c.expect(far_report.overall == feasibility::Verdict::infeasible, "4-hop CU feasible");
        bool f1_violated = false;
        for (const auto& v : far_report.violations) {
            if (v.kind == "latency-budget" && v.subject.find("DU#0") != std::string::npos)
                f1_violated = true;
        }
        c.expect(f1_violated, "no midhaul latency violation at 4 hops");
    });

    criterion(7, "strict near-RT loops need a co-located RIC", [](Checker& c) {
        // Space DU, ground RIC: feeder one-way from 2000 km altitude at zenith.
        const double one_way = 2000.0 / 299792.458;
        c.expect(one_way >= 5e-3, "feeder delay below 5 ms");
        c.expect(feasibility::e2_loop_latency_s(one_way, 1e-3) > 10e-3, "strict loop met");
        c.expect(feasibility::e2_loop_latency_s(0.0, 1e-3) <= 10e-3, "co-located loop missed");

        orbital::ConstellationConfig cfg;
        cfg.altitude_km = 2000.0;
        cfg.inclination_deg = 0.0;
        cfg.num_planes = 1;
        cfg.sats_per_plane = 1;
        const auto sites = sites_with_core();
        const auto states = orbital::propagate(cfg, 0.0);
        const auto topo = topology::build_topology(states, sites, {});
        const auto table = topology::build_routing_tables(topo);

        placement::AssignmentTemplate ground_ric;
        ground_ric.split = placement::SplitOption::o1a;
        auto report = feasibility::evaluate_snapshot(
            placement::assign_functions(ground_ric, states, topo, sites), topo, table, sites, {},
            feasibility::ResourceModel::defaults(), 0.0);
        bool ground_strict = true;
        for (const auto& lr : report.per_link) {
            if (lr.link.interface_class == dimensioning::InterfaceClass::E2 &&
                placement::is_sat_node(lr.link.from_node) && lr.strict_capable)
                ground_strict = ground_strict && *lr.strict_capable;
        }
        c.expect(!ground_strict, "ground RIC marked strict-capable");

        placement::AssignmentTemplate onboard_ric;
        onboard_ric.split = placement::SplitOption::o2a;
        onboard_ric.extension = placement::RicExtension::ext2;
        report = feasibility::evaluate_snapshot(
            placement::assign_functions(onboard_ric, states, topo, sites), topo, table, sites, {},
            feasibility::ResourceModel::defaults(), 0.0);
        bool onboard_strict = false;
        for (const auto& lr : report.per_link) {
            if (lr.link.interface_class == dimensioning::InterfaceClass::E2 && lr.strict_capable)
                onboard_strict = onboard_strict || *lr.strict_capable;
        }
        c.expect(onboard_strict, "co-located RIC not strict-capable");
    });

    criterion(8, "full-gNB power composite and compute overhead bounds", [](Checker& c) {
        const auto resources = feasibility::ResourceModel::defaults();
        const std::vector<placement::FunctionKind> stack = {
            placement::FunctionKind::RU, placement::FunctionKind::DU,
            placement::FunctionKind::CU_CP, placement::FunctionKind::CU_UP};
        const auto report = feasibility::node_resource_check("sat-000-000", stack, resources, true);
        c.expect(std::abs(report.power_used_w - 134.5) < 1e-9, "composite power");

        auto tight = resources;
        tight.power_budget_per_sat_w = 134.4;  // just under the composite draw
        c.expect(feasibility::node_resource_check("sat-000-000", stack, tight, true).verdict ==
                     feasibility::Verdict::infeasible,
                 "budget below the composite draw not flagged");
        tight.power_budget_per_sat_w = 135.0;
        c.expect(feasibility::node_resource_check("sat-000-000", stack, tight, true).verdict ==
                     feasibility::Verdict::feasible,
                 "135 W budget flagged");

        auto bad = resources;
        bad.full_gnb_overhead_factor = 1.54;
        bool threw = false;
        try {
            bad.validate();
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        c.expect(threw, "factor below 1.55 accepted");
        bad.full_gnb_overhead_factor = 1.71;
        threw = false;
        try {
            bad.validate();
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        c.expect(threw, "factor above 1.70 accepted");
        auto edge = resources;
        edge.full_gnb_overhead_factor = 1.70;
        try {
            edge.validate();
        } catch (const std::invalid_argument&) {
            c.expect(false, "factor 1.70 rejected");
        }
    });

    criterion(9, "property suites pass within the time budget", [](Checker& c) {
        const char* bin = std::getenv("NTNSIM_PROPERTIES");
        c.expect(bin != nullptr, "NTNSIM_PROPERTIES not set");
        if (!bin) return;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = run_command(std::string(bin) + " > /dev/null 2>&1");
        const auto elapsed = std::chrono::steady_clock::now() - t0;
        c.expect(rc == 0, "property binary exited with " + std::to_string(rc));
        c.expect(elapsed < std::chrono::seconds(60), "took longer than 60 s");
    });

    criterion(10, "CLI exit statuses and artifact stability", [](Checker& c) {
        const char* cli = std::getenv("NTNSIM_CLI");
        const char* dir = std::getenv("NTNSIM_SCENARIO_DIR");
        c.expect(cli != nullptr, "NTNSIM_CLI not set");
        c.expect(dir != nullptr, "NTNSIM_SCENARIO_DIR not set");
        if (!cli || !dir) return;
        const fs::path scen(dir);
        const fs::path work = fs::temp_directory_path() / "ntnsim-acceptance";
        fs::remove_all(work);
        fs::create_directories(work);
        auto quiet = [&](const std::string& cmd) { return run_command(cmd + " > /dev/null 2>&1"); };

        c.expect(quiet(std::string(cli) + " simulate --scenario " +
                       (scen / "geo_feasible.json").string() + " --out " +
                       (work / "a").string()) == 0,
                 "feasible scenario exit code");
        c.expect(quiet(std::string(cli) + " simulate --scenario " +
                       (scen / "leo_option1b.json").string() + " --out " +
                       (work / "leo").string()) == 2,
                 "violating scenario exit code");
        c.expect(quiet(std::string(cli) + " validate --scenario " +
                       (scen / "invalid_ext1.json").string()) == 1,
                 "invalid scenario exit code");
        c.expect(quiet(std::string(cli) + " simulate --scenario " +
                       (work / "missing.json").string()) == 1,
                 "missing scenario exit code");

        // Re-running the same scenario reproduces every artifact byte for byte.
        c.expect(quiet(std::string(cli) + " simulate --scenario " +
                       (scen / "geo_feasible.json").string() + " --out " +
                       (work / "b").string()) == 0,
                 "second run exit code");
        for (const char* name : {"feasibility.csv", "events.ndjson", "events_summary.csv",
                                 "summary.json", "violations.csv"}) {
            c.expect(slurp(work / "a" / name) == slurp(work / "b" / name),
                     std::string(name) + " not stable across runs");
        }

        // JSON artifacts survive a parse/serialize round trip unchanged.
        c.expect(quiet(std::string(cli) + " simulate --scenario " +
                       (scen / "geo_feasible.json").string() + " --format json --out " +
                       (work / "j").string()) == 0,
                 "json format exit code");
        std::ifstream in(work / "j" / "feasibility.json");
        nlohmann::json arr;
        in >> arr;
        bool stable = arr.is_array() && !arr.empty();
        for (const auto& entry : arr) {
            const auto report = feasibility::report_from_json(entry);
            stable = stable && feasibility::to_json(report).dump() == entry.dump();
        }
        c.expect(stable, "feasibility.json round trip changed the document");
    });

    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
