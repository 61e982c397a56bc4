#include "ntnsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "ntnsim/dimensioning.hpp"
#include "ntnsim/dynamics.hpp"
#include "ntnsim/feasibility.hpp"

namespace ntnsim::cli {

namespace {

bool verbose() {
    const char* v = std::getenv("NTNSIM_LOG");
    return v && *v;
}

int modulation_order(const std::string& s) {
    if (s == "qpsk") return 2;
    if (s == "16qam") return 4;
    if (s == "64qam") return 6;
    if (s == "256qam") return 8;
    throw std::invalid_argument("unknown modulation '" + s + "' (qpsk/16qam/64qam/256qam)");
}

std::string format_rate(double bps) {
    std::ostringstream os;
    os << std::fixed;
    if (bps >= 1e9)
        os << std::setprecision(3) << bps / 1e9 << " Gbps";
    else if (bps >= 1e6)
        os << std::setprecision(3) << bps / 1e6 << " Mbps";
    else
        os << std::setprecision(3) << bps / 1e3 << " kbps";
    return os.str();
}

std::string format_budget(const dimensioning::LatencyBudget& b) {
    std::ostringstream os;
    if (b.max_one_way_s)
        os << *b.max_one_way_s * 1e3 << " ms one-way";
    else
        os << "unbounded";
    if (b.loop_window_s) {
        os << " (loop " << b.loop_window_s->first * 1e3 << "-";
        if (std::isfinite(b.loop_window_s->second))
            os << b.loop_window_s->second * 1e3 << " ms)";
        else
            os << "inf ms)";
    }
    return os.str();
}

}  // namespace

int cmd_dimension(const DimensionArgs& args, std::ostream& out, std::ostream& err) {
    try {
        dimensioning::AirInterfaceConfig cfg;
        cfg.bandwidth_mhz = args.bandwidth_mhz;
        cfg.scs_khz = args.scs_khz;
        cfg.n_prb = args.n_prb;
        cfg.n_layers = args.n_layers;
        cfg.modulation_order = modulation_order(args.modulation);
        cfg.direction = dimensioning::direction_from_string(args.direction == "dl" ? "downlink"
                                                            : args.direction == "ul"
                                                                ? "uplink"
                                                                : args.direction);
        cfg.validate();

        const auto fronthaul = dimensioning::fronthaul_bit_rate(cfg);
        const auto control = dimensioning::fronthaul_control_rate(cfg);
        const auto midhaul = dimensioning::midhaul_bit_rate(cfg);
        out << "interface,rate,latency_budget\n";
        out << "fronthaul (OFH)," << format_rate(fronthaul.bps) << ","
            << format_budget(dimensioning::latency_budget(dimensioning::InterfaceClass::OFH))
            << "\n";
        out << "fronthaul control share," << format_rate(control.bps) << ",\n";
        out << "midhaul (F1-U)," << format_rate(midhaul.bps) << ","
            << format_budget(dimensioning::latency_budget(dimensioning::InterfaceClass::F1_U))
            << "\n";
        out << "midhaul control (F1-C),"
            << format_rate(cfg.direction == dimensioning::Direction::downlink ? 24e6 : 16e6) << ","
            << format_budget(dimensioning::latency_budget(dimensioning::InterfaceClass::F1_C))
            << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        auto sc = scenario::parse_scenario_file(args.scenario_path);
        if (args.seed) sc.seed = *args.seed;
        if (args.format != "csv" && args.format != "json")
            throw std::invalid_argument("format must be csv or json");

        if (verbose()) err << "running scenario '" << sc.name << "'\n";
        const auto result = dynamics::run(sc);

        namespace fs = std::filesystem;
        const fs::path dir(args.out_dir);
        fs::create_directories(dir);

        if (args.format == "csv") {
            std::ofstream series(dir / "feasibility.csv");
            feasibility::write_csv(result.reports, series);
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : result.reports) arr.push_back(feasibility::to_json(r));
            std::ofstream series(dir / "feasibility.json");
            series << arr.dump(2) << "\n";
        }
        {
            std::ofstream ev(dir / "events.ndjson");
            dynamics::write_event_log(result.events, ev);
        }
        {
            std::ofstream evsum(dir / "events_summary.csv");
            dynamics::write_event_summary_csv(result.events, evsum);
        }
        {
            std::ofstream sum(dir / "summary.json");
            sum << dynamics::to_json(result.summary).dump(2) << "\n";
        }
        {
            std::ofstream vio(dir / "violations.csv");
            vio << "time_s,kind,subject,detail\n";
            for (const auto& r : result.reports)
                for (const auto& v : r.violations)
                    vio << r.time_s << ',' << v.kind << ',' << v.subject << ",\"" << v.detail
                        << "\"\n";
        }

        bool any_violation = false;
        for (const auto& r : result.reports)
            any_violation = any_violation || !r.violations.empty();
        out << "scenario: " << sc.name << "\n";
        out << "steps: " << result.summary.total_steps
            << ", availability: " << result.summary.availability << "\n";
        out << "verdict: " << (any_violation ? "violations" : "feasible") << "\n";
        return any_violation ? kExitViolations : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
    try {
        const auto sc = scenario::parse_scenario_file(scenario_path);
        out << "ok: scenario '" << sc.name << "' is valid\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

namespace {

struct CompareColumn {
    std::string label;
    dynamics::Summary summary;
    std::set<std::string> violation_kinds;
    double max_sat_power_w = 0.0;
    bool feasible = true;
};

CompareColumn run_column(const scenario::Scenario& sc, const std::string& label) {
    CompareColumn col;
    col.label = label;
    const auto result = dynamics::run(sc);
    col.summary = result.summary;
    for (const auto& r : result.reports) {
        for (const auto& v : r.violations) col.violation_kinds.insert(v.kind);
        for (const auto& n : r.per_node)
            col.max_sat_power_w = std::max(col.max_sat_power_w, n.power_used_w);
        col.feasible = col.feasible && r.violations.empty();
    }
    return col;
}

void apply_option_token(scenario::Scenario& sc, const std::string& token) {
    const auto plus = token.find('+');
    const std::string split = token.substr(0, plus);
    sc.placement.split = placement::split_option_from_string(split);
    sc.placement.extension =
        plus == std::string::npos
            ? placement::RicExtension::none
            : placement::ric_extension_from_string(token.substr(plus + 1));
    sc.name += " [" + token + "]";
}

}  // namespace

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    try {
        std::vector<CompareColumn> columns;
        if (!args.options.empty()) {
            if (args.scenario_paths.size() != 1)
                throw std::invalid_argument("--options requires exactly one base scenario");
            for (const auto& token : args.options) {
                auto sc = scenario::parse_scenario_file(args.scenario_paths.front());
                apply_option_token(sc, token);
                sc.validate();
                if (verbose()) err << "comparing option " << token << "\n";
                columns.push_back(run_column(sc, token));
            }
        } else {
            if (args.scenario_paths.size() < 2)
                throw std::invalid_argument("compare needs >= 2 scenarios or --options");
            for (const auto& path : args.scenario_paths) {
                const auto sc = scenario::parse_scenario_file(path);
                columns.push_back(run_column(sc, sc.name.empty() ? path : sc.name));
            }
        }

        out << "metric";
        for (const auto& c : columns) out << ',' << c.label;
        out << "\n";
        auto row = [&](const std::string& name, auto getter) {
            out << name;
            for (const auto& c : columns) out << ',' << getter(c);
            out << "\n";
        };
        row("feasible", [](const CompareColumn& c) { return c.feasible ? "yes" : "no"; });
        row("availability",
            [](const CompareColumn& c) { return std::to_string(c.summary.availability); });
        row("violation_classes", [](const CompareColumn& c) {
            std::string s;
            for (const auto& k : c.violation_kinds) s += (s.empty() ? "" : ";") + k;
            return s.empty() ? std::string("-") : s;
        });
        row("feeder_handover_count", [](const CompareColumn& c) {
            return std::to_string(c.summary.feeder_handover_count);
        });
        row("e2_reassignment_count", [](const CompareColumn& c) {
            return std::to_string(c.summary.e2_reassignment_count);
        });
        row("peak_feeder_demand_bps", [](const CompareColumn& c) {
            return std::to_string(c.summary.peak_feeder_demand_bps);
        });
        row("max_sat_power_w",
            [](const CompareColumn& c) { return std::to_string(c.max_sat_power_w); });

        const bool all_feasible =
            std::all_of(columns.begin(), columns.end(), [](const auto& c) { return c.feasible; });
        return all_feasible ? kExitOk : kExitViolations;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace ntnsim::cli
