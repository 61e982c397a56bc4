#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ntnsim/scenario.hpp"

namespace ntnsim::cli {

// Exit statuses shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolations = 2;

struct DimensionArgs {
    double bandwidth_mhz = 100.0;
    int scs_khz = 60;
    int n_prb = 132;
    int n_layers = 1;
    std::string modulation = "64qam";  // qpsk/16qam/64qam/256qam
    std::string direction = "dl";      // dl/ul
};

int cmd_dimension(const DimensionArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
    std::string scenario_path;
    std::string out_dir = ".";
    std::string format = "csv";  // csv or json for the feasibility series
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct CompareArgs {
    // Either >= 2 scenario files, or one base file plus an options list of
    // "split" or "split+ext" tokens (e.g. "2a", "2a+ext2").
    std::vector<std::string> scenario_paths;
    std::vector<std::string> options;
};

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err);

}  // namespace ntnsim::cli
