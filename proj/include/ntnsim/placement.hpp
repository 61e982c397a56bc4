#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ntnsim/dimensioning.hpp"
#include "ntnsim/orbital.hpp"
#include "ntnsim/topology.hpp"

namespace ntnsim::placement {

enum class FunctionKind {
    RU,
    DU,
    CU_CP,
    CU_UP,
    UPF,
    SEC,
    NearRT_RIC,
    NearRT_RIC_DU_part,
    NearRT_RIC_CU_part,
    NonRT_RIC,
    NonRT_RIC_cluster_leader,
    SMO,
    Core_CP,
    DataNetwork,
};

std::string to_string(FunctionKind kind);
FunctionKind function_kind_from_string(const std::string& s);

struct FunctionInstance {
    FunctionKind kind = FunctionKind::RU;
    int instance = 0;

    auto operator<=>(const FunctionInstance&) const = default;
    std::string str() const;
};

enum class SplitOption { o1a, o1b, o2a, o2b_ru_separate, o2b_cu_separate, o3a, o3b };
enum class RicExtension { none, ext1, ext2, ext3 };

std::string to_string(SplitOption split);
SplitOption split_option_from_string(const std::string& s);
std::string to_string(RicExtension ext);
RicExtension ric_extension_from_string(const std::string& s);

bool compatible(SplitOption split, RicExtension ext);
bool cu_in_space(SplitOption split);

enum class Segment { local, feeder, isl_path, terrestrial };

std::string to_string(Segment seg);

struct LogicalLink {
    FunctionInstance from;
    FunctionInstance to;
    std::string from_node;
    std::string to_node;
    dimensioning::InterfaceClass interface_class = dimensioning::InterfaceClass::OFH;
    Segment segment = Segment::local;

    bool operator==(const LogicalLink&) const = default;
    std::string id() const;
};

struct ClusterPlanSpec {
    enum class Rule { by_plane_groups, by_k_hop };
    Rule rule = Rule::by_plane_groups;
    int target_size = 3;  // planes per cluster under by_plane_groups

    bool operator==(const ClusterPlanSpec&) const = default;
};

struct PlacementSpec {
    SplitOption split = SplitOption::o2a;
    RicExtension extension = RicExtension::none;
    // Every instantiated function and its hosting node id.
    std::map<FunctionInstance, std::string> assignments;
    // RU instance -> serving DU instance.
    std::map<int, int> ru_to_du;
    // DU instance -> serving CU instance (CU_CP/CU_UP share instance numbering).
    std::map<int, int> du_to_cu;
    // CU_UP instance -> serving UPF instance.
    std::map<int, int> cu_to_upf;
    // E2 node function -> serving NearRT_RIC instance (Ext II; optional elsewhere).
    std::map<FunctionInstance, int> e2_serving;
    // Ext III resolved clusters: leader NonRT_RIC_cluster_leader instance ->
    // follower NearRT_RIC instances.
    std::map<int, std::vector<int>> cluster_followers;
    std::optional<ClusterPlanSpec> cluster_plan;
    bool split_e1 = false;  // emit an E1 link between CU_CP and CU_UP

    bool operator==(const PlacementSpec&) const = default;

    std::string node_of(const FunctionInstance& fn) const;  // throws if absent
    std::vector<FunctionInstance> instances_of(FunctionKind kind) const;
};

struct ValidationIssue {
    std::string rule;
    std::string detail;
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

ValidationResult validate_placement(const PlacementSpec& spec,
                                    const std::vector<orbital::GroundSite>& sites);

// Complete interface set implied by the spec. Throws std::invalid_argument on
// a spec that fails validate_placement.
std::vector<LogicalLink> derive_logical_links(const PlacementSpec& spec,
                                              const std::vector<orbital::GroundSite>& sites);

enum class ComputeClass { light, gnb, gnb_upf };

std::string to_string(ComputeClass c);

struct OptionProfile {
    std::set<dimensioning::InterfaceClass> feeder_carries;
    bool requires_dual_feeder = false;
    bool new_fronthaul_needed = false;
    ComputeClass onboard_compute_class = ComputeClass::light;
    bool local_breakout = false;
};

// Throws std::invalid_argument on an incompatible pair.
OptionProfile option_profile(SplitOption split, RicExtension ext);

struct AssignmentTemplate {
    SplitOption split = SplitOption::o2a;
    RicExtension extension = RicExtension::none;
    // Ext II: number of NearRT_RIC instances; 0 = one per orbital plane.
    int ric_count = 0;
    std::optional<ClusterPlanSpec> cluster_plan;  // Ext III
    bool split_e1 = false;

    bool operator==(const AssignmentTemplate&) const = default;
};

// Deterministic (lowest-id first) concrete assignment. Throws
// std::invalid_argument when the template's structural constraints cannot be
// satisfied by the given nodes.
PlacementSpec assign_functions(const AssignmentTemplate& tmpl,
                               const std::vector<orbital::SatelliteState>& states,
                               const topology::IslTopology& topo,
                               const std::vector<orbital::GroundSite>& sites);

bool is_sat_node(const std::string& node_id);

// Partition of satellite indices into clusters under the given rule. Every
// satellite lands in exactly one cluster.
std::vector<std::vector<int>> partition_clusters(const topology::IslTopology& topo,
                                                 int num_planes, int sats_per_plane,
                                                 ClusterPlanSpec::Rule rule, int target_size);

}  // namespace ntnsim::placement
