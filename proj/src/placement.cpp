#include "ntnsim/placement.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace ntnsim::placement {

using dimensioning::InterfaceClass;

namespace {

const orbital::GroundSite* find_site(const std::vector<orbital::GroundSite>& sites,
                                     orbital::SiteRole role) {
    const orbital::GroundSite* best = nullptr;
    for (const auto& s : sites) {
        if (s.role != role) continue;
        if (!best || s.id < best->id) best = &s;
    }
    return best;
}

// First site with the given role, falling back through the remaining roles.
const orbital::GroundSite* pick_site(const std::vector<orbital::GroundSite>& sites,
                                     std::initializer_list<orbital::SiteRole> roles) {
    for (auto role : roles) {
        if (const auto* s = find_site(sites, role)) return s;
    }
    return nullptr;
}

}  // namespace

bool is_sat_node(const std::string& node_id) { return node_id.starts_with("sat-"); }

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::RU: return "RU";
        case FunctionKind::DU: return "DU";
        case FunctionKind::CU_CP: return "CU_CP";
        case FunctionKind::CU_UP: return "CU_UP";
        case FunctionKind::UPF: return "UPF";
        case FunctionKind::SEC: return "SEC";
        case FunctionKind::NearRT_RIC: return "NearRT_RIC";
        case FunctionKind::NearRT_RIC_DU_part: return "NearRT_RIC_DU_part";
        case FunctionKind::NearRT_RIC_CU_part: return "NearRT_RIC_CU_part";
        case FunctionKind::NonRT_RIC: return "NonRT_RIC";
        case FunctionKind::NonRT_RIC_cluster_leader: return "NonRT_RIC_cluster_leader";
        case FunctionKind::SMO: return "SMO";
        case FunctionKind::Core_CP: return "Core_CP";
        case FunctionKind::DataNetwork: return "DataNetwork";
    }
    throw std::logic_error("bad FunctionKind");
}

FunctionKind function_kind_from_string(const std::string& s) {
    for (auto k : {FunctionKind::RU, FunctionKind::DU, FunctionKind::CU_CP, FunctionKind::CU_UP,
                   FunctionKind::UPF, FunctionKind::SEC, FunctionKind::NearRT_RIC,
                   FunctionKind::NearRT_RIC_DU_part, FunctionKind::NearRT_RIC_CU_part,
                   FunctionKind::NonRT_RIC, FunctionKind::NonRT_RIC_cluster_leader,
                   FunctionKind::SMO, FunctionKind::Core_CP, FunctionKind::DataNetwork}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown function kind: " + s);
}

std::string FunctionInstance::str() const {
    return to_string(kind) + "#" + std::to_string(instance);
}

std::string to_string(SplitOption split) {
    switch (split) {
        case SplitOption::o1a: return "1a";
        case SplitOption::o1b: return "1b";
        case SplitOption::o2a: return "2a";
        case SplitOption::o2b_ru_separate: return "2b_ru_separate";
        case SplitOption::o2b_cu_separate: return "2b_cu_separate";
        case SplitOption::o3a: return "3a";
        case SplitOption::o3b: return "3b";
    }
    throw std::logic_error("bad SplitOption");
}

SplitOption split_option_from_string(const std::string& s) {
    for (auto o : {SplitOption::o1a, SplitOption::o1b, SplitOption::o2a,
                   SplitOption::o2b_ru_separate, SplitOption::o2b_cu_separate, SplitOption::o3a,
                   SplitOption::o3b}) {
        if (to_string(o) == s) return o;
    }
    throw std::invalid_argument("unknown split option: " + s);
}

std::string to_string(RicExtension ext) {
    switch (ext) {
        case RicExtension::none: return "none";
        case RicExtension::ext1: return "ext1";
        case RicExtension::ext2: return "ext2";
        case RicExtension::ext3: return "ext3";
    }
    throw std::logic_error("bad RicExtension");
}

RicExtension ric_extension_from_string(const std::string& s) {
    for (auto e : {RicExtension::none, RicExtension::ext1, RicExtension::ext2,
                   RicExtension::ext3}) {
        if (to_string(e) == s) return e;
    }
    throw std::invalid_argument("unknown RIC extension: " + s);
}

bool cu_in_space(SplitOption split) {
    return split != SplitOption::o1a && split != SplitOption::o1b;
}

bool compatible(SplitOption split, RicExtension ext) {
    switch (ext) {
        case RicExtension::none: return true;
        case RicExtension::ext1: return !cu_in_space(split);
        case RicExtension::ext2:
        case RicExtension::ext3: return cu_in_space(split);
    }
    return false;
}

std::string to_string(Segment seg) {
    switch (seg) {
        case Segment::local: return "local";
        case Segment::feeder: return "feeder";
        case Segment::isl_path: return "isl_path";
        case Segment::terrestrial: return "terrestrial";
    }
    throw std::logic_error("bad Segment");
}

std::string LogicalLink::id() const {
    return from.str() + "@" + from_node + "->" + to.str() + "@" + to_node;
}

std::string PlacementSpec::node_of(const FunctionInstance& fn) const {
    auto it = assignments.find(fn);
    if (it == assignments.end())
        throw std::invalid_argument("no assignment for " + fn.str());
    return it->second;
}

std::vector<FunctionInstance> PlacementSpec::instances_of(FunctionKind kind) const {
    std::vector<FunctionInstance> out;
    for (const auto& [fn, node] : assignments)
        if (fn.kind == kind) out.push_back(fn);
    return out;
}

std::string to_string(ComputeClass c) {
    switch (c) {
        case ComputeClass::light: return "light";
        case ComputeClass::gnb: return "gnb";
        case ComputeClass::gnb_upf: return "gnb_upf";
    }
    throw std::logic_error("bad ComputeClass");
}

OptionProfile option_profile(SplitOption split, RicExtension ext) {
    if (!compatible(split, ext))
        throw std::invalid_argument("incompatible split/extension pair: " + to_string(split) +
                                    " + " + to_string(ext));
    OptionProfile p;
    switch (split) {
        case SplitOption::o1a:
        case SplitOption::o1b:
            p.feeder_carries = {InterfaceClass::F1_C, InterfaceClass::F1_U};
            p.requires_dual_feeder = true;
            p.new_fronthaul_needed = (split == SplitOption::o1b);
            p.onboard_compute_class = ComputeClass::light;
            break;
        case SplitOption::o2a:
        case SplitOption::o2b_ru_separate:
        case SplitOption::o2b_cu_separate:
            p.feeder_carries = {InterfaceClass::N2, InterfaceClass::N3};
            p.new_fronthaul_needed = (split == SplitOption::o2b_ru_separate);
            p.onboard_compute_class = ComputeClass::gnb;
            break;
        case SplitOption::o3a:
        case SplitOption::o3b:
            p.feeder_carries = {InterfaceClass::N2, InterfaceClass::N4};
            p.onboard_compute_class = ComputeClass::gnb_upf;
            p.local_breakout = true;
            break;
    }
    return p;
}

ValidationResult validate_placement(const PlacementSpec& spec,
                                    const std::vector<orbital::GroundSite>& sites) {
    ValidationResult result;
    auto violate = [&](std::string rule, std::string detail) {
        result.issues.push_back({std::move(rule), std::move(detail)});
    };

    if (!compatible(spec.split, spec.extension)) {
        if (spec.extension == RicExtension::ext1)
            violate("ext1-requires-ground-cu",
                    "Extension I pairs with a ground CU (options 1a/1b)");
        else
            violate(to_string(spec.extension) + "-requires-space-cu",
                    "Extensions II/III pair with a space CU (options 2a/2b/3a/3b)");
    }

    if (spec.extension != RicExtension::ext1) {
        for (const auto& [fn, node] : spec.assignments) {
            if (fn.kind == FunctionKind::NearRT_RIC_DU_part ||
                fn.kind == FunctionKind::NearRT_RIC_CU_part)
                violate("ext1-parts-only", fn.str() + " requires extension I");
        }
    }
    if (spec.extension != RicExtension::ext3) {
        for (const auto& [fn, node] : spec.assignments) {
            if (fn.kind == FunctionKind::NonRT_RIC_cluster_leader)
                violate("ext3-leader-only", fn.str() + " requires extension III");
        }
    }

    auto node_or_empty = [&](FunctionInstance fn) -> std::string {
        auto it = spec.assignments.find(fn);
        return it == spec.assignments.end() ? std::string{} : it->second;
    };
    auto site_role = [&](const std::string& node) -> std::optional<orbital::SiteRole> {
        for (const auto& s : sites)
            if (s.id == node) return s.role;
        return std::nullopt;
    };

    // Reference integrity.
    for (const auto& [ru, du] : spec.ru_to_du) {
        if (node_or_empty({FunctionKind::RU, ru}).empty() ||
            node_or_empty({FunctionKind::DU, du}).empty())
            violate("dangling-ref", "ru_to_du " + std::to_string(ru) + "->" + std::to_string(du));
    }
    for (const auto& [du, cu] : spec.du_to_cu) {
        if (node_or_empty({FunctionKind::DU, du}).empty() ||
            node_or_empty({FunctionKind::CU_CP, cu}).empty() ||
            node_or_empty({FunctionKind::CU_UP, cu}).empty())
            violate("dangling-ref", "du_to_cu " + std::to_string(du) + "->" + std::to_string(cu));
    }
    for (const auto& [cu, upf] : spec.cu_to_upf) {
        if (node_or_empty({FunctionKind::CU_UP, cu}).empty() ||
            node_or_empty({FunctionKind::UPF, upf}).empty())
            violate("dangling-ref", "cu_to_upf " + std::to_string(cu) + "->" + std::to_string(upf));
    }
    if (!result.issues.empty()) return result;

    const bool ground_cu = !cu_in_space(spec.split);

    for (const auto& fn : spec.instances_of(FunctionKind::CU_CP)) {
        const auto node = spec.node_of(fn);
        if (ground_cu) {
            if (is_sat_node(node))
                violate("1a-cu-ground", fn.str() + " must be on a ground site for option " +
                                            to_string(spec.split));
            else if (auto role = site_role(node);
                     role && *role != orbital::SiteRole::gateway && *role != orbital::SiteRole::core)
                violate("cu-site-role", fn.str() + " must sit on a gateway or core site");
        } else if (!is_sat_node(node)) {
            violate("cu-in-space",
                    fn.str() + " must be on a satellite for option " + to_string(spec.split));
        }
    }

    switch (spec.split) {
        case SplitOption::o1a: {
            for (const auto& [ru, du] : spec.ru_to_du) {
                if (spec.node_of({FunctionKind::RU, ru}) != spec.node_of({FunctionKind::DU, du}))
                    violate("1a-ru-du-colocated",
                            "RU#" + std::to_string(ru) + " must share its DU's satellite");
            }
            break;
        }
        case SplitOption::o1b: {
            std::map<int, int> du_ru_count;
            for (const auto& fn : spec.instances_of(FunctionKind::DU)) du_ru_count[fn.instance] = 0;
            for (const auto& [ru, du] : spec.ru_to_du) {
                ++du_ru_count[du];
                const auto ru_node = spec.node_of({FunctionKind::RU, ru});
                const auto du_node = spec.node_of({FunctionKind::DU, du});
                if (ru_node == du_node || !is_sat_node(ru_node))
                    violate("1b-ru-distinct",
                            "RU#" + std::to_string(ru) + " must be a distinct class-2 satellite");
            }
            for (const auto& [du, count] : du_ru_count) {
                if (count != 4)
                    violate("1b-ru-count", "DU#" + std::to_string(du) + " serves " +
                                               std::to_string(count) + " RUs, expected 4");
            }
            break;
        }
        case SplitOption::o2a:
        case SplitOption::o3a: {
            for (const auto& [du, cu] : spec.du_to_cu) {
                const auto du_node = spec.node_of({FunctionKind::DU, du});
                bool colocated = spec.node_of({FunctionKind::CU_CP, cu}) == du_node &&
                                 spec.node_of({FunctionKind::CU_UP, cu}) == du_node;
                for (const auto& [ru, du2] : spec.ru_to_du)
                    if (du2 == du && spec.node_of({FunctionKind::RU, ru}) != du_node)
                        colocated = false;
                if (spec.split == SplitOption::o3a) {
                    auto it = spec.cu_to_upf.find(cu);
                    if (it == spec.cu_to_upf.end() ||
                        spec.node_of({FunctionKind::UPF, it->second}) != du_node)
                        colocated = false;
                }
                if (!colocated)
                    violate(spec.split == SplitOption::o2a ? "2a-colocated" : "3a-colocated",
                            "gNB stack of DU#" + std::to_string(du) +
                                " must share one satellite");
            }
            break;
        }
        case SplitOption::o2b_ru_separate: {
            for (const auto& [ru, du] : spec.ru_to_du) {
                if (spec.node_of({FunctionKind::RU, ru}) == spec.node_of({FunctionKind::DU, du}))
                    violate("2b-ru-separate",
                            "RU#" + std::to_string(ru) + " must be on a different satellite");
            }
            break;
        }
        case SplitOption::o2b_cu_separate:
            break;
        case SplitOption::o3b: {
            for (const auto& [cu, upf] : spec.cu_to_upf) {
                const auto upf_node = spec.node_of({FunctionKind::UPF, upf});
                if (!is_sat_node(upf_node))
                    violate("3b-upf-in-space", "UPF#" + std::to_string(upf));
                else if (upf_node == spec.node_of({FunctionKind::CU_UP, cu}))
                    violate("3b-distinct-sats", "UPF#" + std::to_string(upf) +
                                                    " must not share the gNB satellite");
            }
            break;
        }
    }

    return result;
}

std::vector<LogicalLink> derive_logical_links(const PlacementSpec& spec,
                                              const std::vector<orbital::GroundSite>& sites) {
    const auto validation = validate_placement(spec, sites);
    if (!validation.ok()) {
        std::string msg = "invalid placement:";
        for (const auto& issue : validation.issues) msg += " [" + issue.rule + "]";
        throw std::invalid_argument(msg);
    }

    std::vector<LogicalLink> links;
    auto segment_of = [](const std::string& a, const std::string& b) {
        if (a == b) return Segment::local;
        const bool sa = is_sat_node(a);
        const bool sb = is_sat_node(b);
        if (sa && sb) return Segment::isl_path;
        if (sa || sb) return Segment::feeder;
        return Segment::terrestrial;
    };
    auto add = [&](FunctionInstance from, FunctionInstance to, InterfaceClass cls) {
        const auto from_node = spec.node_of(from);
        const auto to_node = spec.node_of(to);
        links.push_back({from, to, from_node, to_node, cls, segment_of(from_node, to_node)});
    };

    const auto dus = spec.instances_of(FunctionKind::DU);
    const auto cu_cps = spec.instances_of(FunctionKind::CU_CP);
    const auto cu_ups = spec.instances_of(FunctionKind::CU_UP);
    const auto upfs = spec.instances_of(FunctionKind::UPF);
    const auto near_rt_rics = spec.instances_of(FunctionKind::NearRT_RIC);

    // OFH: RU -> DU.
    for (const auto& [ru, du] : spec.ru_to_du)
        add({FunctionKind::RU, ru}, {FunctionKind::DU, du}, InterfaceClass::OFH);

    // F1: DU -> CU (control and user plane).
    for (const auto& [du, cu] : spec.du_to_cu) {
        add({FunctionKind::DU, du}, {FunctionKind::CU_CP, cu}, InterfaceClass::F1_C);
        add({FunctionKind::DU, du}, {FunctionKind::CU_UP, cu}, InterfaceClass::F1_U);
    }

    // E1 only when the scenario requests the CP/UP split explicitly.
    if (spec.split_e1) {
        for (const auto& fn : cu_cps)
            add(fn, {FunctionKind::CU_UP, fn.instance}, InterfaceClass::E1);
    }

    // E2 for every E2 node (DU and CU).
    auto serving_ric = [&](const FunctionInstance& e2_node) -> FunctionInstance {
        if (auto it = spec.e2_serving.find(e2_node); it != spec.e2_serving.end())
            return {FunctionKind::NearRT_RIC, it->second};
        if (near_rt_rics.empty())
            throw std::invalid_argument("no NearRT_RIC instance for " + e2_node.str());
        return near_rt_rics.front();
    };
    if (spec.extension == RicExtension::ext1) {
        for (const auto& du : dus)
            add(du, {FunctionKind::NearRT_RIC_DU_part, du.instance}, InterfaceClass::E2);
        for (const auto& cu : cu_cps)
            add(cu, {FunctionKind::NearRT_RIC_CU_part, 0}, InterfaceClass::E2);
        // Dedicated space-ground coordination interface.
        for (const auto& du : dus)
            add({FunctionKind::NearRT_RIC_DU_part, du.instance},
                {FunctionKind::NearRT_RIC_CU_part, 0}, InterfaceClass::inter_RIC);
    } else {
        for (const auto& du : dus) add(du, serving_ric(du), InterfaceClass::E2);
        for (const auto& cu : cu_cps) add(cu, serving_ric(cu), InterfaceClass::E2);
        if (spec.extension == RicExtension::ext2) {
            for (size_t i = 0; i + 1 < near_rt_rics.size(); ++i)
                add(near_rt_rics[i], near_rt_rics[i + 1], InterfaceClass::inter_RIC);
        }
    }

    // A1 and the Ext III hierarchy.
    const FunctionInstance non_rt{FunctionKind::NonRT_RIC, 0};
    if (spec.extension == RicExtension::ext3) {
        for (const auto& [leader, followers] : spec.cluster_followers) {
            add(non_rt, {FunctionKind::NonRT_RIC_cluster_leader, leader}, InterfaceClass::A1);
            for (int follower : followers)
                add({FunctionKind::NonRT_RIC_cluster_leader, leader},
                    {FunctionKind::NearRT_RIC, follower}, InterfaceClass::A1);
        }
    } else if (spec.extension == RicExtension::ext1) {
        add(non_rt, {FunctionKind::NearRT_RIC_CU_part, 0}, InterfaceClass::A1);
        for (const auto& du : dus)
            add(non_rt, {FunctionKind::NearRT_RIC_DU_part, du.instance}, InterfaceClass::A1);
    } else {
        for (const auto& ric : near_rt_rics) add(non_rt, ric, InterfaceClass::A1);
    }

    // O1: SMO manages DU, CU and near-RT RIC instances (not the RU).
    const FunctionInstance smo{FunctionKind::SMO, 0};
    for (const auto& fn : dus) add(smo, fn, InterfaceClass::O1);
    for (const auto& fn : cu_cps) add(smo, fn, InterfaceClass::O1);
    for (const auto& fn : cu_ups) add(smo, fn, InterfaceClass::O1);
    for (const auto& fn : near_rt_rics) add(smo, fn, InterfaceClass::O1);

    // Core interfaces.
    const FunctionInstance core{FunctionKind::Core_CP, 0};
    for (const auto& cu : cu_cps) add(cu, core, InterfaceClass::N2);
    for (const auto& [cu, upf] : spec.cu_to_upf)
        add({FunctionKind::CU_UP, cu}, {FunctionKind::UPF, upf}, InterfaceClass::N3);
    for (const auto& upf : upfs) add(core, upf, InterfaceClass::N4);
    for (const auto& upf : upfs) {
        const FunctionInstance sec{FunctionKind::SEC, upf.instance};
        if (spec.assignments.contains(sec))
            add(upf, sec, InterfaceClass::N6);
        else
            add(upf, {FunctionKind::DataNetwork, 0}, InterfaceClass::N6);
    }
    // N9 mesh between space UPFs: chain consecutive instances.
    std::vector<FunctionInstance> space_upfs;
    for (const auto& upf : upfs)
        if (is_sat_node(spec.node_of(upf))) space_upfs.push_back(upf);
    for (size_t i = 0; i + 1 < space_upfs.size(); ++i)
        add(space_upfs[i], space_upfs[i + 1], InterfaceClass::N9);

    return links;
}

std::vector<std::vector<int>> partition_clusters(const topology::IslTopology& topo,
                                                 int num_planes, int sats_per_plane,
                                                 ClusterPlanSpec::Rule rule, int target_size) {
    if (target_size < 1) throw std::invalid_argument("cluster target_size must be >= 1");
    std::vector<std::vector<int>> clusters;
    if (rule == ClusterPlanSpec::Rule::by_plane_groups) {
        const int group = std::min(target_size, num_planes);
        for (int p0 = 0; p0 < num_planes; p0 += group) {
            std::vector<int> members;
            for (int p = p0; p < std::min(p0 + group, num_planes); ++p)
                for (int s = 0; s < sats_per_plane; ++s) members.push_back(p * sats_per_plane + s);
            clusters.push_back(std::move(members));
        }
    } else {  // by_k_hop: greedy seed growth with hop radius target_size
        std::vector<bool> claimed(static_cast<size_t>(topo.num_sats), false);
        for (int seed = 0; seed < topo.num_sats; ++seed) {
            if (claimed[static_cast<size_t>(seed)]) continue;
            std::vector<int> members;
            for (int n : topology::k_hop_neighborhood(topo, seed, target_size)) {
                if (n < topo.num_sats && !claimed[static_cast<size_t>(n)]) {
                    claimed[static_cast<size_t>(n)] = true;
                    members.push_back(n);
                }
            }
            std::sort(members.begin(), members.end());
            clusters.push_back(std::move(members));
        }
    }
    return clusters;
}

PlacementSpec assign_functions(const AssignmentTemplate& tmpl,
                               const std::vector<orbital::SatelliteState>& states,
                               const topology::IslTopology& topo,
                               const std::vector<orbital::GroundSite>& sites) {
    if (!compatible(tmpl.split, tmpl.extension))
        throw std::invalid_argument("incompatible split/extension pair");

    int num_planes = 0;
    int sats_per_plane = 0;
    for (const auto& st : states) {
        num_planes = std::max(num_planes, st.id.plane + 1);
        sats_per_plane = std::max(sats_per_plane, st.id.slot + 1);
    }
    const int num_sats = num_planes * sats_per_plane;
    if (num_sats != topo.num_sats || num_sats != static_cast<int>(states.size()))
        throw std::invalid_argument("states and topology disagree");

    const auto* gateway = find_site(sites, orbital::SiteRole::gateway);
    const auto* cu_site = pick_site(sites, {orbital::SiteRole::core, orbital::SiteRole::gateway});
    const auto* core_site = cu_site;
    const auto* smo_site =
        pick_site(sites, {orbital::SiteRole::smo, orbital::SiteRole::core,
                          orbital::SiteRole::gateway});
    const auto* dn_site =
        pick_site(sites, {orbital::SiteRole::data_network, orbital::SiteRole::core,
                          orbital::SiteRole::gateway});
    if (!gateway) throw std::invalid_argument("no gateway site available");

    PlacementSpec spec;
    spec.split = tmpl.split;
    spec.extension = tmpl.extension;
    spec.split_e1 = tmpl.split_e1;
    spec.cluster_plan = tmpl.cluster_plan;

    auto sat_node = [&](int idx) { return topo.nodes[static_cast<size_t>(idx)]; };
    auto place = [&](FunctionKind kind, int instance, const std::string& node) {
        spec.assignments[{kind, instance}] = node;
    };

    // gNB stack per split option. Instance ids equal the hosting satellite's
    // linear index, which keeps assignment deterministic and debuggable.
    std::vector<int> du_sats;
    switch (tmpl.split) {
        case SplitOption::o1a:
            for (int i = 0; i < num_sats; ++i) {
                place(FunctionKind::RU, i, sat_node(i));
                place(FunctionKind::DU, i, sat_node(i));
                spec.ru_to_du[i] = i;
                spec.du_to_cu[i] = 0;
                du_sats.push_back(i);
            }
            place(FunctionKind::CU_CP, 0, cu_site->id);
            place(FunctionKind::CU_UP, 0, cu_site->id);
            break;
        case SplitOption::o1b: {
            std::vector<bool> claimed(static_cast<size_t>(num_sats), false);
            for (int i = 0; i < num_sats; ++i) {
                if (claimed[static_cast<size_t>(i)]) continue;
                std::vector<int> free_neighbors;
                for (int n : topology::k_hop_neighborhood(topo, i, 1)) {
                    if (n != i && n < num_sats && !claimed[static_cast<size_t>(n)])
                        free_neighbors.push_back(n);
                }
                std::sort(free_neighbors.begin(), free_neighbors.end());
                if (static_cast<int>(free_neighbors.size()) < 4) continue;
                claimed[static_cast<size_t>(i)] = true;
                place(FunctionKind::DU, i, sat_node(i));
                spec.du_to_cu[i] = 0;
                du_sats.push_back(i);
                for (int k = 0; k < 4; ++k) {
                    const int r = free_neighbors[static_cast<size_t>(k)];
                    claimed[static_cast<size_t>(r)] = true;
                    place(FunctionKind::RU, r, sat_node(r));
                    spec.ru_to_du[r] = i;
                }
            }
            if (du_sats.empty())
                throw std::invalid_argument("option 1b needs a satellite with 4 free neighbors");
            place(FunctionKind::CU_CP, 0, cu_site->id);
            place(FunctionKind::CU_UP, 0, cu_site->id);
            break;
        }
        case SplitOption::o2a:
        case SplitOption::o3a:
            for (int i = 0; i < num_sats; ++i) {
                place(FunctionKind::RU, i, sat_node(i));
                place(FunctionKind::DU, i, sat_node(i));
                place(FunctionKind::CU_CP, i, sat_node(i));
                place(FunctionKind::CU_UP, i, sat_node(i));
                spec.ru_to_du[i] = i;
                spec.du_to_cu[i] = i;
                du_sats.push_back(i);
            }
            break;
        case SplitOption::o2b_ru_separate: {
            if (sats_per_plane < 2)
                throw std::invalid_argument("option 2b (RU separate) needs >= 2 sats per plane");
            for (int p = 0; p < num_planes; ++p) {
                for (int s = 0; s + 1 < sats_per_plane; s += 2) {
                    const int host = p * sats_per_plane + s;
                    const int ru = host + 1;
                    place(FunctionKind::DU, host, sat_node(host));
                    place(FunctionKind::CU_CP, host, sat_node(host));
                    place(FunctionKind::CU_UP, host, sat_node(host));
                    place(FunctionKind::RU, ru, sat_node(ru));
                    spec.ru_to_du[ru] = host;
                    spec.du_to_cu[host] = host;
                    du_sats.push_back(host);
                }
            }
            break;
        }
        case SplitOption::o2b_cu_separate: {
            for (int p = 0; p < num_planes; ++p) {
                const int cu_host = p * sats_per_plane;  // slot 0 per plane
                place(FunctionKind::CU_CP, cu_host, sat_node(cu_host));
                place(FunctionKind::CU_UP, cu_host, sat_node(cu_host));
                for (int s = 0; s < sats_per_plane; ++s) {
                    const int i = p * sats_per_plane + s;
                    place(FunctionKind::RU, i, sat_node(i));
                    place(FunctionKind::DU, i, sat_node(i));
                    spec.ru_to_du[i] = i;
                    spec.du_to_cu[i] = cu_host;
                    du_sats.push_back(i);
                }
            }
            break;
        }
        case SplitOption::o3b: {
            if (sats_per_plane < 2)
                throw std::invalid_argument("option 3b needs >= 2 sats per plane");
            for (int p = 0; p < num_planes; ++p) {
                for (int s = 0; s + 1 < sats_per_plane; s += 2) {
                    const int gnb = p * sats_per_plane + s;
                    const int upf = gnb + 1;
                    place(FunctionKind::RU, gnb, sat_node(gnb));
                    place(FunctionKind::DU, gnb, sat_node(gnb));
                    place(FunctionKind::CU_CP, gnb, sat_node(gnb));
                    place(FunctionKind::CU_UP, gnb, sat_node(gnb));
                    place(FunctionKind::UPF, upf, sat_node(upf));
                    place(FunctionKind::SEC, upf, sat_node(upf));
                    spec.ru_to_du[gnb] = gnb;
                    spec.du_to_cu[gnb] = gnb;
                    spec.cu_to_upf[gnb] = upf;
                    du_sats.push_back(gnb);
                }
            }
            break;
        }
    }

    // User-plane anchors for the non-3b options.
    if (tmpl.split == SplitOption::o3a) {
        for (int i = 0; i < num_sats; ++i) {
            place(FunctionKind::UPF, i, sat_node(i));
            place(FunctionKind::SEC, i, sat_node(i));
            spec.cu_to_upf[i] = i;
        }
    } else if (tmpl.split != SplitOption::o3b) {
        place(FunctionKind::UPF, 0, core_site->id);
        for (const auto& [du, cu] : spec.du_to_cu) spec.cu_to_upf[cu] = 0;
    }

    place(FunctionKind::Core_CP, 0, core_site->id);
    place(FunctionKind::DataNetwork, 0, dn_site->id);
    place(FunctionKind::SMO, 0, smo_site->id);
    place(FunctionKind::NonRT_RIC, 0, smo_site->id);

    // RIC layout per extension.
    std::set<int> cu_hosts;
    for (const auto& fn : spec.instances_of(FunctionKind::CU_CP)) cu_hosts.insert(fn.instance);

    switch (tmpl.extension) {
        case RicExtension::none:
            place(FunctionKind::NearRT_RIC, 0, cu_site->id);
            break;
        case RicExtension::ext1:
            for (int d : du_sats)
                place(FunctionKind::NearRT_RIC_DU_part, d,
                      spec.node_of({FunctionKind::DU, d}));
            place(FunctionKind::NearRT_RIC_CU_part, 0, cu_site->id);
            break;
        case RicExtension::ext2: {
            std::vector<int> ric_sats;
            if (tmpl.ric_count <= 0) {
                for (int p = 0; p < num_planes; ++p) ric_sats.push_back(p * sats_per_plane);
            } else {
                const int count = std::min(tmpl.ric_count, num_sats);
                for (int k = 0; k < count; ++k)
                    ric_sats.push_back(static_cast<int>(
                        static_cast<long long>(k) * num_sats / count));
            }
            std::sort(ric_sats.begin(), ric_sats.end());
            ric_sats.erase(std::unique(ric_sats.begin(), ric_sats.end()), ric_sats.end());
            for (int r : ric_sats) place(FunctionKind::NearRT_RIC, r, sat_node(r));

            // Initial serving RIC: nearest by ISL hops, ties to the lowest id.
            std::vector<int> nearest(static_cast<size_t>(num_sats), -1);
            std::vector<int> dist(static_cast<size_t>(num_sats), -1);
            std::deque<int> queue;
            for (int r : ric_sats) {
                nearest[static_cast<size_t>(r)] = r;
                dist[static_cast<size_t>(r)] = 0;
                queue.push_back(r);
            }
            while (!queue.empty()) {
                const int u = queue.front();
                queue.pop_front();
                for (const auto& nb : topo.adj[static_cast<size_t>(u)]) {
                    if (nb.kind == topology::EdgeKind::feeder || nb.node >= num_sats) continue;
                    if (dist[static_cast<size_t>(nb.node)] < 0) {
                        dist[static_cast<size_t>(nb.node)] = dist[static_cast<size_t>(u)] + 1;
                        nearest[static_cast<size_t>(nb.node)] = nearest[static_cast<size_t>(u)];
                        queue.push_back(nb.node);
                    }
                }
            }
            auto serving_of = [&](int sat) {
                return nearest[static_cast<size_t>(sat)] >= 0 ? nearest[static_cast<size_t>(sat)]
                                                              : ric_sats.front();
            };
            for (int d : du_sats) spec.e2_serving[{FunctionKind::DU, d}] = serving_of(d);
            for (int c : cu_hosts) spec.e2_serving[{FunctionKind::CU_CP, c}] = serving_of(c);
            break;
        }
        case RicExtension::ext3: {
            const auto plan = tmpl.cluster_plan.value_or(ClusterPlanSpec{});
            spec.cluster_plan = plan;
            const auto clusters =
                partition_clusters(topo, num_planes, sats_per_plane, plan.rule, plan.target_size);
            for (const auto& members : clusters) {
                const int leader = *std::min_element(members.begin(), members.end());
                place(FunctionKind::NonRT_RIC_cluster_leader, leader, sat_node(leader));
                std::vector<int> followers;
                for (int m : members) {
                    if (m == leader) continue;
                    place(FunctionKind::NearRT_RIC, m, sat_node(m));
                    followers.push_back(m);
                }
                spec.cluster_followers[leader] = followers;
                // E2 nodes attach to the near-RT RIC on their own satellite,
                // the leader's nodes to the lowest follower.
                for (int m : members) {
                    const int target = (m == leader && !followers.empty()) ? followers.front() : m;
                    if (m == leader && followers.empty()) continue;  // degenerate single-sat cluster
                    if (spec.assignments.contains({FunctionKind::DU, m}))
                        spec.e2_serving[{FunctionKind::DU, m}] = target;
                    if (spec.assignments.contains({FunctionKind::CU_CP, m}))
                        spec.e2_serving[{FunctionKind::CU_CP, m}] = target;
                }
            }
            break;
        }
    }

    return spec;
}

}  // namespace ntnsim::placement
