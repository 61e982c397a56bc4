#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ntnsim/orbital.hpp"

namespace ntnsim::topology {

enum class EdgeKind { intra_plane, inter_plane, feeder };

std::string to_string(EdgeKind kind);

struct TopologyPolicy {
    double max_isl_range_km = std::numeric_limits<double>::infinity();
    // Inter-plane links are severed when either endpoint is above this latitude.
    double interplane_lat_cutoff_deg = 70.0;
    // Satellites allowed to carry feeder links; empty optional = all.
    std::optional<std::set<orbital::SatId>> feeder_capable;

    bool operator==(const TopologyPolicy&) const = default;
};

struct Edge {
    int a = 0;
    int b = 0;
    double one_way_delay_s = 0.0;
    EdgeKind kind = EdgeKind::intra_plane;
};

struct IslTopology {
    double time_s = 0.0;
    // Node ids: satellites first in (plane, slot) order, then sites by id.
    std::vector<std::string> nodes;
    int num_sats = 0;
    std::vector<Edge> edges;
    // Adjacency over all edges (undirected): adj[n] = (neighbor, delay, kind).
    struct Neighbor {
        int node;
        double delay_s;
        EdgeKind kind;
    };
    std::vector<std::vector<Neighbor>> adj;
    std::set<int> feeder_capable_nodes;

    std::unordered_map<std::string, int> index;

    bool is_sat(int n) const { return n < num_sats; }
    // -1 if absent.
    int node_index(const std::string& id) const;
    int isl_degree(int n) const;
    // Delay of the direct edge between two nodes, if any.
    std::optional<double> edge_delay(int a, int b) const;
};

IslTopology build_topology(const std::vector<orbital::SatelliteState>& states,
                           const std::vector<orbital::GroundSite>& sites,
                           const TopologyPolicy& policy = {});

// Delay-optimal next-hop tables over a topology snapshot. Per-destination
// shortest-path trees are computed lazily and cached; the table is logically
// immutable and safe to share across threads.
class RoutingTable {
  public:
    RoutingTable() = default;
    explicit RoutingTable(const IslTopology& topo, double valid_from_s, double valid_until_s);

    double valid_from_s() const { return valid_from_; }
    double valid_until_s() const { return valid_until_; }

    // Next hop from `node` toward `dest`; -1 if unreachable, `dest` itself if node == dest.
    int next_hop(int node, int dest) const;
    // Shortest-path distance in seconds; infinity if unreachable.
    double distance_s(int node, int dest) const;

  private:
    struct DestTree {
        std::vector<double> dist;
        std::vector<int> next;
    };
    struct Cache {
        std::mutex mutex;
        std::unordered_map<int, DestTree> trees;
    };
    const DestTree& tree_for(int dest) const;

    std::shared_ptr<const IslTopology> topo_;
    double valid_from_ = 0.0;
    double valid_until_ = 0.0;
    std::shared_ptr<Cache> cache_;
};

RoutingTable build_routing_tables(const IslTopology& topo, double valid_from_s = 0.0,
                                  double valid_until_s = 0.0);

struct Route {
    bool found = false;
    std::vector<int> hops;  // node indices, src first
    double total_delay_s = 0.0;
    int hop_count() const { return hops.empty() ? 0 : static_cast<int>(hops.size()) - 1; }
};

Route route(const RoutingTable& table, const IslTopology& topo, int src, int dst);

// Nodes reachable from `node` in <= k ISL hops (feeder edges excluded).
std::set<int> k_hop_neighborhood(const IslTopology& topo, int node, int k);

// Debug edge list: one edge per line (id, id, kind, delay in us).
void dump_edges(const IslTopology& topo, std::ostream& os);

}  // namespace ntnsim::topology
