#include "ntnsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace ntnsim::topology {

namespace {

double latitude_deg(const orbital::Vec3& pos) {
    return std::asin(pos.z / pos.norm()) * 180.0 / std::numbers::pi;
}

}  // namespace

std::string to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::intra_plane: return "intra_plane";
        case EdgeKind::inter_plane: return "inter_plane";
        case EdgeKind::feeder: return "feeder";
    }
    throw std::logic_error("bad EdgeKind");
}

int IslTopology::node_index(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
}

int IslTopology::isl_degree(int n) const {
    int d = 0;
    for (const auto& nb : adj[static_cast<size_t>(n)])
        if (nb.kind != EdgeKind::feeder) ++d;
    return d;
}

std::optional<double> IslTopology::edge_delay(int a, int b) const {
    for (const auto& nb : adj[static_cast<size_t>(a)])
        if (nb.node == b) return nb.delay_s;
    return std::nullopt;
}

IslTopology build_topology(const std::vector<orbital::SatelliteState>& states,
                           const std::vector<orbital::GroundSite>& sites,
                           const TopologyPolicy& policy) {
    IslTopology topo;
    if (states.empty()) throw std::invalid_argument("no satellite states");
    topo.time_s = states.front().time_s;

    int num_planes = 0;
    int sats_per_plane = 0;
    for (const auto& st : states) {
        num_planes = std::max(num_planes, st.id.plane + 1);
        sats_per_plane = std::max(sats_per_plane, st.id.slot + 1);
    }
    if (static_cast<int>(states.size()) != num_planes * sats_per_plane)
        throw std::invalid_argument("states do not form a full plane/slot grid");

    topo.num_sats = static_cast<int>(states.size());
    std::vector<const orbital::SatelliteState*> grid(states.size(), nullptr);
    auto sat_index = [&](int plane, int slot) { return plane * sats_per_plane + slot; };
    for (const auto& st : states) grid[static_cast<size_t>(sat_index(st.id.plane, st.id.slot))] = &st;

    topo.nodes.reserve(states.size() + sites.size());
    for (int p = 0; p < num_planes; ++p)
        for (int s = 0; s < sats_per_plane; ++s)
            topo.nodes.push_back(orbital::SatId{p, s}.str());

    std::vector<orbital::GroundSite> sorted_sites = sites;
    std::sort(sorted_sites.begin(), sorted_sites.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& site : sorted_sites) topo.nodes.push_back(site.id);

    for (int i = 0; i < static_cast<int>(topo.nodes.size()); ++i)
        topo.index[topo.nodes[static_cast<size_t>(i)]] = i;

    auto add_edge = [&](int a, int b, double delay, EdgeKind kind) {
        topo.edges.push_back({a, b, delay, kind});
    };

    // Intra-plane ring: slot i to i+1 (mod S).
    for (int p = 0; p < num_planes; ++p) {
        for (int s = 0; s < sats_per_plane; ++s) {
            const int next = (s + 1) % sats_per_plane;
            if (next == s) continue;                  // single-sat plane
            if (sats_per_plane == 2 && s == 1) continue;  // avoid duplicate pair
            const auto& a = *grid[static_cast<size_t>(sat_index(p, s))];
            const auto& b = *grid[static_cast<size_t>(sat_index(p, next))];
            add_edge(sat_index(p, s), sat_index(p, next),
                     orbital::propagation_delay_s(a.position_km, b.position_km),
                     EdgeKind::intra_plane);
        }
    }

    // Inter-plane +grid: same slot, plane p to p+1 (mod P), subject to latitude
    // cutoff and range limit.
    for (int p = 0; p < num_planes; ++p) {
        const int next_p = (p + 1) % num_planes;
        if (next_p == p) continue;
        if (num_planes == 2 && p == 1) continue;
        for (int s = 0; s < sats_per_plane; ++s) {
            const auto& a = *grid[static_cast<size_t>(sat_index(p, s))];
            const auto& b = *grid[static_cast<size_t>(sat_index(next_p, s))];
            if (std::abs(latitude_deg(a.position_km)) > policy.interplane_lat_cutoff_deg ||
                std::abs(latitude_deg(b.position_km)) > policy.interplane_lat_cutoff_deg)
                continue;
            const double range = (a.position_km - b.position_km).norm();
            if (range > policy.max_isl_range_km) continue;
            add_edge(sat_index(p, s), sat_index(next_p, s), range / orbital::kLightSpeedKmPerS,
                     EdgeKind::inter_plane);
        }
    }

    // Feeder edges for visible (sat, gateway) pairs, filtered by policy.
    for (const auto& st : states) {
        if (policy.feeder_capable && !policy.feeder_capable->contains(st.id)) continue;
        for (const auto& site : sorted_sites) {
            if (site.role != orbital::SiteRole::gateway) continue;
            if (!orbital::visible(st, site)) continue;
            const auto site_pos = orbital::site_position_eci(site, topo.time_s);
            add_edge(sat_index(st.id.plane, st.id.slot), topo.index.at(site.id),
                     orbital::propagation_delay_s(st.position_km, site_pos), EdgeKind::feeder);
        }
    }

    for (const auto& st : states) {
        if (!policy.feeder_capable || policy.feeder_capable->contains(st.id))
            topo.feeder_capable_nodes.insert(sat_index(st.id.plane, st.id.slot));
    }

    topo.adj.resize(topo.nodes.size());
    for (const auto& e : topo.edges) {
        topo.adj[static_cast<size_t>(e.a)].push_back({e.b, e.one_way_delay_s, e.kind});
        topo.adj[static_cast<size_t>(e.b)].push_back({e.a, e.one_way_delay_s, e.kind});
    }
    return topo;
}

RoutingTable::RoutingTable(const IslTopology& topo, double valid_from_s, double valid_until_s)
    : topo_(std::make_shared<IslTopology>(topo)),
      valid_from_(valid_from_s),
      valid_until_(valid_until_s),
      cache_(std::make_shared<Cache>()) {}

const RoutingTable::DestTree& RoutingTable::tree_for(int dest) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->trees.find(dest);
    if (it != cache_->trees.end()) return it->second;

    const auto& topo = *topo_;
    const int n = static_cast<int>(topo.nodes.size());
    DestTree tree;
    tree.dist.assign(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    tree.next.assign(static_cast<size_t>(n), -1);

    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    tree.dist[static_cast<size_t>(dest)] = 0.0;
    pq.push({0.0, dest});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > tree.dist[static_cast<size_t>(u)]) continue;
        for (const auto& nb : topo.adj[static_cast<size_t>(u)]) {
            const double nd = d + nb.delay_s;
            if (nd < tree.dist[static_cast<size_t>(nb.node)]) {
                tree.dist[static_cast<size_t>(nb.node)] = nd;
                pq.push({nd, nb.node});
            }
        }
    }

    // Next hop toward dest: neighbor minimizing dist + edge weight, ties broken
    // by lowest node identifier.
    for (int u = 0; u < n; ++u) {
        if (u == dest) {
            tree.next[static_cast<size_t>(u)] = dest;
            continue;
        }
        if (!std::isfinite(tree.dist[static_cast<size_t>(u)])) continue;
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (const auto& nb : topo.adj[static_cast<size_t>(u)]) {
            const double cost = tree.dist[static_cast<size_t>(nb.node)] + nb.delay_s;
            const bool better =
                cost < best_cost ||
                (cost == best_cost && best >= 0 &&
                 topo.nodes[static_cast<size_t>(nb.node)] < topo.nodes[static_cast<size_t>(best)]);
            if (better) {
                best = nb.node;
                best_cost = cost;
            }
        }
        tree.next[static_cast<size_t>(u)] = best;
    }

    return cache_->trees.emplace(dest, std::move(tree)).first->second;
}

int RoutingTable::next_hop(int node, int dest) const {
    if (!topo_) throw std::logic_error("empty routing table");
    return tree_for(dest).next[static_cast<size_t>(node)];
}

double RoutingTable::distance_s(int node, int dest) const {
    if (!topo_) throw std::logic_error("empty routing table");
    return tree_for(dest).dist[static_cast<size_t>(node)];
}

RoutingTable build_routing_tables(const IslTopology& topo, double valid_from_s,
                                  double valid_until_s) {
    return RoutingTable(topo, valid_from_s, valid_until_s);
}

Route route(const RoutingTable& table, const IslTopology& topo, int src, int dst) {
    Route r;
    if (src == dst) {
        r.found = true;
        return r;  // empty route, 0 delay
    }
    int cur = src;
    r.hops.push_back(cur);
    const int max_steps = static_cast<int>(topo.nodes.size());
    for (int step = 0; step < max_steps; ++step) {
        const int nxt = table.next_hop(cur, dst);
        if (nxt < 0) return Route{};  // no route
        const auto delay = topo.edge_delay(cur, nxt);
        if (!delay) return Route{};
        r.total_delay_s += *delay;
        r.hops.push_back(nxt);
        cur = nxt;
        if (cur == dst) {
            r.found = true;
            return r;
        }
    }
    return Route{};  // loop guard; unreachable for a consistent table
}

std::set<int> k_hop_neighborhood(const IslTopology& topo, int node, int k) {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    std::set<int> seen{node};
    std::vector<int> frontier{node};
    for (int depth = 0; depth < k; ++depth) {
        std::vector<int> next;
        for (int u : frontier) {
            for (const auto& nb : topo.adj[static_cast<size_t>(u)]) {
                if (nb.kind == EdgeKind::feeder) continue;
                if (seen.insert(nb.node).second) next.push_back(nb.node);
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

void dump_edges(const IslTopology& topo, std::ostream& os) {
    for (const auto& e : topo.edges) {
        os << topo.nodes[static_cast<size_t>(e.a)] << ' ' << topo.nodes[static_cast<size_t>(e.b)]
           << ' ' << to_string(e.kind) << ' ' << e.one_way_delay_s * 1e6 << '\n';
    }
}

}  // namespace ntnsim::topology
