#include "routegame/network.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace routegame {

int Network::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::vector<int>> Network::adjacency() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (std::size_t l = 0; l < links.size(); ++l) {
        out[links[l].tail].push_back(static_cast<int>(l));
    }
    return out;
}

namespace {

bool reachable(const Network& net, const std::vector<std::vector<int>>& adj,
               int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(net.node_count(), 0);
    std::queue<int> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int l : adj[u]) {
            int v = net.links[l].head;
            if (v == to) return true;
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
        }
    }
    return false;
}

} // namespace

void validate(const Network& net, const DemandSpec& demand,
              std::vector<std::string>* warnings) {
    const int n = static_cast<int>(net.node_count());
    if (n == 0) throw ValidationError("network has no nodes");

    {
        std::set<std::string> names(net.nodes.begin(), net.nodes.end());
        if (names.size() != net.nodes.size())
            throw ValidationError("duplicate node identifiers");
    }

    std::set<int> ids;
    for (std::size_t i = 0; i < net.links.size(); ++i) {
        const Link& l = net.links[i];
        std::ostringstream where;
        where << "link " << l.id << " (index " << i << ")";
        if (l.id <= 0) throw ValidationError(where.str() + ": id must be a positive integer");
        if (!ids.insert(l.id).second)
            throw ValidationError(where.str() + ": duplicate link id");
        if (l.tail < 0 || l.tail >= n || l.head < 0 || l.head >= n)
            throw ValidationError(where.str() + ": endpoint references an unknown node");
        if (l.tail == l.head)
            throw ValidationError(where.str() + ": self-loops are not allowed");
        const LinkParams& p = l.params;
        if (!(p.free_flow >= 0.0)) throw ValidationError(where.str() + ": a must be >= 0");
        if (!(p.congestion >= 0.0)) throw ValidationError(where.str() + ": gamma must be >= 0");
        if (!(p.exponent > 0.0)) throw ValidationError(where.str() + ": beta must be > 0");
        if (!(p.cap_regular > 0.0)) throw ValidationError(where.str() + ": m must be > 0");
        if (!(p.cap_autonomous > 0.0)) throw ValidationError(where.str() + ": M must be > 0");
        if (p.asymmetry() > 1.0 && warnings != nullptr) {
            std::ostringstream w;
            w << "link " << l.id << ": m/M = " << p.asymmetry()
              << " > 1 (autonomous vehicles reduce capacity on this link)";
            warnings->push_back(w.str());
        }
    }

    if (net.od_pairs.empty()) throw ValidationError("at least one O/D pair is required");
    if (demand.rates.size() != net.od_count() || demand.autonomy.size() != net.od_count())
        throw ValidationError("demand vectors must match the number of O/D pairs");

    const auto adj = net.adjacency();
    for (std::size_t w = 0; w < net.od_pairs.size(); ++w) {
        const OdPair& od = net.od_pairs[w];
        std::ostringstream where;
        where << "O/D pair " << w;
        if (od.origin < 0 || od.origin >= n || od.destination < 0 || od.destination >= n)
            throw ValidationError(where.str() + ": endpoint references an unknown node");
        if (od.origin == od.destination)
            throw ValidationError(where.str() + ": origin equals destination");
        if (!(demand.rates[w] > 0.0))
            throw ValidationError(where.str() + ": demand r must be > 0");
        if (!(demand.autonomy[w] >= 0.0 && demand.autonomy[w] <= 1.0))
            throw ValidationError(where.str() + ": alpha must lie in [0,1]");
        if (!reachable(net, adj, od.origin, od.destination))
            throw ValidationError(where.str() + ": no directed path from origin to destination");
    }
}

namespace {

void dfs_paths(const Network& net, const std::vector<std::vector<int>>& adj,
               int node, int destination, std::vector<char>& visited, Path& stack,
               std::vector<Path>& out, int limit) {
    if (node == destination) {
        if (static_cast<int>(out.size()) >= limit) {
            std::ostringstream msg;
            msg << "more than " << limit << " simple paths for an O/D pair";
            throw PathLimitError(msg.str());
        }
        out.push_back(stack);
        return;
    }
    visited[node] = 1;
    for (int l : adj[node]) {
        int next = net.links[l].head;
        if (visited[next]) continue;
        stack.push_back(l);
        dfs_paths(net, adj, next, destination, visited, stack, out, limit);
        stack.pop_back();
    }
    visited[node] = 0;
}

} // namespace

PathSet enumerate_paths(const Network& net, int max_paths_per_od) {
    const auto adj = net.adjacency();
    PathSet ps;
    ps.offsets.push_back(0);
    for (std::size_t w = 0; w < net.od_pairs.size(); ++w) {
        std::vector<Path> found;
        std::vector<char> visited(net.node_count(), 0);
        Path stack;
        dfs_paths(net, adj, net.od_pairs[w].origin, net.od_pairs[w].destination,
                  visited, stack, found, max_paths_per_od);
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        for (auto& p : found) {
            ps.paths.push_back(std::move(p));
            ps.od_of_path.push_back(static_cast<int>(w));
        }
        ps.offsets.push_back(static_cast<int>(ps.paths.size()));
    }
    return ps;
}

} // namespace routegame
