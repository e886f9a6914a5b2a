#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "routegame/errors.hpp"

namespace routegame {

// Per-link parameters of the volume-delay model
//   e_l(fr, fa) = a * (1 + gamma * (fr/m + fa/M)^beta)
// where m is the capacity with regular vehicles only and M the capacity
// with autonomous vehicles only.
struct LinkParams {
    double free_flow = 0.0;      // a, time units
    double congestion = 0.0;     // gamma, dimensionless
    double exponent = 1.0;       // beta > 0
    double cap_regular = 1.0;    // m > 0
    double cap_autonomous = 1.0; // M > 0

    // Degree of capacity asymmetry mu = m / M.
    double asymmetry() const { return cap_regular / cap_autonomous; }
};

struct Link {
    int id = 0;   // external identifier, unique positive integer
    int tail = -1;
    int head = -1;
    LinkParams params;
};

struct OdPair {
    int origin = -1;
    int destination = -1;
};

// Directed multigraph with mixed-autonomy link parameters. Parallel links
// between the same node pair are allowed; link identity is positional.
// Immutable after validation; safe to share across threads.
struct Network {
    std::vector<std::string> nodes;
    std::vector<Link> links;
    std::vector<OdPair> od_pairs;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t link_count() const { return links.size(); }
    std::size_t od_count() const { return od_pairs.size(); }

    // Index of a node name, -1 if absent.
    int node_index(std::string_view name) const;

    // Outgoing link indices per node, links in ascending index order.
    std::vector<std::vector<int>> adjacency() const;
};

// Demand r_w > 0 and autonomy fraction alpha_w in [0,1] per O/D pair.
struct DemandSpec {
    std::vector<double> rates;
    std::vector<double> autonomy;
};

// Checks all structural invariants. Appends non-fatal findings (e.g. a link
// with m/M > 1) to `warnings` when given. Throws ValidationError otherwise.
void validate(const Network& net, const DemandSpec& demand,
              std::vector<std::string>* warnings = nullptr);

using Path = std::vector<int>; // sequence of link indices

// All simple paths per O/D pair, flattened in O/D-major order and sorted
// lexicographically by link-index sequence within each O/D pair.
struct PathSet {
    std::vector<Path> paths;
    std::vector<int> od_of_path;  // O/D index per path
    std::vector<int> offsets;     // size od_count()+1, paths of od w are [offsets[w], offsets[w+1])

    int total() const { return offsets.empty() ? 0 : offsets.back(); }
    int count(int od) const { return offsets[od + 1] - offsets[od]; }
    int global_index(int od, int k) const { return offsets[od] + k; }
    const Path& path(int od, int k) const { return paths[global_index(od, k)]; }
};

// Exhaustive depth-first enumeration of simple paths. Throws PathLimitError
// if any O/D pair has more than `max_paths_per_od` simple paths; the exact
// solvers rely on the path set being complete.
PathSet enumerate_paths(const Network& net, int max_paths_per_od = 64);

} // namespace routegame
