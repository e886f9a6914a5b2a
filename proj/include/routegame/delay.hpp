#pragma once

#include <vector>

#include "routegame/network.hpp"

namespace routegame {

struct ClassFlow {
    double regular = 0.0;
    double autonomous = 0.0;
    double total() const { return regular + autonomous; }
};

// Regular and autonomous flow per path, indexed like PathSet::paths.
struct FlowVector {
    std::vector<double> regular;
    std::vector<double> autonomous;

    static FlowVector zeros(int n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

// Mixed-autonomy link delay a*(1 + gamma*(fr/m + fa/M)^beta).
// Throws DomainError if either flow is negative.
double link_delay(const LinkParams& p, double flow_regular, double flow_autonomous);

// Effective capacity m*M / (alpha*m + (1-alpha)*M) at a given autonomous
// share of the link flow. Throws DomainError outside [0,1].
double link_capacity(const LinkParams& p, double alpha_share);

// Aggregates path flows onto links: f_l = sum over paths containing l.
std::vector<ClassFlow> link_flows(const Network& net, const PathSet& paths, const FlowVector& f);

// Delay of one path given precomputed link flows.
double path_delay(const Network& net, const Path& path, const std::vector<ClassFlow>& lf);

// Delays of all paths given precomputed link flows.
std::vector<double> path_delays(const Network& net, const PathSet& paths, const std::vector<ClassFlow>& lf);

// Delay of path `index` under flow vector f (recomputes link flows).
double path_delay(const Network& net, const PathSet& paths, const FlowVector& f, int index);

// Social delay J(f) = sum_p f_p e_p(f).
double social_delay(const Network& net, const PathSet& paths, const FlowVector& f);

// Class-conservation residuals, two per O/D pair:
// [ |sum fr - (1-alpha)r|, |sum fa - alpha r| ] for each w in order.
std::vector<double> feasibility_residuals(const DemandSpec& demand, const PathSet& paths,
                                          const FlowVector& f);

} // namespace routegame
