#pragma once

#include <vector>

#include "routegame/delay.hpp"
#include "routegame/network.hpp"

namespace routegame {

// Single-class routing game: demand vector over the O/D pairs of `network`
// with link delays evaluated against the regular capacities only,
//   e~_l(x) = a * (1 + gamma * (x/m)^beta).
// Produced either as the all-regular baseline or by the homogeneous-mu
// reduction of a mixed game.
struct SingleClassGame {
    Network network;
    std::vector<double> demand;  // r~_w > 0
    double asymmetry = 1.0;      // common mu used by the reduction (1 for baseline)
};

// Single-class delay e~_l and its flow derivative.
double reduced_delay(const LinkParams& p, double flow);
double reduced_delay_derivative(const LinkParams& p, double flow);

// Closed form of integral_0^x e~_l(s) ds (Beckmann term):
//   a x + a gamma x^(beta+1) / (m^beta (beta+1)).
double reduced_delay_integral(const LinkParams& p, double flow);

// Baseline game with the given regular demand (no reduction).
SingleClassGame single_class_game(const Network& net, const std::vector<double>& demand);

// Homogeneous-mu reduction: requires all links to share mu = m/M within
// relative tolerance mu_tol; reduced demand r~_w = (1-alpha_w) r_w + mu alpha_w r_w.
// Throws HeterogeneityError otherwise.
SingleClassGame reduce_homogeneous(const Network& net, const DemandSpec& demand,
                                   double mu_tol = 1e-9);

struct SolveOptions {
    double rel_gap_tol = 1e-8;
    int max_iter = 100000;
    double flow_epsilon = 1e-7;  // flows below this count as unused
    bool polish = true;          // active-set refinement after Frank-Wolfe
};

struct AssignmentResult {
    std::vector<double> path_flow;        // reduced flow per enumerated path
    std::vector<double> link_flow;        // f~_l
    std::vector<double> od_delay;         // e~_w = shortest-path delay at the solution
    double beckmann = 0.0;                // potential value at the solution
    double relative_gap = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> beckmann_history; // potential after each Frank-Wolfe step
};

// Wardrop equilibrium of a single-class game: minimizes the Beckmann
// potential by Frank-Wolfe with all-or-nothing shortest-path steps and exact
// line search, then refines the active path set by Newton's method.
// Non-convergence returns the best iterate with converged = false.
AssignmentResult solve_single_class(const SingleClassGame& game, const PathSet& paths,
                                    const SolveOptions& options = {});

// Per-commodity link flows of a solution (for conservation checks).
std::vector<double> commodity_link_flow(const Network& net, const PathSet& paths,
                                        const AssignmentResult& result, int od);

struct PathCost {
    Path links;
    double cost = 0.0;
};

// Minimum-cost simple path under nonnegative link costs; equal-cost ties are
// broken toward the lexicographically smallest link-index sequence.
PathCost shortest_path(const Network& net, const std::vector<double>& link_cost,
                       int origin, int destination);

} // namespace routegame
