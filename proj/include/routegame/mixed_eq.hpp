#pragma once

#include <vector>

#include "routegame/assign.hpp"
#include "routegame/delay.hpp"
#include "routegame/network.hpp"

namespace routegame {

struct VerifyViolation {
    int od = -1;
    int path = -1;        // used path with excess delay
    int better_path = -1; // cheaper alternative in the same O/D pair
    double excess = 0.0;  // e_path - e_better
};

struct VerifyReport {
    bool feasible = false;
    double max_residual = 0.0;
    std::vector<double> residuals; // two per O/D pair: regular, autonomous

    bool wardrop = false;
    double max_excess = 0.0;
    std::vector<VerifyViolation> violations;

    std::vector<double> od_delay; // e_w(f) = min path delay

    double epsilon = 0.0;
    double flow_epsilon = 0.0;

    bool pass() const { return feasible && wardrop; }
};

// Checks feasibility (class conservation, nonnegativity) and the Wardrop
// conditions: every path carrying more than flow_epsilon of either class must
// be within epsilon*(1+|e_w|) of the O/D's minimum delay.
VerifyReport verify_equilibrium(const Network& net, const DemandSpec& demand,
                                const PathSet& paths, const FlowVector& f,
                                double epsilon = 1e-6, double flow_epsilon = 1e-7);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct EqSetOptions {
    int max_total_paths = 16;
    long max_support_combos = 100000;
    double lp_tol = 1e-9;
    bool link_ranges = true;
    bool od_ranges = true;
};

// Outcome for one support pattern (path subsets permitted to carry flow,
// listed as per-O/D local path indices).
struct SupportOutcome {
    std::vector<std::vector<int>> pattern;
    bool feasible = false;
    double j_min = 0.0;
    double j_max = 0.0;
};

struct EquilibriumSet {
    double j_min = 0.0;
    double j_max = 0.0;
    FlowVector witness_min;
    FlowVector witness_max;
    std::vector<Range> link_flow; // per link, over all equilibria (if enabled)
    std::vector<Range> od_delay;  // per O/D pair (if enabled)
    std::vector<SupportOutcome> supports;
    long supports_total = 0;
    long supports_feasible = 0;
};

// Exact description of the Wardrop equilibrium set for affine delays
// (beta = 1 on every link): enumerates path supports per O/D pair and solves
// a pair of LPs per support for the social-delay extrema, plus per-link and
// per-O/D extrema. Throws SolverError if some beta != 1 or limits are hit.
EquilibriumSet equilibrium_set(const Network& net, const DemandSpec& demand,
                               const PathSet& paths, const EqSetOptions& options = {});

struct MixedResult {
    double social = 0.0;          // J, unique under homogeneous mu
    FlowVector witness;           // one equilibrium of the mixed game
    std::vector<double> od_delay; // e_w
    double asymmetry = 1.0;
    AssignmentResult reduced;     // solution of the reduced single-class game
};

// Social delay of the mixed game via the homogeneous-mu reduction
// (any beta). The witness lifts each reduced path flow back to class flows
// by the proportional split fr = f~ (1-alpha) r / r~, fa = f~ alpha r / r~.
MixedResult solve_mixed_homogeneous(const Network& net, const DemandSpec& demand,
                                    const PathSet& paths, const SolveOptions& options = {});

} // namespace routegame
