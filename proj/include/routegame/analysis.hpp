#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "routegame/mixed_eq.hpp"
#include "routegame/network.hpp"

namespace routegame {

enum class Solver { support_enum, homogeneous, single_class };
enum class ParadoxMode { strong, weak };

struct SweepOptions {
    Solver solver = Solver::support_enum;
    ParadoxMode paradox = ParadoxMode::strong;
    int od_index = -1; // -1: apply the swept alpha to every O/D pair
    double tol = 1e-6; // relative tolerance for comparisons between J values
    SolveOptions fw;
    EqSetOptions eqset;
};

struct SweepSample {
    double alpha = 0.0;
    double j_min = 0.0;
    double j_max = 0.0;
    bool paradox = false;
    std::vector<Range> od_delay;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    bool nonincreasing = false; // J_max nonincreasing along the grid
    bool paradox = false;
    int paradox_low = -1;  // witnessing pair of grid indices, low < high
    int paradox_high = -1;

    // Set when the network admits the class bound (homogeneous mu, integer
    // exponents <= 4): (1-lambda)^-1 J(0) and the grid estimate of the
    // worst-case delay inflation.
    std::optional<double> j_baseline;
    std::optional<double> bound;
    std::optional<double> eta_lower;
};

// Evaluates J_min/J_max on a grid of autonomy fractions. Strong paradox: a
// sample's J_min exceeds the J_max of some lower-alpha sample (the delay
// increase holds whichever equilibrium is realized). Weak paradox: either
// bound increases from one grid point to the next.
SweepResult sweep_alpha(const Network& net, const DemandSpec& base,
                        const std::vector<double>& grid, const SweepOptions& options = {});

// lambda((e~_l), v) = max_{x >= 0} sum_l (e~_l(v_l) - e~_l(x_l)) x_l / sum_l e~_l(v_l) v_l,
// with 0/0 taken as 0. Each per-link maximization is solved by golden-section
// search on [0, v_l].
double lambda_of_family(const std::vector<LinkParams>& family,
                        const std::vector<double>& flows, double tol = 1e-10);

// Class constant for polynomial delay families of degree <= `degree`:
// lambda = degree (degree+1)^(-(degree+1)/degree). Supported degrees 1..4.
double lambda_class_bound(int degree);

struct BoundReport {
    double j_baseline = 0.0; // J at alpha = 0
    double lambda = 0.0;
    double factor = 0.0;     // (1 - lambda)^-1
    double bound = 0.0;      // factor * j_baseline
    double max_ratio = 0.0;  // max over the grid of J(alpha)/J(0)
    double eta_lower = 0.0;  // grid lower estimate of the worst-case ratio
    bool satisfied = false;
    std::vector<std::pair<double, double>> samples; // (alpha, J)
};

// Checks J(alpha) <= (1-lambda)^-1 J(0) on a grid of autonomy fractions.
// Requires homogeneous mu and integer link exponents <= 4.
BoundReport autonomy_bound_check(const Network& net, const DemandSpec& base,
                                 const std::vector<double>& grid, int od_index = -1,
                                 const SolveOptions& options = {});

} // namespace routegame
