#include "routegame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "routegame/assign.hpp"

namespace routegame {

namespace {

DemandSpec with_alpha(const DemandSpec& base, double alpha, int od_index) {
    DemandSpec d = base;
    if (od_index < 0) {
        std::fill(d.autonomy.begin(), d.autonomy.end(), alpha);
    } else {
        d.autonomy[od_index] = alpha;
    }
    return d;
}

} // namespace

SweepResult sweep_alpha(const Network& net, const DemandSpec& base,
                        const std::vector<double>& grid, const SweepOptions& options) {
    if (options.od_index >= static_cast<int>(net.od_count()))
        throw DomainError("sweep: O/D index out of range");
    for (double a : grid) {
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("sweep: grid value outside [0,1]");
    }

    const PathSet paths = enumerate_paths(net);

    // Samples are reported in increasing order of the swept coordinate; the
    // monotonicity and paradox verdicts rely on it.
    std::vector<double> ordered = grid;
    std::sort(ordered.begin(), ordered.end());

    SweepResult out;
    for (double alpha : ordered) {
        const DemandSpec demand = with_alpha(base, alpha, options.od_index);
        SweepSample sample;
        sample.alpha = alpha;
        try {
            switch (options.solver) {
                case Solver::support_enum: {
                    auto es = equilibrium_set(net, demand, paths, options.eqset);
                    sample.j_min = es.j_min;
                    sample.j_max = es.j_max;
                    sample.od_delay = es.od_delay;
                    break;
                }
                case Solver::homogeneous: {
                    auto ms = solve_mixed_homogeneous(net, demand, paths, options.fw);
                    sample.j_min = sample.j_max = ms.social;
                    for (double e : ms.od_delay) sample.od_delay.push_back({e, e});
                    break;
                }
                case Solver::single_class: {
                    auto game = single_class_game(net, base.rates);
                    auto res = solve_single_class(game, paths, options.fw);
                    double j = 0.0;
                    for (std::size_t w = 0; w < net.od_count(); ++w)
                        j += base.rates[w] * res.od_delay[w];
                    sample.j_min = sample.j_max = j;
                    for (double e : res.od_delay) sample.od_delay.push_back({e, e});
                    break;
                }
            }
        } catch (const HeterogeneityError& e) {
            std::ostringstream msg;
            msg << "at alpha = " << alpha << ": " << e.what();
            throw HeterogeneityError(msg.str());
        } catch (const SolverError& e) {
            std::ostringstream msg;
            msg << "at alpha = " << alpha << ": " << e.what();
            throw SolverError(msg.str());
        }
        out.samples.push_back(std::move(sample));
    }

    // Monotonicity verdict and paradox flags.
    out.nonincreasing = true;
    for (std::size_t k = 1; k < out.samples.size(); ++k) {
        const double prev = out.samples[k - 1].j_max;
        if (out.samples[k].j_max > prev + options.tol * (1.0 + std::abs(prev)))
            out.nonincreasing = false;
    }

    double run_min_jmax = std::numeric_limits<double>::infinity();
    int run_min_jmax_at = -1;
    for (std::size_t k = 0; k < out.samples.size(); ++k) {
        SweepSample& sample = out.samples[k];
        if (k > 0) {
            if (options.paradox == ParadoxMode::strong) {
                if (sample.j_min > run_min_jmax +
                                       options.tol * (1.0 + std::abs(run_min_jmax))) {
                    sample.paradox = true;
                    if (!out.paradox) {
                        out.paradox_low = run_min_jmax_at;
                        out.paradox_high = static_cast<int>(k);
                    }
                }
            } else {
                const SweepSample& prev = out.samples[k - 1];
                const bool up_max =
                    sample.j_max > prev.j_max + options.tol * (1.0 + std::abs(prev.j_max));
                const bool up_min =
                    sample.j_min > prev.j_min + options.tol * (1.0 + std::abs(prev.j_min));
                if (up_max || up_min) {
                    sample.paradox = true;
                    if (!out.paradox) {
                        out.paradox_low = static_cast<int>(k) - 1;
                        out.paradox_high = static_cast<int>(k);
                    }
                }
            }
            if (sample.paradox) out.paradox = true;
        }
        if (sample.j_max < run_min_jmax) {
            run_min_jmax = sample.j_max;
            run_min_jmax_at = static_cast<int>(k);
        }
    }

    // Attach the class bound when the network admits it.
    try {
        int degree = 0;
        for (const Link& l : net.links) {
            const double beta = l.params.exponent;
            const double rounded = std::round(beta);
            if (std::abs(beta - rounded) > 1e-9 || rounded < 1.0 || rounded > 4.0)
                throw SolverError("no class constant");
            degree = std::max(degree, static_cast<int>(rounded));
        }
        DemandSpec baseline = base;
        std::fill(baseline.autonomy.begin(), baseline.autonomy.end(), 0.0);
        const double j0 = solve_mixed_homogeneous(net, baseline, paths, options.fw).social;
        out.j_baseline = j0;
        out.bound = j0 / (1.0 - lambda_class_bound(degree));
        double worst = 0.0;
        for (const auto& s : out.samples) worst = std::max(worst, s.j_max / j0);
        out.eta_lower = worst;
    } catch (const Error&) {
        // Heterogeneous asymmetry or unsupported exponents: no bound.
    }
    return out;
}

double lambda_of_family(const std::vector<LinkParams>& family,
                        const std::vector<double>& flows, double tol) {
    if (family.size() != flows.size())
        throw DomainError("lambda_of_family: size mismatch");
    double denominator = 0.0;
    for (std::size_t l = 0; l < family.size(); ++l) {
        if (flows[l] < 0.0) throw DomainError("lambda_of_family: negative flow");
        denominator += reduced_delay(family[l], flows[l]) * flows[l];
    }
    if (!(denominator > 0.0)) return 0.0; // 0/0 rule

    double numerator = 0.0;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t l = 0; l < family.size(); ++l) {
        const double v = flows[l];
        if (v <= 0.0) continue;
        const double ev = reduced_delay(family[l], v);
        auto g = [&](double x) { return (ev - reduced_delay(family[l], x)) * x; };
        // e~ is nondecreasing, so the maximizer lies in [0, v].
        double lo = 0.0, hi = v;
        double x1 = hi - golden * (hi - lo);
        double x2 = lo + golden * (hi - lo);
        double g1 = g(x1), g2 = g(x2);
        while (hi - lo > tol) {
            if (g1 < g2) {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = lo + golden * (hi - lo);
                g2 = g(x2);
            } else {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = hi - golden * (hi - lo);
                g1 = g(x1);
            }
        }
        numerator += std::max(0.0, g(0.5 * (lo + hi)));
    }
    return numerator / denominator;
}

double lambda_class_bound(int degree) {
    if (degree < 1 || degree > 4) {
        std::ostringstream msg;
        msg << "lambda_class_bound: unsupported polynomial degree " << degree;
        throw DomainError(msg.str());
    }
    const double d = degree;
    return d * std::pow(d + 1.0, -(d + 1.0) / d);
}

BoundReport autonomy_bound_check(const Network& net, const DemandSpec& base,
                                 const std::vector<double>& grid, int od_index,
                                 const SolveOptions& options) {
    if (od_index >= static_cast<int>(net.od_count()))
        throw DomainError("bound check: O/D index out of range");

    int degree = 0;
    for (const Link& l : net.links) {
        const double beta = l.params.exponent;
        const double rounded = std::round(beta);
        if (std::abs(beta - rounded) > 1e-9 || rounded < 1.0 || rounded > 4.0) {
            std::ostringstream msg;
            msg << "bound check requires integer link exponents in 1..4; link " << l.id
                << " has beta = " << beta;
            throw SolverError(msg.str());
        }
        degree = std::max(degree, static_cast<int>(rounded));
    }

    const PathSet paths = enumerate_paths(net);

    BoundReport rep;
    rep.lambda = lambda_class_bound(degree);
    rep.factor = 1.0 / (1.0 - rep.lambda);

    DemandSpec baseline = base;
    std::fill(baseline.autonomy.begin(), baseline.autonomy.end(), 0.0);
    rep.j_baseline = solve_mixed_homogeneous(net, baseline, paths, options).social;
    rep.bound = rep.factor * rep.j_baseline;

    rep.satisfied = true;
    rep.max_ratio = 0.0;
    for (double alpha : grid) {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw DomainError("bound check: grid value outside [0,1]");
        const DemandSpec demand = with_alpha(base, alpha, od_index);
        const double j = solve_mixed_homogeneous(net, demand, paths, options).social;
        rep.samples.emplace_back(alpha, j);
        rep.max_ratio = std::max(rep.max_ratio, j / rep.j_baseline);
        if (j > rep.bound * (1.0 + 1e-9) + 1e-9) rep.satisfied = false;
    }
    rep.eta_lower = rep.max_ratio;
    return rep;
}

} // namespace routegame
