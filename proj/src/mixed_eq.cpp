#include "routegame/mixed_eq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "routegame/simplex.hpp"

namespace routegame {

VerifyReport verify_equilibrium(const Network& net, const DemandSpec& demand,
                                const PathSet& paths, const FlowVector& f,
                                double epsilon, double flow_epsilon) {
    const int np = paths.total();
    if (static_cast<int>(f.regular.size()) != np ||
        static_cast<int>(f.autonomous.size()) != np)
        throw DomainError("flow vector size does not match the path set");

    VerifyReport rep;
    rep.epsilon = epsilon;
    rep.flow_epsilon = flow_epsilon;

    // Feasibility: nonnegativity and class conservation.
    FlowVector clamped = f;
    double worst_negative = 0.0;
    for (int p = 0; p < np; ++p) {
        worst_negative = std::min({worst_negative, f.regular[p], f.autonomous[p]});
        clamped.regular[p] = std::max(clamped.regular[p], 0.0);
        clamped.autonomous[p] = std::max(clamped.autonomous[p], 0.0);
    }
    rep.residuals = feasibility_residuals(demand, paths, f);
    rep.max_residual = -worst_negative;
    for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
    rep.feasible = rep.max_residual <= epsilon;

    // Wardrop conditions on the clamped flows.
    const auto lf = link_flows(net, paths, clamped);
    const auto delays = path_delays(net, paths, lf);
    rep.od_delay.assign(net.od_count(), 0.0);
    rep.wardrop = true;
    for (std::size_t w = 0; w < net.od_count(); ++w) {
        double e_w = std::numeric_limits<double>::infinity();
        int best = -1;
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            if (delays[p] < e_w) {
                e_w = delays[p];
                best = p;
            }
        }
        rep.od_delay[w] = e_w;
        const double tol = epsilon * (1.0 + std::abs(e_w));
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            if (clamped.regular[p] <= flow_epsilon && clamped.autonomous[p] <= flow_epsilon)
                continue;
            const double excess = delays[p] - e_w;
            rep.max_excess = std::max(rep.max_excess, excess);
            if (excess > tol) {
                rep.wardrop = false;
                rep.violations.push_back({static_cast<int>(w), p, best, excess});
            }
        }
    }
    return rep;
}

namespace {

struct PathCoefficients {
    // Affine path delays for beta = 1:
    //   e_p(f) = constant[p] + sum_q (regular[p][q] fr_q + autonomous[p][q] fa_q)
    std::vector<double> constant;
    std::vector<std::vector<double>> regular;
    std::vector<std::vector<double>> autonomous;
};

PathCoefficients path_coefficients(const Network& net, const PathSet& paths) {
    const int np = paths.total();
    PathCoefficients co;
    co.constant.assign(np, 0.0);
    co.regular.assign(np, std::vector<double>(np, 0.0));
    co.autonomous.assign(np, std::vector<double>(np, 0.0));

    std::vector<std::vector<int>> on_link(net.link_count());
    for (int p = 0; p < np; ++p) {
        for (int l : paths.paths[p]) {
            on_link[l].push_back(p);
            co.constant[p] += net.links[l].params.free_flow;
        }
    }
    for (std::size_t l = 0; l < net.link_count(); ++l) {
        const LinkParams& lp = net.links[l].params;
        const double slope_r = lp.free_flow * lp.congestion / lp.cap_regular;
        const double slope_a = lp.free_flow * lp.congestion / lp.cap_autonomous;
        for (int p : on_link[l]) {
            for (int q : on_link[l]) {
                co.regular[p][q] += slope_r;
                co.autonomous[p][q] += slope_a;
            }
        }
    }
    return co;
}

struct SupportLp {
    // Variable layout for one support combination.
    std::vector<int> var_path;   // global path per variable
    std::vector<char> var_aut;   // 0 regular, 1 autonomous
    std::vector<int> reg_var;    // per global path, -1 if absent
    std::vector<int> aut_var;
    lp::Problem base;            // constraints without objective
    std::vector<int> anchor;     // anchor path per od
    double j_const = 0.0;
    std::vector<double> j_linear;
};

std::string describe_support(const PathSet& paths, const std::vector<std::vector<int>>& support) {
    std::ostringstream s;
    s << "{";
    for (std::size_t w = 0; w < support.size(); ++w) {
        if (w) s << "; ";
        s << "od " << w << ":";
        for (int k : support[w]) s << " " << (k - paths.offsets[w]);
    }
    s << "}";
    return s.str();
}

lp::Solution run_lp(const SupportLp& s, const std::vector<double>& cost, bool maximize,
                    double tol, const PathSet& paths,
                    const std::vector<std::vector<int>>& support) {
    lp::Problem prob = s.base;
    prob.cost = cost;
    if (maximize) {
        for (double& c : prob.cost) c = -c;
    }
    auto sol = lp::solve(prob, tol);
    if (sol.status == lp::Status::unbounded || sol.status == lp::Status::stalled) {
        throw SolverError("LP failure on support " + describe_support(paths, support));
    }
    if (maximize) sol.objective = -sol.objective;
    return sol;
}

} // namespace

EquilibriumSet equilibrium_set(const Network& net, const DemandSpec& demand,
                               const PathSet& paths, const EqSetOptions& options) {
    for (const Link& l : net.links) {
        if (std::abs(l.params.exponent - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "equilibrium_set requires beta = 1 on every link; link " << l.id
                << " has beta = " << l.params.exponent;
            throw SolverError(msg.str());
        }
    }
    const int np = paths.total();
    if (np > options.max_total_paths) {
        std::ostringstream msg;
        msg << "total path count " << np << " exceeds the support enumeration limit "
            << options.max_total_paths;
        throw SolverError(msg.str());
    }
    const std::size_t nw = net.od_count();
    double combos = 1.0;
    for (std::size_t w = 0; w < nw; ++w) {
        if (paths.count(w) > 25)
            throw SolverError("too many paths on one O/D pair for support enumeration");
        combos *= static_cast<double>((1u << paths.count(w)) - 1u);
    }
    if (combos > static_cast<double>(options.max_support_combos)) {
        std::ostringstream msg;
        msg << combos << " support combinations exceed the limit " << options.max_support_combos;
        throw SolverError(msg.str());
    }

    const auto co = path_coefficients(net, paths);

    std::vector<char> reg_active(nw), aut_active(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        reg_active[w] = (1.0 - demand.autonomy[w]) * demand.rates[w] > 0.0;
        aut_active[w] = demand.autonomy[w] * demand.rates[w] > 0.0;
    }

    EquilibriumSet out;
    out.j_min = std::numeric_limits<double>::infinity();
    out.j_max = -out.j_min;
    if (options.link_ranges)
        out.link_flow.assign(net.link_count(),
                             {std::numeric_limits<double>::infinity(),
                              -std::numeric_limits<double>::infinity()});
    if (options.od_ranges)
        out.od_delay.assign(nw, {std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity()});

    std::vector<unsigned> mask(nw, 1u);
    std::vector<std::vector<int>> support(nw);

    auto build_support = [&]() {
        for (std::size_t w = 0; w < nw; ++w) {
            support[w].clear();
            for (int k = 0; k < paths.count(w); ++k) {
                if (mask[w] & (1u << k)) support[w].push_back(paths.global_index(w, k));
            }
        }
    };

    for (;;) {
        ++out.supports_total;
        build_support();

        SupportOutcome outcome;
        outcome.pattern.resize(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            for (int p : support[w]) outcome.pattern[w].push_back(p - paths.offsets[w]);
        }

        SupportLp s;
        s.reg_var.assign(np, -1);
        s.aut_var.assign(np, -1);
        s.anchor.assign(nw, -1);
        for (std::size_t w = 0; w < nw; ++w) {
            s.anchor[w] = support[w].front();
            for (int p : support[w]) {
                if (reg_active[w]) {
                    s.reg_var[p] = static_cast<int>(s.var_path.size());
                    s.var_path.push_back(p);
                    s.var_aut.push_back(0);
                }
                if (aut_active[w]) {
                    s.aut_var[p] = static_cast<int>(s.var_path.size());
                    s.var_path.push_back(p);
                    s.var_aut.push_back(1);
                }
            }
        }
        const int nv = static_cast<int>(s.var_path.size());
        s.base.vars = nv;

        // Delay of path p as a linear function of the support variables.
        auto delay_row = [&](int p, double sign, std::vector<double>& row) {
            for (int v = 0; v < nv; ++v) {
                const int q = s.var_path[v];
                row[v] += sign * (s.var_aut[v] ? co.autonomous[p][q] : co.regular[p][q]);
            }
        };

        for (std::size_t w = 0; w < nw; ++w) {
            if (reg_active[w]) {
                std::vector<double> row(nv, 0.0);
                for (int p : support[w]) row[s.reg_var[p]] = 1.0;
                s.base.eq_a.push_back(std::move(row));
                s.base.eq_b.push_back((1.0 - demand.autonomy[w]) * demand.rates[w]);
            }
            if (aut_active[w]) {
                std::vector<double> row(nv, 0.0);
                for (int p : support[w]) row[s.aut_var[p]] = 1.0;
                s.base.eq_a.push_back(std::move(row));
                s.base.eq_b.push_back(demand.autonomy[w] * demand.rates[w]);
            }
            for (int p : support[w]) {
                if (p == s.anchor[w]) continue;
                std::vector<double> row(nv, 0.0);
                delay_row(p, 1.0, row);
                delay_row(s.anchor[w], -1.0, row);
                s.base.eq_a.push_back(std::move(row));
                s.base.eq_b.push_back(co.constant[s.anchor[w]] - co.constant[p]);
            }
            for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
                if (std::find(support[w].begin(), support[w].end(), p) != support[w].end())
                    continue;
                // e_anchor - e_p <= const_p - const_anchor  (i.e. e_p >= e_anchor)
                std::vector<double> row(nv, 0.0);
                delay_row(s.anchor[w], 1.0, row);
                delay_row(p, -1.0, row);
                s.base.le_a.push_back(std::move(row));
                s.base.le_b.push_back(co.constant[p] - co.constant[s.anchor[w]]);
            }
        }

        // Social delay J = sum_w r_w e_anchor_w(f).
        s.j_const = 0.0;
        s.j_linear.assign(nv, 0.0);
        for (std::size_t w = 0; w < nw; ++w) {
            s.j_const += demand.rates[w] * co.constant[s.anchor[w]];
            for (int v = 0; v < nv; ++v) {
                const int q = s.var_path[v];
                s.j_linear[v] += demand.rates[w] * (s.var_aut[v] ? co.autonomous[s.anchor[w]][q]
                                                                : co.regular[s.anchor[w]][q]);
            }
        }

        auto sol_min = run_lp(s, s.j_linear, false, options.lp_tol, paths, support);
        if (sol_min.status == lp::Status::optimal) {
            ++out.supports_feasible;
            outcome.feasible = true;
            auto to_flow = [&](const std::vector<double>& x) {
                FlowVector f = FlowVector::zeros(np);
                for (int v = 0; v < nv; ++v) {
                    (s.var_aut[v] ? f.autonomous : f.regular)[s.var_path[v]] = x[v];
                }
                return f;
            };

            const double j_lo = s.j_const + sol_min.objective;
            if (j_lo < out.j_min) {
                out.j_min = j_lo;
                out.witness_min = to_flow(sol_min.x);
            }
            auto sol_max = run_lp(s, s.j_linear, true, options.lp_tol, paths, support);
            const double j_hi = s.j_const + sol_max.objective;
            if (j_hi > out.j_max) {
                out.j_max = j_hi;
                out.witness_max = to_flow(sol_max.x);
            }
            outcome.j_min = j_lo;
            outcome.j_max = j_hi;

            if (options.link_ranges) {
                for (std::size_t l = 0; l < net.link_count(); ++l) {
                    std::vector<double> cost(nv, 0.0);
                    bool touched = false;
                    for (int v = 0; v < nv; ++v) {
                        const Path& pp = paths.paths[s.var_path[v]];
                        if (std::find(pp.begin(), pp.end(), static_cast<int>(l)) != pp.end()) {
                            cost[v] = 1.0;
                            touched = true;
                        }
                    }
                    Range& range = out.link_flow[l];
                    if (!touched) {
                        range.lo = std::min(range.lo, 0.0);
                        range.hi = std::max(range.hi, 0.0);
                        continue;
                    }
                    auto lo = run_lp(s, cost, false, options.lp_tol, paths, support);
                    auto hi = run_lp(s, cost, true, options.lp_tol, paths, support);
                    range.lo = std::min(range.lo, lo.objective);
                    range.hi = std::max(range.hi, hi.objective);
                }
            }
            if (options.od_ranges) {
                for (std::size_t w = 0; w < nw; ++w) {
                    std::vector<double> cost(nv, 0.0);
                    for (int v = 0; v < nv; ++v) {
                        const int q = s.var_path[v];
                        cost[v] = s.var_aut[v] ? co.autonomous[s.anchor[w]][q]
                                               : co.regular[s.anchor[w]][q];
                    }
                    auto lo = run_lp(s, cost, false, options.lp_tol, paths, support);
                    auto hi = run_lp(s, cost, true, options.lp_tol, paths, support);
                    out.od_delay[w].lo =
                        std::min(out.od_delay[w].lo, co.constant[s.anchor[w]] + lo.objective);
                    out.od_delay[w].hi =
                        std::max(out.od_delay[w].hi, co.constant[s.anchor[w]] + hi.objective);
                }
            }
        }

        out.supports.push_back(std::move(outcome));

        // Next support combination (odometer over nonempty subsets).
        std::size_t w = 0;
        for (; w < nw; ++w) {
            if (mask[w] + 1 < (1u << paths.count(w))) {
                ++mask[w];
                break;
            }
            mask[w] = 1u;
        }
        if (w == nw) break;
    }

    if (out.supports_feasible == 0)
        throw SolverError("no feasible support pattern found (LP tolerance too tight?)");
    return out;
}

MixedResult solve_mixed_homogeneous(const Network& net, const DemandSpec& demand,
                                    const PathSet& paths, const SolveOptions& options) {
    const SingleClassGame game = reduce_homogeneous(net, demand);
    MixedResult out;
    out.asymmetry = game.asymmetry;
    out.reduced = solve_single_class(game, paths, options);
    out.od_delay = out.reduced.od_delay;

    out.social = 0.0;
    for (std::size_t w = 0; w < net.od_count(); ++w)
        out.social += demand.rates[w] * out.od_delay[w];

    // Lift: split each reduced path flow so that fr + mu*fa = f~ and the
    // class totals meet the demand split.
    out.witness = FlowVector::zeros(paths.total());
    for (std::size_t w = 0; w < net.od_count(); ++w) {
        const double r = demand.rates[w];
        const double alpha = demand.autonomy[w];
        const double reduced_r = game.demand[w];
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            const double share = out.reduced.path_flow[p] / reduced_r;
            out.witness.regular[p] = share * (1.0 - alpha) * r;
            out.witness.autonomous[p] = share * alpha * r;
        }
    }
    return out;
}

} // namespace routegame
