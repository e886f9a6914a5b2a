// Command-line front end: load a network document, solve for equilibria,
// sweep autonomy fractions, verify user-supplied flows, and check the
// social-delay bound. Machine-readable output (JSON or CSV) goes to the
// --output file or stdout.
//
// Exit codes: 0 ok, 2 input error, 3 solver error, 4 verification failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "routegame/analysis.hpp"
#include "routegame/assign.hpp"
#include "routegame/delay.hpp"
#include "routegame/io.hpp"
#include "routegame/mixed_eq.hpp"

namespace {

using nlohmann::ordered_json;
using namespace routegame;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct Options {
    std::string input;
    std::string output = "-";
    std::string solver = "support-enum";
    std::string paradox = "strong";
    std::string flow_file;
    int grid = 101;
    int od = -1;
    double tol = -1.0; // negative: solver default
    double alpha_override = -1.0;
};

void write_output(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << text;
}

std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

NetworkBundle load_input(const Options& opt) {
    NetworkBundle bundle = load_network(opt.input);
    for (const std::string& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
    if (opt.alpha_override >= 0.0) {
        if (opt.alpha_override > 1.0)
            throw ValidationError("alpha override must lie in [0,1]");
        std::fill(bundle.demand.autonomy.begin(), bundle.demand.autonomy.end(),
                  opt.alpha_override);
    }
    return bundle;
}

std::vector<double> make_grid(int n) {
    if (n < 1) throw ValidationError("grid must have at least one point");
    std::vector<double> g;
    if (n == 1) {
        g.push_back(0.0);
    } else {
        for (int k = 0; k < n; ++k) g.push_back(static_cast<double>(k) / (n - 1));
    }
    return g;
}

SolveOptions fw_options(const Options& opt) {
    SolveOptions s;
    if (opt.tol > 0.0) s.rel_gap_tol = opt.tol;
    return s;
}

ordered_json witness_json(const Network& net, const PathSet& paths, const FlowVector& f) {
    ordered_json rows = ordered_json::array();
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        ordered_json row;
        row["od"] = paths.od_of_path[p];
        ordered_json ids = ordered_json::array();
        for (int l : paths.paths[p]) ids.push_back(net.links[l].id);
        row["links"] = ids;
        row["fr"] = f.regular[p];
        row["fa"] = f.autonomous[p];
        rows.push_back(row);
    }
    return rows;
}

int cmd_solve(const Options& opt) {
    NetworkBundle bundle = load_input(opt);
    const Network& net = bundle.network;
    const PathSet paths = enumerate_paths(net);

    ordered_json doc;
    doc["solver"] = opt.solver;
    if (opt.solver == "support-enum") {
        EqSetOptions eo;
        auto es = equilibrium_set(net, bundle.demand, paths, eo);
        doc["converged"] = true;
        doc["J_min"] = es.j_min;
        doc["J_max"] = es.j_max;
        ordered_json ew = ordered_json::array();
        const auto lf = link_flows(net, paths, es.witness_min);
        const auto delays = path_delays(net, paths, lf);
        for (std::size_t w = 0; w < net.od_count(); ++w) {
            double best = std::numeric_limits<double>::infinity();
            for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p)
                best = std::min(best, delays[p]);
            ew.push_back(best);
        }
        doc["e_w"] = ew;
        doc["witness"] = witness_json(net, paths, es.witness_min);
        ordered_json ranges = ordered_json::array();
        for (std::size_t l = 0; l < net.link_count(); ++l) {
            ordered_json r;
            r["id"] = net.links[l].id;
            r["min"] = es.link_flow[l].lo;
            r["max"] = es.link_flow[l].hi;
            ranges.push_back(r);
        }
        doc["link_ranges"] = ranges;
    } else if (opt.solver == "homogeneous") {
        auto ms = solve_mixed_homogeneous(net, bundle.demand, paths, fw_options(opt));
        doc["converged"] = ms.reduced.converged;
        doc["J_min"] = ms.social;
        doc["J_max"] = ms.social;
        doc["e_w"] = ms.od_delay;
        doc["witness"] = witness_json(net, paths, ms.witness);
        ordered_json ranges = ordered_json::array();
        const auto lf = link_flows(net, paths, ms.witness);
        for (std::size_t l = 0; l < net.link_count(); ++l) {
            ordered_json r;
            r["id"] = net.links[l].id;
            r["min"] = lf[l].total();
            r["max"] = lf[l].total();
            ranges.push_back(r);
        }
        doc["link_ranges"] = ranges;
    } else if (opt.solver == "single-class") {
        auto game = single_class_game(net, bundle.demand.rates);
        auto res = solve_single_class(game, paths, fw_options(opt));
        double j = 0.0;
        for (std::size_t w = 0; w < net.od_count(); ++w)
            j += bundle.demand.rates[w] * res.od_delay[w];
        doc["converged"] = res.converged;
        doc["J_min"] = j;
        doc["J_max"] = j;
        doc["e_w"] = res.od_delay;
        FlowVector f = FlowVector::zeros(paths.total());
        f.regular = res.path_flow;
        doc["witness"] = witness_json(net, paths, f);
        ordered_json ranges = ordered_json::array();
        for (std::size_t l = 0; l < net.link_count(); ++l) {
            ordered_json r;
            r["id"] = net.links[l].id;
            r["min"] = res.link_flow[l];
            r["max"] = res.link_flow[l];
            ranges.push_back(r);
        }
        doc["link_ranges"] = ranges;
    } else {
        throw ValidationError("unknown solver: " + opt.solver);
    }
    write_output(opt.output, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    NetworkBundle bundle = load_input(opt);
    SweepOptions so;
    so.od_index = opt.od;
    so.paradox = opt.paradox == "weak" ? ParadoxMode::weak : ParadoxMode::strong;
    if (opt.solver == "homogeneous") so.solver = Solver::homogeneous;
    else if (opt.solver == "single-class") so.solver = Solver::single_class;
    else if (opt.solver == "support-enum") so.solver = Solver::support_enum;
    else throw ValidationError("unknown solver: " + opt.solver);
    so.fw = fw_options(opt);

    auto sweep = sweep_alpha(bundle.network, bundle.demand, make_grid(opt.grid), so);

    std::ostringstream csv;
    csv << "alpha,J_min,J_max,paradox_flag\n";
    for (const auto& s : sweep.samples) {
        csv << format_csv_value(s.alpha) << ',' << format_csv_value(s.j_min) << ','
            << format_csv_value(s.j_max) << ',' << (s.paradox ? 1 : 0) << '\n';
    }
    write_output(opt.output, csv.str());
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    NetworkBundle bundle = load_input(opt);
    const Network& net = bundle.network;
    const PathSet paths = enumerate_paths(net);

    std::ifstream in(opt.flow_file);
    if (!in) throw ParseError("cannot open flow file: " + opt.flow_file);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid flow file: ") + e.what());
    }
    if (!doc.contains("flows") || !doc.at("flows").is_array())
        throw ParseError("flow file must contain a \"flows\" array");
    const auto& rows = doc.at("flows");
    if (static_cast<int>(rows.size()) != paths.total())
        throw ValidationError("flow file must list one entry per enumerated path");
    FlowVector f = FlowVector::zeros(paths.total());
    for (int p = 0; p < paths.total(); ++p) {
        const auto& row = rows.at(p);
        if (!row.is_object() || !row.contains("fr") || !row.contains("fa"))
            throw ParseError("each flow entry needs numeric \"fr\" and \"fa\" fields");
        f.regular[p] = row.at("fr").get<double>();
        f.autonomous[p] = row.at("fa").get<double>();
    }

    const double eps = opt.tol > 0.0 ? opt.tol : 1e-6;
    auto rep = verify_equilibrium(net, bundle.demand, paths, f, eps);

    ordered_json out;
    out["pass"] = rep.pass();
    out["feasible"] = rep.feasible;
    out["wardrop"] = rep.wardrop;
    out["max_residual"] = rep.max_residual;
    out["max_excess"] = rep.max_excess;
    out["e_w"] = rep.od_delay;
    ordered_json residuals = ordered_json::array();
    for (std::size_t w = 0; w < net.od_count(); ++w) {
        ordered_json r;
        r["od"] = w;
        r["regular"] = rep.residuals[2 * w];
        r["autonomous"] = rep.residuals[2 * w + 1];
        residuals.push_back(r);
    }
    out["class_conservation_residuals"] = residuals;
    ordered_json violations = ordered_json::array();
    for (const auto& v : rep.violations) {
        ordered_json row;
        row["od"] = v.od;
        row["path"] = v.path - paths.offsets[v.od];
        row["better_path"] = v.better_path - paths.offsets[v.od];
        row["excess"] = v.excess;
        violations.push_back(row);
    }
    out["violations"] = violations;
    write_output(opt.output, out.dump(2) + "\n");
    return rep.pass() ? kExitOk : kExitVerify;
}

int cmd_bound(const Options& opt) {
    NetworkBundle bundle = load_input(opt);
    auto rep = autonomy_bound_check(bundle.network, bundle.demand, make_grid(opt.grid), opt.od,
                                    fw_options(opt));
    ordered_json out;
    out["J_o"] = rep.j_baseline;
    out["lambda"] = rep.lambda;
    out["factor"] = rep.factor;
    out["bound"] = rep.bound;
    out["max_ratio"] = rep.max_ratio;
    out["eta_lower"] = rep.eta_lower;
    out["satisfied"] = rep.satisfied;
    ordered_json samples = ordered_json::array();
    for (const auto& [alpha, j] : rep.samples) samples.push_back(ordered_json::array({alpha, j}));
    out["samples"] = samples;
    write_output(opt.output, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_paths(const Options& opt) {
    NetworkBundle bundle = load_input(opt);
    const Network& net = bundle.network;
    const PathSet paths = enumerate_paths(net);
    ordered_json out;
    ordered_json ods = ordered_json::array();
    for (std::size_t w = 0; w < net.od_count(); ++w) {
        ordered_json od;
        od["origin"] = net.nodes[net.od_pairs[w].origin];
        od["destination"] = net.nodes[net.od_pairs[w].destination];
        ordered_json list = ordered_json::array();
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            ordered_json ids = ordered_json::array();
            for (int l : paths.paths[p]) ids.push_back(net.links[l].id);
            list.push_back(ids);
        }
        od["paths"] = list;
        ods.push_back(od);
    }
    out["od_pairs"] = ods;
    write_output(opt.output, out.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wardrop equilibria and autonomy diagnostics for mixed traffic networks"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::string> solvers = {"support-enum", "homogeneous", "single-class"};
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "network document (JSON)")->required();
        sub->add_option("--output", opt.output, "output file, '-' for stdout");
        sub->add_option("--tol", opt.tol, "solver tolerance")->check(CLI::PositiveNumber);
    };

    CLI::App* solve = app.add_subcommand("solve", "equilibrium social-delay range");
    add_common(solve);
    solve->add_option("--solver", opt.solver, "support-enum | homogeneous | single-class")
        ->check(CLI::IsMember(solvers));
    solve->add_option("--alpha-override", opt.alpha_override, "replace every alpha_w")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* sweep = app.add_subcommand("sweep", "sweep autonomy fractions, CSV output");
    add_common(sweep);
    sweep->add_option("--solver", opt.solver, "support-enum | homogeneous | single-class")
        ->check(CLI::IsMember(solvers));
    sweep->add_option("--grid", opt.grid, "number of grid points on [0,1]")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--od", opt.od, "O/D index to sweep (default: all)");
    sweep->add_option("--paradox", opt.paradox, "strong | weak")
        ->check(CLI::IsMember({"strong", "weak"}));

    CLI::App* verify = app.add_subcommand("verify", "check a flow file for equilibrium");
    add_common(verify);
    verify->add_option("flows", opt.flow_file, "flow file (JSON)")->required();

    CLI::App* bound = app.add_subcommand("bound", "social-delay bound report");
    add_common(bound);
    bound->add_option("--grid", opt.grid, "number of grid points on [0,1]")
        ->check(CLI::PositiveNumber);
    bound->add_option("--od", opt.od, "O/D index to sweep (default: all)");

    CLI::App* paths_cmd = app.add_subcommand("paths", "print the enumerated path set");
    add_common(paths_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (bound->parsed()) return cmd_bound(opt);
        if (paths_cmd->parsed()) return cmd_paths(opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PathLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const HeterogeneityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitInput;
}
