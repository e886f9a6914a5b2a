// Shared helpers for the test suites: tiny fixture networks, random instance
// generation, and independent oracles kept deliberately separate from the
// production algorithms they cross-check.
#pragma once

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "routegame/analysis.hpp"
#include "routegame/assign.hpp"
#include "routegame/delay.hpp"
#include "routegame/io.hpp"
#include "routegame/mixed_eq.hpp"
#include "routegame/network.hpp"

namespace testsupport {

using namespace routegame;

inline std::string data_file(const char* name) {
    return std::string(ROUTEGAME_DATA_DIR) + "/" + name;
}

// Four-node diamond with identical links (a=1, gamma=1, beta=1, m=1, M=2),
// one O/D pair A->D with r=2, alpha=0.5. Two paths: ABD then ACD.
inline NetworkBundle diamond() {
    return load_network(data_file("fig1.json"));
}

inline Network make_net(int nodes, const std::vector<std::tuple<int, int, LinkParams>>& links,
                        const std::vector<std::pair<int, int>>& ods) {
    Network net;
    for (int i = 0; i < nodes; ++i) net.nodes.push_back("N" + std::to_string(i));
    int id = 1;
    for (const auto& [u, v, p] : links) net.links.push_back({id++, u, v, p});
    for (const auto& [o, d] : ods) net.od_pairs.push_back({o, d});
    return net;
}

inline LinkParams bpr(double a, double gamma, double beta, double m, double M) {
    LinkParams p;
    p.free_flow = a;
    p.congestion = gamma;
    p.exponent = beta;
    p.cap_regular = m;
    p.cap_autonomous = M;
    return p;
}

// ---------------------------------------------------------------------------
// Random instances

struct RandomConfig {
    int min_nodes = 3;
    int max_nodes = 6;
    int extra_links = 3;
    int od_count = 1;
    bool linear = false;       // force beta = 1 everywhere
    bool homogeneous = false;  // force a common mu
    int max_paths_per_od = 4;
    double max_combos = 400.0;
    int min_total_paths = 2;
};

inline NetworkBundle random_bundle(std::mt19937& rng, const RandomConfig& cfg) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 500; ++attempt) {
        const int n = cfg.min_nodes +
                      static_cast<int>(unit(rng) * (cfg.max_nodes - cfg.min_nodes + 1)) %
                          (cfg.max_nodes - cfg.min_nodes + 1);
        Network net;
        for (int i = 0; i < n; ++i) net.nodes.push_back("N" + std::to_string(i));

        std::set<std::pair<int, int>> od_seen;
        for (int k = 0; k < cfg.od_count; ++k) {
            for (int tries = 0; tries < 50; ++tries) {
                int o = static_cast<int>(unit(rng) * n) % n;
                int d = static_cast<int>(unit(rng) * n) % n;
                if (o != d && od_seen.insert({o, d}).second) {
                    net.od_pairs.push_back({o, d});
                    break;
                }
            }
        }
        if (net.od_pairs.empty()) continue;

        const double mu_common = 0.25 + 0.75 * unit(rng);
        int next_id = 1;
        auto add_link = [&](int u, int v) {
            LinkParams p;
            p.free_flow = 0.5 + 2.5 * unit(rng);
            p.congestion = 0.2 + 1.3 * unit(rng);
            p.exponent = cfg.linear ? 1.0 : 1.0 + static_cast<int>(unit(rng) * 4) % 4;
            p.cap_regular = 0.5 + 2.0 * unit(rng);
            const double mu = cfg.homogeneous ? mu_common : 0.25 + 0.75 * unit(rng);
            p.cap_autonomous = p.cap_regular / mu;
            net.links.push_back({next_id++, u, v, p});
        };

        // Backbone path per O/D through a random subset of intermediate nodes.
        for (const OdPair& od : net.od_pairs) {
            std::vector<int> mids;
            for (int i = 0; i < n; ++i) {
                if (i != od.origin && i != od.destination && unit(rng) < 0.4) mids.push_back(i);
            }
            std::shuffle(mids.begin(), mids.end(), rng);
            if (mids.size() > 2) mids.resize(2);
            int prev = od.origin;
            for (int mid : mids) {
                add_link(prev, mid);
                prev = mid;
            }
            add_link(prev, od.destination);
        }
        for (int k = 0; k < cfg.extra_links; ++k) {
            int u = static_cast<int>(unit(rng) * n) % n;
            int v = static_cast<int>(unit(rng) * n) % n;
            if (u != v) add_link(u, v);
        }

        DemandSpec demand;
        for (std::size_t w = 0; w < net.od_count(); ++w) {
            demand.rates.push_back(0.5 + 2.5 * unit(rng));
            demand.autonomy.push_back(unit(rng));
        }

        try {
            validate(net, demand);
            PathSet ps = enumerate_paths(net, cfg.max_paths_per_od);
            if (ps.total() < cfg.min_total_paths) continue;
            double combos = 1.0;
            for (std::size_t w = 0; w < net.od_count(); ++w)
                combos *= static_cast<double>((1u << ps.count(w)) - 1u);
            if (combos > cfg.max_combos) continue;
            return {net, demand, {}};
        } catch (const Error&) {
            continue;
        }
    }
    throw std::runtime_error("random_bundle: no instance found");
}

// ---------------------------------------------------------------------------
// Independent oracles

// Simple-path enumeration by recursion over node sequences (not link DFS),
// expanding parallel links between consecutive nodes.
inline void node_seq_paths(const Network& net, int node, int dest, std::vector<char>& used,
                           Path& acc, std::set<Path>& out) {
    if (node == dest) {
        out.insert(acc);
        return;
    }
    used[node] = 1;
    for (int v = 0; v < static_cast<int>(net.node_count()); ++v) {
        if (used[v]) continue;
        for (std::size_t l = 0; l < net.link_count(); ++l) {
            if (net.links[l].tail == node && net.links[l].head == v) {
                acc.push_back(static_cast<int>(l));
                node_seq_paths(net, v, dest, used, acc, out);
                acc.pop_back();
            }
        }
    }
    used[node] = 0;
}

inline std::set<Path> brute_force_paths(const Network& net, int origin, int dest) {
    std::set<Path> out;
    std::vector<char> used(net.node_count(), 0);
    Path acc;
    node_seq_paths(net, origin, dest, used, acc, out);
    return out;
}

// Brute-force scan of the feasible rectangle of a single-O/D two-path
// instance; keeps the grid points whose Wardrop violation is below a
// resolution-scaled tolerance and reports the J range over them.
struct GridScan {
    double j_min = 0.0;
    double j_max = 0.0;
    long accepted = 0;
};

inline GridScan grid_scan_two_path(const Network& net, const DemandSpec& demand,
                                   const PathSet& paths, int steps = 2000) {
    const double r = demand.rates[0];
    const double alpha = demand.autonomy[0];
    const double total_r = (1.0 - alpha) * r;
    const double total_a = alpha * r;
    const double h_r = total_r / steps;
    const double h_a = total_a / steps;

    // Per-class Lipschitz constant of path-delay differences per unit flow.
    double slope_r = 0.0, slope_a = 0.0;
    for (int p = 0; p < 2; ++p) {
        double sr = 0.0, sa = 0.0;
        for (int l : paths.paths[p]) {
            const LinkParams& lp = net.links[l].params;
            sr += lp.free_flow * lp.congestion / lp.cap_regular;
            sa += lp.free_flow * lp.congestion / lp.cap_autonomous;
        }
        slope_r = std::max(slope_r, sr);
        slope_a = std::max(slope_a, sa);
    }
    const double tol = 2.0 * (slope_r * h_r + slope_a * h_a) + 1e-12;

    GridScan out;
    out.j_min = std::numeric_limits<double>::infinity();
    out.j_max = -out.j_min;
    FlowVector f = FlowVector::zeros(2);
    for (int i = 0; i <= steps; ++i) {
        f.regular[0] = i * h_r;
        f.regular[1] = std::max(0.0, total_r - f.regular[0]);
        for (int k = 0; k <= steps; ++k) {
            f.autonomous[0] = k * h_a;
            f.autonomous[1] = std::max(0.0, total_a - f.autonomous[0]);

            const auto lf = link_flows(net, paths, f);
            const double e0 = path_delay(net, paths.paths[0], lf);
            const double e1 = path_delay(net, paths.paths[1], lf);

            double violation = 0.0;
            if (f.regular[0] > 0.0 || f.autonomous[0] > 0.0)
                violation = std::max(violation, e0 - e1);
            if (f.regular[1] > 0.0 || f.autonomous[1] > 0.0)
                violation = std::max(violation, e1 - e0);
            if (violation > tol) continue;

            const double j =
                (f.regular[0] + f.autonomous[0]) * e0 + (f.regular[1] + f.autonomous[1]) * e1;
            out.j_min = std::min(out.j_min, j);
            out.j_max = std::max(out.j_max, j);
            ++out.accepted;
        }
    }
    return out;
}

} // namespace testsupport
