#include "routegame/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace routegame {

double reduced_delay(const LinkParams& p, double flow) {
    return p.free_flow * (1.0 + p.congestion * std::pow(flow / p.cap_regular, p.exponent));
}

double reduced_delay_derivative(const LinkParams& p, double flow) {
    if (flow <= 0.0) {
        // beta = 1 has a finite slope at zero; beta > 1 flattens out.
        return p.exponent == 1.0 ? p.free_flow * p.congestion / p.cap_regular : 0.0;
    }
    return p.free_flow * p.congestion * p.exponent *
           std::pow(flow / p.cap_regular, p.exponent - 1.0) / p.cap_regular;
}

double reduced_delay_integral(const LinkParams& p, double flow) {
    return p.free_flow * flow +
           p.free_flow * p.congestion * std::pow(flow / p.cap_regular, p.exponent) * flow /
               (p.exponent + 1.0);
}

SingleClassGame single_class_game(const Network& net, const std::vector<double>& demand) {
    SingleClassGame game;
    game.network = net;
    game.demand = demand;
    game.asymmetry = 1.0;
    return game;
}

SingleClassGame reduce_homogeneous(const Network& net, const DemandSpec& demand, double mu_tol) {
    if (net.links.empty()) throw ValidationError("network has no links");
    double mu_min = std::numeric_limits<double>::infinity();
    double mu_max = -mu_min;
    for (const Link& l : net.links) {
        const double mu = l.params.asymmetry();
        mu_min = std::min(mu_min, mu);
        mu_max = std::max(mu_max, mu);
    }
    if (mu_max - mu_min > mu_tol * std::max(1.0, mu_max)) {
        std::ostringstream msg;
        msg << "capacity asymmetry is heterogeneous: m/M ranges over [" << mu_min << ", "
            << mu_max << "]";
        throw HeterogeneityError(msg.str());
    }
    SingleClassGame game;
    game.network = net;
    game.asymmetry = mu_max;
    game.demand.resize(net.od_count());
    for (std::size_t w = 0; w < net.od_count(); ++w) {
        const double r = demand.rates[w];
        const double alpha = demand.autonomy[w];
        game.demand[w] = (1.0 - alpha) * r + game.asymmetry * alpha * r;
    }
    return game;
}

PathCost shortest_path(const Network& net, const std::vector<double>& link_cost,
                       int origin, int destination) {
    const int n = static_cast<int>(net.node_count());
    for (double c : link_cost) {
        if (c < 0.0) throw DomainError("shortest_path: negative link cost");
    }

    // Distance to the destination over reversed links (dense Dijkstra).
    std::vector<std::vector<int>> in_links(n);
    for (std::size_t l = 0; l < net.links.size(); ++l)
        in_links[net.links[l].head].push_back(static_cast<int>(l));

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<char> done(n, 0);
    dist[destination] = 0.0;
    for (int round = 0; round < n; ++round) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[u])) u = v;
        }
        if (u < 0) break;
        done[u] = 1;
        for (int l : in_links[u]) {
            const int v = net.links[l].tail;
            const double cand = dist[u] + link_cost[l];
            if (cand < dist[v]) dist[v] = cand;
        }
    }
    if (dist[origin] == inf) throw Error("shortest_path: destination unreachable");

    // Walk forward, always taking the cheapest continuation; equal-cost ties
    // go to the smallest link index, which yields the lexicographically
    // smallest optimal link sequence. Visited nodes are skipped so the walk
    // stays simple even across zero-cost links.
    PathCost result;
    std::vector<char> visited(n, 0);
    int u = origin;
    visited[u] = 1;
    const auto adj = net.adjacency();
    while (u != destination) {
        int best = -1;
        double best_value = inf;
        for (int l : adj[u]) {
            const int v = net.links[l].head;
            if (visited[v]) continue;
            const double value = link_cost[l] + dist[v];
            if (value < best_value) {
                best_value = value;
                best = l;
            }
        }
        if (best < 0) throw Error("shortest_path: walk failed");
        result.links.push_back(best);
        result.cost += link_cost[best];
        u = net.links[best].head;
        visited[u] = 1;
    }
    return result;
}

namespace {

std::vector<double> total_link_flow(const Network& net, const PathSet& paths,
                                    const std::vector<double>& path_flow) {
    std::vector<double> lf(net.link_count(), 0.0);
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        if (path_flow[p] == 0.0) continue;
        for (int l : paths.paths[p]) lf[l] += path_flow[p];
    }
    return lf;
}

double beckmann_value(const Network& net, const std::vector<double>& lf) {
    double phi = 0.0;
    for (std::size_t l = 0; l < net.link_count(); ++l)
        phi += reduced_delay_integral(net.links[l].params, lf[l]);
    return phi;
}

// Dense Gaussian elimination with partial pivoting; returns false when the
// matrix is numerically singular.
bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-12) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        b[col] /= a[col][col];
        for (int r = 0; r < col; ++r) b[r] -= a[r][col] * b[col];
    }
    return true;
}

struct PolishOutcome {
    bool ok = false;
    std::vector<double> path_flow;
};

// Newton refinement on a fixed active path set: solves class conservation
// plus equal-delay conditions exactly, then checks that inactive paths are
// no cheaper than the common delay.
PolishOutcome polish_active_set(const SingleClassGame& game, const PathSet& paths,
                                const std::vector<std::vector<int>>& active,
                                const std::vector<double>& start) {
    const Network& net = game.network;
    PolishOutcome out;

    std::vector<int> vars; // global path index per unknown
    for (const auto& set : active) {
        if (set.empty()) return out;
        for (int p : set) vars.push_back(p);
    }
    const int n = static_cast<int>(vars.size());

    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::max(start[vars[i]], 0.0);

    double scale = 1.0;
    for (double r : game.demand) scale = std::max(scale, r);

    std::vector<double> path_flow(paths.total(), 0.0);
    for (int iter = 0; iter < 60; ++iter) {
        std::fill(path_flow.begin(), path_flow.end(), 0.0);
        for (int i = 0; i < n; ++i) path_flow[vars[i]] = v[i];
        const auto lf = total_link_flow(net, paths, path_flow);

        std::vector<double> delay(net.link_count()), slope(net.link_count());
        for (std::size_t l = 0; l < net.link_count(); ++l) {
            delay[l] = reduced_delay(net.links[l].params, lf[l]);
            slope[l] = reduced_delay_derivative(net.links[l].params, lf[l]);
        }
        auto pdelay = [&](int p) {
            double d = 0.0;
            for (int l : paths.paths[p]) d += delay[l];
            return d;
        };

        std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n, 0.0);
        int row = 0;
        int base = 0;
        for (std::size_t w = 0; w < active.size(); ++w) {
            const auto& set = active[w];
            const int k = static_cast<int>(set.size());
            double sum = 0.0;
            for (int i = 0; i < k; ++i) sum += v[base + i];
            for (int i = 0; i < k; ++i) jac[row][base + i] = 1.0;
            rhs[row] = game.demand[w] - sum;
            ++row;
            const int p0 = set[0];
            for (int i = 1; i < k; ++i) {
                const int p = set[i];
                rhs[row] = pdelay(p0) - pdelay(p);
                for (int j = 0; j < n; ++j) {
                    const int q = vars[j];
                    double coeff = 0.0;
                    for (int l : paths.paths[p]) {
                        for (int lq : paths.paths[q]) {
                            if (l == lq) coeff += slope[l];
                        }
                    }
                    for (int l : paths.paths[p0]) {
                        for (int lq : paths.paths[q]) {
                            if (l == lq) coeff -= slope[l];
                        }
                    }
                    jac[row][j] = coeff;
                }
                ++row;
            }
            base += k;
        }

        double fnorm = 0.0;
        for (double r : rhs) fnorm = std::max(fnorm, std::abs(r));
        if (fnorm <= 1e-12 * scale) break;
        if (iter == 59) return out;

        if (!solve_dense(jac, rhs)) return out;
        for (int i = 0; i < n; ++i) v[i] += rhs[i];
    }

    for (double x : v) {
        if (x < -1e-9 * scale) return out;
    }
    // Clamp roundoff negatives and restore conservation exactly.
    int base = 0;
    for (std::size_t w = 0; w < active.size(); ++w) {
        const int k = static_cast<int>(active[w].size());
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            v[base + i] = std::max(v[base + i], 0.0);
            sum += v[base + i];
        }
        if (sum > 0.0) {
            const double f = game.demand[w] / sum;
            for (int i = 0; i < k; ++i) v[base + i] *= f;
        }
        base += k;
    }

    std::fill(path_flow.begin(), path_flow.end(), 0.0);
    for (int i = 0; i < n; ++i) path_flow[vars[i]] = v[i];
    const auto lf = total_link_flow(net, paths, path_flow);
    std::vector<double> delay(net.link_count());
    for (std::size_t l = 0; l < net.link_count(); ++l)
        delay[l] = reduced_delay(net.links[l].params, lf[l]);
    for (std::size_t w = 0; w < active.size(); ++w) {
        double active_delay = 0.0;
        for (int l : paths.paths[active[w][0]]) active_delay += delay[l];
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            double d = 0.0;
            for (int l : paths.paths[p]) d += delay[l];
            if (d < active_delay - 1e-9 * (1.0 + std::abs(active_delay))) return out;
        }
    }

    out.ok = true;
    out.path_flow = std::move(path_flow);
    return out;
}

} // namespace

AssignmentResult solve_single_class(const SingleClassGame& game, const PathSet& paths,
                                    const SolveOptions& options) {
    const Network& net = game.network;
    const std::size_t nw = net.od_count();
    if (game.demand.size() != nw) throw DomainError("demand size mismatch");
    for (double r : game.demand) {
        if (!(r > 0.0)) throw DomainError("reduced demand must be positive");
    }

    std::map<Path, int> path_index;
    for (std::size_t p = 0; p < paths.paths.size(); ++p)
        path_index[paths.paths[p]] = static_cast<int>(p);
    auto locate = [&](const Path& p) {
        auto it = path_index.find(p);
        if (it == path_index.end())
            throw Error("shortest path is missing from the enumerated path set");
        return it->second;
    };

    AssignmentResult res;
    res.path_flow.assign(paths.total(), 0.0);
    res.od_delay.assign(nw, 0.0);

    // All-or-nothing start at free-flow costs.
    std::vector<double> cost(net.link_count());
    for (std::size_t l = 0; l < net.link_count(); ++l)
        cost[l] = reduced_delay(net.links[l].params, 0.0);
    for (std::size_t w = 0; w < nw; ++w) {
        const auto sp = shortest_path(net, cost, net.od_pairs[w].origin, net.od_pairs[w].destination);
        res.path_flow[locate(sp.links)] += game.demand[w];
    }
    res.link_flow = total_link_flow(net, paths, res.path_flow);
    res.beckmann_history.push_back(beckmann_value(net, res.link_flow));

    std::vector<double> aon_link(net.link_count());
    std::vector<int> aon_path(nw);
    const double tiny = 1e-300;

    for (res.iterations = 0; res.iterations < options.max_iter; ++res.iterations) {
        for (std::size_t l = 0; l < net.link_count(); ++l)
            cost[l] = reduced_delay(net.links[l].params, res.link_flow[l]);

        double total_cost = 0.0;
        for (std::size_t l = 0; l < net.link_count(); ++l)
            total_cost += res.link_flow[l] * cost[l];

        double bound = 0.0;
        std::fill(aon_link.begin(), aon_link.end(), 0.0);
        for (std::size_t w = 0; w < nw; ++w) {
            const auto sp =
                shortest_path(net, cost, net.od_pairs[w].origin, net.od_pairs[w].destination);
            res.od_delay[w] = sp.cost;
            bound += game.demand[w] * sp.cost;
            aon_path[w] = locate(sp.links);
            for (int l : sp.links) aon_link[l] += game.demand[w];
        }

        res.relative_gap = std::max(0.0, total_cost - bound) / std::max(total_cost, tiny);
        if (res.relative_gap <= options.rel_gap_tol) {
            res.converged = true;
            break;
        }

        // Exact line search: the directional derivative of the potential is
        // monotone in theta, so bisect on its sign.
        auto slope_at = [&](double theta) {
            double g = 0.0;
            for (std::size_t l = 0; l < net.link_count(); ++l) {
                const double d = aon_link[l] - res.link_flow[l];
                if (d == 0.0) continue;
                g += reduced_delay(net.links[l].params, res.link_flow[l] + theta * d) * d;
            }
            return g;
        };
        double theta = 1.0;
        if (slope_at(1.0) > 0.0) {
            double lo = 0.0, hi = 1.0;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                (slope_at(mid) <= 0.0 ? lo : hi) = mid;
            }
            theta = 0.5 * (lo + hi);
        }

        for (double& x : res.path_flow) x *= (1.0 - theta);
        for (std::size_t w = 0; w < nw; ++w)
            res.path_flow[aon_path[w]] += theta * game.demand[w];
        res.link_flow = total_link_flow(net, paths, res.path_flow);
        res.beckmann_history.push_back(beckmann_value(net, res.link_flow));
    }

    if (options.polish) {
        // Active set: paths carrying flow or tied with the shortest path.
        const auto lf = res.link_flow;
        std::vector<double> delay(net.link_count());
        for (std::size_t l = 0; l < net.link_count(); ++l)
            delay[l] = reduced_delay(net.links[l].params, lf[l]);
        std::vector<std::vector<int>> active_wide(nw), active_narrow(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            double min_delay = std::numeric_limits<double>::infinity();
            std::vector<double> pd(paths.offsets[w + 1] - paths.offsets[w]);
            for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
                double d = 0.0;
                for (int l : paths.paths[p]) d += delay[l];
                pd[p - paths.offsets[w]] = d;
                min_delay = std::min(min_delay, d);
            }
            const double band = 1e-5 * (1.0 + std::abs(min_delay));
            for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
                const bool carries = res.path_flow[p] > options.flow_epsilon;
                if (carries) active_narrow[w].push_back(p);
                if (carries || pd[p - paths.offsets[w]] <= min_delay + band)
                    active_wide[w].push_back(p);
            }
        }
        PolishOutcome polished = polish_active_set(game, paths, active_wide, res.path_flow);
        if (!polished.ok && active_narrow != active_wide)
            polished = polish_active_set(game, paths, active_narrow, res.path_flow);
        if (polished.ok) {
            const auto new_lf = total_link_flow(net, paths, polished.path_flow);
            const double new_phi = beckmann_value(net, new_lf);
            if (new_phi <= res.beckmann_history.back() + 1e-9 * (1.0 + std::abs(new_phi))) {
                res.path_flow = std::move(polished.path_flow);
                res.link_flow = new_lf;
            }
        }
    }

    // Final diagnostics at the returned flows.
    for (std::size_t l = 0; l < net.link_count(); ++l)
        cost[l] = reduced_delay(net.links[l].params, res.link_flow[l]);
    double total_cost = 0.0;
    for (std::size_t l = 0; l < net.link_count(); ++l)
        total_cost += res.link_flow[l] * cost[l];
    double bound = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
        const auto sp =
            shortest_path(net, cost, net.od_pairs[w].origin, net.od_pairs[w].destination);
        res.od_delay[w] = sp.cost;
        bound += game.demand[w] * sp.cost;
    }
    res.relative_gap = std::max(0.0, total_cost - bound) / std::max(total_cost, tiny);
    res.converged = res.relative_gap <= options.rel_gap_tol;
    res.beckmann = beckmann_value(net, res.link_flow);
    return res;
}

std::vector<double> commodity_link_flow(const Network& net, const PathSet& paths,
                                        const AssignmentResult& result, int od) {
    std::vector<double> lf(net.link_count(), 0.0);
    for (int p = paths.offsets[od]; p < paths.offsets[od + 1]; ++p) {
        for (int l : paths.paths[p]) lf[l] += result.path_flow[p];
    }
    return lf;
}

} // namespace routegame
