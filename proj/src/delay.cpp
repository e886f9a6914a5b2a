#include "routegame/delay.hpp"

#include <cmath>
#include <sstream>

namespace routegame {

double link_delay(const LinkParams& p, double flow_regular, double flow_autonomous) {
    if (flow_regular < 0.0 || flow_autonomous < 0.0) {
        std::ostringstream msg;
        msg << "link_delay: negative flow (fr=" << flow_regular
            << ", fa=" << flow_autonomous << ")";
        throw DomainError(msg.str());
    }
    const double density = flow_regular / p.cap_regular + flow_autonomous / p.cap_autonomous;
    return p.free_flow * (1.0 + p.congestion * std::pow(density, p.exponent));
}

double link_capacity(const LinkParams& p, double alpha_share) {
    if (!(alpha_share >= 0.0 && alpha_share <= 1.0)) {
        std::ostringstream msg;
        msg << "link_capacity: alpha " << alpha_share << " outside [0,1]";
        throw DomainError(msg.str());
    }
    const double m = p.cap_regular;
    const double M = p.cap_autonomous;
    return m * M / (alpha_share * m + (1.0 - alpha_share) * M);
}

std::vector<ClassFlow> link_flows(const Network& net, const PathSet& paths, const FlowVector& f) {
    std::vector<ClassFlow> lf(net.link_count());
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        for (int l : paths.paths[p]) {
            lf[l].regular += f.regular[p];
            lf[l].autonomous += f.autonomous[p];
        }
    }
    return lf;
}

double path_delay(const Network& net, const Path& path, const std::vector<ClassFlow>& lf) {
    double d = 0.0;
    for (int l : path) d += link_delay(net.links[l].params, lf[l].regular, lf[l].autonomous);
    return d;
}

std::vector<double> path_delays(const Network& net, const PathSet& paths,
                                const std::vector<ClassFlow>& lf) {
    std::vector<double> out(paths.paths.size());
    for (std::size_t p = 0; p < paths.paths.size(); ++p)
        out[p] = path_delay(net, paths.paths[p], lf);
    return out;
}

double path_delay(const Network& net, const PathSet& paths, const FlowVector& f, int index) {
    const auto lf = link_flows(net, paths, f);
    return path_delay(net, paths.paths[index], lf);
}

double social_delay(const Network& net, const PathSet& paths, const FlowVector& f) {
    const auto lf = link_flows(net, paths, f);
    double j = 0.0;
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        const double fp = f.regular[p] + f.autonomous[p];
        if (fp != 0.0) j += fp * path_delay(net, paths.paths[p], lf);
    }
    return j;
}

std::vector<double> feasibility_residuals(const DemandSpec& demand, const PathSet& paths,
                                          const FlowVector& f) {
    const std::size_t nw = demand.rates.size();
    std::vector<double> res(2 * nw, 0.0);
    for (std::size_t w = 0; w < nw; ++w) {
        double sum_r = 0.0, sum_a = 0.0;
        for (int p = paths.offsets[w]; p < paths.offsets[w + 1]; ++p) {
            sum_r += f.regular[p];
            sum_a += f.autonomous[p];
        }
        res[2 * w] = std::abs(sum_r - (1.0 - demand.autonomy[w]) * demand.rates[w]);
        res[2 * w + 1] = std::abs(sum_a - demand.autonomy[w] * demand.rates[w]);
    }
    return res;
}

} // namespace routegame
