#include "adbn/cpt.hpp"

#include <string>
#include <variant>

namespace adbn {

PointCpt mean_cpt(const TabularCpd& cpd) {
    PointCpt out;
    out.child_card = cpd.child_card;
    out.parent_cards = cpd.parent_cards;
    long long configs = cpd.num_configs();
    out.table.resize(cpd.child_card, configs);
    for (long long cfg = 0; cfg < configs; ++cfg) {
        double rest = 0.0;
        for (int x = 1; x < cpd.child_card; ++x) {
            double m = cpd.at(cfg, x).mean;
            out.table(x, cfg) = m;
            rest += m;
        }
        out.table(0, cfg) = 1.0 - rest;
    }
    return out;
}

namespace {

/// factor[u][x] = P(X <= x | U = u, every other cause absent) at means,
/// x in 0..g_x. Row 0 is all ones (an absent cause never raises the child).
std::vector<Eigen::VectorXd> cumulative_factors(const NoisyMaxLink& link, int g_x) {
    std::vector<Eigen::VectorXd> factor(link.g_u + 1, Eigen::VectorXd::Ones(g_x + 1));
    for (int u = 1; u <= link.g_u; ++u) {
        double above = 0.0;  // sum of means for states > x
        for (int x = g_x - 1; x >= 0; --x) {
            above += link.params[(u - 1) * g_x + x].mean;
            factor[u][x] = 1.0 - above;
        }
    }
    return factor;
}

Eigen::VectorXd leak_factor(const NoisyMaxCpd& cpd) {
    Eigen::VectorXd f = Eigen::VectorXd::Ones(cpd.g_child + 1);
    if (!cpd.has_leak()) return f;
    double above = 0.0;
    for (int x = cpd.g_child - 1; x >= 0; --x) {
        above += cpd.leak[x].mean;
        f[x] = 1.0 - above;
    }
    return f;
}

}  // namespace

PointCpt expand_noisy_max(const NoisyMaxCpd& cpd, long long cap) {
    PointCpt out;
    out.child_card = cpd.g_child + 1;

    long long configs = 1;
    for (const auto& link : cpd.links) {
        out.parent_cards.push_back(link.g_u + 1);
        if (configs > cap / (link.g_u + 1)) {
            throw CapExceededError("noisy-MAX expansion exceeds cap of " + std::to_string(cap) +
                                   " configurations");
        }
        configs *= link.g_u + 1;
    }

    std::vector<std::vector<Eigen::VectorXd>> factors;
    factors.reserve(cpd.links.size());
    for (const auto& link : cpd.links) factors.push_back(cumulative_factors(link, cpd.g_child));
    Eigen::VectorXd leak = leak_factor(cpd);

    out.table.resize(out.child_card, configs);
    ConfigSpace space(out.parent_cards);
    std::vector<int> states(cpd.links.size(), 0);
    long long cfg = 0;
    do {
        double below = 0.0;  // C(x-1)
        for (int x = 0; x <= cpd.g_child; ++x) {
            double c = leak[x];
            for (size_t i = 0; i < cpd.links.size(); ++i) c *= factors[i][states[i]][x];
            out.table(x, cfg) = c - below;
            below = c;
        }
        ++cfg;
    } while (space.advance(states));
    return out;
}

PointCpt point_cpt(const Cpd& cpd, long long expand_cap) {
    if (const auto* t = std::get_if<TabularCpd>(&cpd)) return mean_cpt(*t);
    return expand_noisy_max(std::get<NoisyMaxCpd>(cpd), expand_cap);
}

}  // namespace adbn
