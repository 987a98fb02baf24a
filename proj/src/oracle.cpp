#include "adbn/oracle.hpp"

#include <cmath>
#include <set>
#include <string>

#include "adbn/rng.hpp"

namespace adbn {

namespace {

struct FamilyTables {
    std::vector<PointCpt> tables;
    std::vector<std::vector<int>> parents;
    std::vector<ConfigSpace> spaces;
};

FamilyTables build_tables(const Network& net, const Options& opts) {
    FamilyTables out;
    for (const Cpd& cpd : net.cpds) {
        out.tables.push_back(point_cpt(cpd, opts.expand_cap));
        out.parents.push_back(parents_of(cpd));
        out.spaces.emplace_back(out.tables.back().parent_cards);
    }
    return out;
}

long long parent_config(const FamilyTables& fams, int node, const std::vector<int>& assign) {
    std::vector<int> pstates;
    pstates.reserve(fams.parents[node].size());
    for (int p : fams.parents[node]) pstates.push_back(assign[p]);
    return fams.spaces[node].flat(pstates);
}

std::vector<int> topological_order(const Network& net) {
    std::vector<int> indeg(net.num_nodes(), 0);
    for (int i = 0; i < net.num_nodes(); ++i) {
        indeg[i] = static_cast<int>(parents_of(net.cpds[i]).size());
    }
    auto children = children_of(net);
    std::vector<int> order, queue;
    for (int i = net.num_nodes() - 1; i >= 0; --i) {
        if (indeg[i] == 0) queue.push_back(i);
    }
    while (!queue.empty()) {
        int n = queue.back();
        queue.pop_back();
        order.push_back(n);
        for (auto [c, slot] : children[n]) {
            if (--indeg[c] == 0) queue.push_back(c);
        }
    }
    if (static_cast<int>(order.size()) != net.num_nodes()) {
        throw InvalidNetworkError("directed cycle");
    }
    return order;
}

}  // namespace

JointTable enumerate_joint(const Network& net, const Options& opts) {
    JointTable joint;
    long long total = 1;
    for (const Variable& v : net.variables) {
        joint.cards.push_back(v.cardinality());
        if (total > opts.joint_cap / v.cardinality()) {
            throw CapExceededError("joint state space exceeds cap of " +
                                   std::to_string(opts.joint_cap) + " entries");
        }
        total *= v.cardinality();
    }

    FamilyTables fams = build_tables(net, opts);
    joint.p.resize(total);
    ConfigSpace all(joint.cards);
    std::vector<int> assign(net.num_nodes(), 0);
    long long idx = 0;
    do {
        double prob = 1.0;
        for (int node = 0; node < net.num_nodes(); ++node) {
            prob *= fams.tables[node].table(assign[node], parent_config(fams, node, assign));
        }
        joint.p[idx++] = prob;
    } while (all.advance(assign));
    return joint;
}

OracleResult oracle_conditional(const JointTable& joint, const CaseRecord& record) {
    OracleResult out;
    int n = static_cast<int>(joint.cards.size());
    for (int i = 0; i < n; ++i) out.marginals.push_back(Eigen::VectorXd::Zero(joint.cards[i]));

    ConfigSpace all = joint.config_space();
    std::vector<int> assign(n, 0);
    long long idx = 0;
    do {
        double p = joint.p[idx++];
        bool consistent = true;
        for (const auto& [node, state] : record.assignments) {
            if (assign[node] != state) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        out.evidence_probability += p;
        for (int i = 0; i < n; ++i) out.marginals[i][assign[i]] += p;
    } while (all.advance(assign));

    if (out.evidence_probability > 0.0) {
        for (auto& m : out.marginals) m /= out.evidence_probability;
    }
    return out;
}

namespace {

// 10-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlPoints = 10;
constexpr double kGlNode[kGlPoints] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
constexpr double kGlWeight[kGlPoints] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

/// Composite rule over [0, 1] with at least min_nodes points.
void composite_gl(int min_nodes, std::vector<double>& nodes, std::vector<double>& weights) {
    int panels = (min_nodes + kGlPoints - 1) / kGlPoints;
    double h = 1.0 / panels;
    nodes.clear();
    weights.clear();
    for (int j = 0; j < panels; ++j) {
        for (int k = 0; k < kGlPoints; ++k) {
            nodes.push_back(h * (j + 0.5 + 0.5 * kGlNode[k]));
            weights.push_back(0.5 * h * kGlWeight[k]);
        }
    }
}

double gauss_pdf(double x, double mean, double std) {
    constexpr double kSqrt2Pi = 2.5066282746310002;
    double z = (x - mean) / std;
    return std::exp(-0.5 * z * z) / (std * kSqrt2Pi);
}

/// Likelihood P(e | theta) evaluated over the evidence-consistent assignments,
/// split into a fixed part and the target families' table lookups.
struct LikelihoodGrid {
    std::vector<double> base;                       // product of non-target families
    std::vector<int> family_nodes;                  // nodes owning a target
    std::vector<std::vector<int>> child_state;      // [family][assignment]
    std::vector<std::vector<long long>> parent_cfg; // [family][assignment]
};

LikelihoodGrid build_likelihood_grid(const Network& net, const CaseRecord& record,
                                     const std::set<int>& target_nodes, const Options& opts) {
    FamilyTables fams = build_tables(net, opts);
    LikelihoodGrid grid;
    grid.family_nodes.assign(target_nodes.begin(), target_nodes.end());
    grid.child_state.resize(grid.family_nodes.size());
    grid.parent_cfg.resize(grid.family_nodes.size());

    std::vector<int> cards;
    for (const Variable& v : net.variables) cards.push_back(v.cardinality());
    ConfigSpace all(cards);
    std::vector<int> assign(net.num_nodes(), 0);
    do {
        bool consistent = true;
        for (const auto& [node, state] : record.assignments) {
            if (assign[node] != state) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        double base = 1.0;
        for (int node = 0; node < net.num_nodes(); ++node) {
            if (target_nodes.count(node)) continue;
            base *= fams.tables[node].table(assign[node], parent_config(fams, node, assign));
        }
        grid.base.push_back(base);
        for (size_t f = 0; f < grid.family_nodes.size(); ++f) {
            int node = grid.family_nodes[f];
            grid.child_state[f].push_back(assign[node]);
            grid.parent_cfg[f].push_back(parent_config(fams, node, assign));
        }
    } while (all.advance(assign));
    return grid;
}

}  // namespace

QuadratureMoments posterior_moment_quadrature(const Network& net, const CaseRecord& record,
                                              const std::vector<ParamRef>& targets,
                                              const Options& opts) {
    QuadratureMoments out;
    out.mean.resize(targets.size());
    out.var.resize(targets.size());

    std::vector<int> active;  // indices into targets with std > 0
    for (size_t i = 0; i < targets.size(); ++i) {
        const GaussianParam& p = get_param(net, targets[i]);
        out.mean[i] = p.mean;
        out.var[i] = 0.0;
        if (p.std > 0.0) active.push_back(static_cast<int>(i));
    }
    if (active.size() > 3) {
        throw EngineError("quadrature supports at most three uncertain parameters");
    }

    std::set<int> target_nodes;
    for (const ParamRef& ref : targets) target_nodes.insert(ref.node);
    LikelihoodGrid grid = build_likelihood_grid(net, record, target_nodes, opts);

    std::vector<double> nodes, weights;
    composite_gl(opts.quad_nodes, nodes, weights);
    int per_dim = static_cast<int>(nodes.size());
    int dims = static_cast<int>(active.size());

    Network work = net;
    std::vector<double> mu(dims), sigma(dims);
    for (int d = 0; d < dims; ++d) {
        const GaussianParam& p = get_param(net, targets[active[d]]);
        mu[d] = p.mean;
        sigma[d] = p.std;
    }

    double z = 0.0;
    std::vector<double> m1c(dims, 0.0), m2c(dims, 0.0);
    std::vector<int> pos(dims, 0);
    std::vector<PointCpt> family_tables(grid.family_nodes.size());
    bool more = true;
    while (more) {
        double wp = 1.0;
        for (int d = 0; d < dims; ++d) {
            double theta = nodes[pos[d]];
            wp *= weights[pos[d]] * gauss_pdf(theta, mu[d], sigma[d]);
            GaussianParam p = get_param(work, targets[active[d]]);
            p.mean = theta;
            set_param(work, targets[active[d]], p);
        }
        for (size_t f = 0; f < grid.family_nodes.size(); ++f) {
            family_tables[f] = point_cpt(work.cpds[grid.family_nodes[f]], opts.expand_cap);
        }
        double like = 0.0;
        for (size_t k = 0; k < grid.base.size(); ++k) {
            double term = grid.base[k];
            for (size_t f = 0; f < grid.family_nodes.size(); ++f) {
                term *= family_tables[f].table(grid.child_state[f][k], grid.parent_cfg[f][k]);
            }
            like += term;
        }
        double contrib = wp * like;
        z += contrib;
        for (int d = 0; d < dims; ++d) {
            double centered = nodes[pos[d]] - mu[d];
            m1c[d] += contrib * centered;
            m2c[d] += contrib * centered * centered;
        }

        more = false;  // dims == 0 evaluates once, at the means
        for (int d = dims - 1; d >= 0; --d) {
            if (++pos[d] < per_dim) {
                more = true;
                break;
            }
            pos[d] = 0;
        }
    }

    if (z <= 0.0) throw EngineError("evidence has zero probability under quadrature");
    out.evidence = z;
    for (int d = 0; d < dims; ++d) {
        double shift = m1c[d] / z;
        out.mean[active[d]] = mu[d] + shift;
        out.var[active[d]] = m2c[d] / z - shift * shift;
    }
    return out;
}

std::vector<CaseRecord> forward_sample(const Network& net, int n, std::uint64_t seed,
                                       double mask_fraction) {
    std::vector<int> order = topological_order(net);
    Options opts;

    // Per-node samplers: full mean table for tabular families; per-cause
    // degree distributions for MAX gates (sampled as a max, no expansion).
    struct MaxSampler {
        std::vector<std::vector<Eigen::VectorXd>> per_link;  // [link][u] -> dist over x
        Eigen::VectorXd leak;                                // dist over x, empty if none
    };
    std::vector<PointCpt> tables(net.num_nodes());
    std::vector<MaxSampler> gates(net.num_nodes());
    std::vector<ConfigSpace> spaces(net.num_nodes());
    std::vector<std::vector<int>> parents(net.num_nodes());
    for (int node = 0; node < net.num_nodes(); ++node) {
        parents[node] = parents_of(net.cpds[node]);
        if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
            tables[node] = mean_cpt(*t);
            spaces[node] = tables[node].config_space();
            continue;
        }
        const auto& m = std::get<NoisyMaxCpd>(net.cpds[node]);
        MaxSampler& g = gates[node];
        g.per_link.resize(m.num_links());
        for (int li = 0; li < m.num_links(); ++li) {
            g.per_link[li].resize(m.links[li].g_u + 1);
            for (int u = 0; u <= m.links[li].g_u; ++u) {
                Eigen::VectorXd dist = Eigen::VectorXd::Zero(m.g_child + 1);
                if (u == 0) {
                    dist[0] = 1.0;
                } else {
                    double rest = 0.0;
                    for (int x = 1; x <= m.g_child; ++x) {
                        dist[x] = m.link_param(li, u, x).mean;
                        rest += dist[x];
                    }
                    dist[0] = 1.0 - rest;
                }
                g.per_link[li][u] = dist;
            }
        }
        if (m.has_leak()) {
            Eigen::VectorXd dist = Eigen::VectorXd::Zero(m.g_child + 1);
            double rest = 0.0;
            for (int x = 1; x <= m.g_child; ++x) {
                dist[x] = m.leak_param(x).mean;
                rest += dist[x];
            }
            dist[0] = 1.0 - rest;
            g.leak = dist;
        }
    }

    Rng rng(seed);
    std::vector<CaseRecord> cases;
    cases.reserve(n);
    std::vector<int> assign(net.num_nodes(), 0);
    for (int c = 0; c < n; ++c) {
        for (int node : order) {
            if (std::get_if<TabularCpd>(&net.cpds[node])) {
                std::vector<int> pstates;
                for (int p : parents[node]) pstates.push_back(assign[p]);
                assign[node] =
                    rng.categorical(tables[node].table.col(spaces[node].flat(pstates)));
            } else {
                const MaxSampler& g = gates[node];
                int value = 0;
                for (size_t li = 0; li < g.per_link.size(); ++li) {
                    int u = assign[parents[node][li]];
                    value = std::max(value, rng.categorical(g.per_link[li][u]));
                }
                if (g.leak.size() > 0) value = std::max(value, rng.categorical(g.leak));
                assign[node] = value;
            }
        }
        CaseRecord record;
        for (int node = 0; node < net.num_nodes(); ++node) {
            bool hide = mask_fraction > 0.0 && rng.bernoulli(mask_fraction);
            if (!hide) record.assignments[node] = assign[node];
        }
        cases.push_back(std::move(record));
    }
    return cases;
}

}  // namespace adbn
