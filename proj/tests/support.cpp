#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace testsupport {

int NetBuilder::var(const std::string& name, int card, bool graded) {
    net_.variables.push_back(make_variable(name, card, graded));
    return net_.num_nodes() - 1;
}

NetBuilder& NetBuilder::prior(int node, std::vector<GaussianParam> params) {
    TabularCpd t;
    t.child = node;
    t.child_card = net_.cardinality(node);
    t.params = std::move(params);
    cpds_.emplace_back(node, Cpd(std::move(t)));
    return *this;
}

NetBuilder& NetBuilder::table(int node, std::vector<int> parents,
                              std::vector<GaussianParam> params) {
    TabularCpd t;
    t.child = node;
    t.child_card = net_.cardinality(node);
    for (int p : parents) t.parent_cards.push_back(net_.cardinality(p));
    t.parents = std::move(parents);
    t.params = std::move(params);
    cpds_.emplace_back(node, Cpd(std::move(t)));
    return *this;
}

NetBuilder& NetBuilder::gate(int node,
                             std::vector<std::pair<int, std::vector<GaussianParam>>> links,
                             std::vector<GaussianParam> leak) {
    NoisyMaxCpd m;
    m.child = node;
    m.g_child = net_.variables[node].degrees();
    for (auto& [parent, params] : links) {
        NoisyMaxLink link;
        link.parent = parent;
        link.g_u = net_.variables[parent].degrees();
        link.params = std::move(params);
        m.links.push_back(std::move(link));
    }
    m.leak = std::move(leak);
    cpds_.emplace_back(node, Cpd(std::move(m)));
    return *this;
}

Network NetBuilder::build(const Options& opts) {
    std::vector<std::optional<Cpd>> slots(net_.num_nodes());
    for (auto& [node, cpd] : cpds_) {
        if (slots[node]) throw std::logic_error("two families for one node");
        slots[node] = std::move(cpd);
    }
    net_.cpds.clear();
    for (int i = 0; i < net_.num_nodes(); ++i) {
        if (!slots[i]) throw std::logic_error("missing family for node " + std::to_string(i));
        net_.cpds.push_back(std::move(*slots[i]));
    }
    require_valid(net_, opts);
    return net_;
}

Network two_node_chain() {
    NetBuilder b;
    int a = b.var("A", 2);
    int bb = b.var("B", 2);
    b.prior(a, {gp(0.3, 0.05)});
    b.table(bb, {a}, {gp(0.2, 0.04), gp(0.7, 0.05)});
    return b.build();
}

Network gate_chain() {
    NetBuilder b;
    int cold = b.graded_var("Cold", 3);
    int allergy = b.graded_var("Allergy", 2);
    int sneeze = b.graded_var("Sneezing", 3);
    int tissues = b.var("Tissues", 2);
    b.prior(cold, {gp(0.2, 0.03), gp(0.1, 0.02)});
    b.prior(allergy, {gp(0.25, 0.04)});
    b.gate(sneeze,
           {{cold, {gp(0.3, 0.05), gp(0.1, 0.03), gp(0.25, 0.04), gp(0.55, 0.06)}},
            {allergy, {gp(0.4, 0.05), gp(0.2, 0.04)}}},
           {gp(0.05, 0.01), gp(0.02, 0.005)});
    b.table(tissues, {sneeze}, {gp(0.1, 0.02), gp(0.6, 0.05), gp(0.9, 0.02)});
    return b.build();
}

namespace {

Network learn_fixture(bool shifted) {
    auto mean = [&](double truth) { return shifted ? std::min(truth + 0.15, 0.85) : truth; };
    double sigma = shifted ? 0.1 : 0.0;
    NetBuilder b;
    int a = b.graded_var("A", 2);
    int bb = b.graded_var("B", 2);
    int x = b.graded_var("X", 2);
    int y = b.var("Y", 2);
    b.prior(a, {gp(mean(0.35), sigma)});
    b.prior(bb, {gp(mean(0.45), sigma)});
    b.gate(x, {{a, {gp(mean(0.60), sigma)}}, {bb, {gp(mean(0.50), sigma)}}});
    b.table(y, {x}, {gp(mean(0.20), sigma), gp(mean(0.75), sigma)});
    return b.build();
}

}  // namespace

Network learn_start() { return learn_fixture(true); }
Network learn_truth() { return learn_fixture(false); }

namespace {

std::vector<GaussianParam> random_column(Rng& rng, int k) {
    std::vector<double> raw(k);
    double sum = 0.0;
    for (double& r : raw) {
        r = rng.uniform(0.1, 1.0);
        sum += r;
    }
    double total = rng.uniform(0.2, 0.85);
    std::vector<GaussianParam> out;
    for (double r : raw) {
        double mean = r * total / sum;
        double std = rng.bernoulli(0.15)
                         ? 0.0
                         : rng.uniform(0.05, 0.3) * std::min(mean, 1.0 - mean);
        out.push_back({mean, std});
    }
    return out;
}

void append(std::vector<GaussianParam>& dst, std::vector<GaussianParam> src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

Network random_polytree(Rng& rng, int n, bool allow_gates, int max_card) {
    NetBuilder b;
    std::vector<int> cards(n);
    for (int i = 0; i < n; ++i) {
        cards[i] = rng.uniform_int(2, max_card);
        b.graded_var("V" + std::to_string(i), cards[i]);
    }

    std::vector<std::vector<int>> parents(n);
    for (int i = 1; i < n; ++i) {
        int j = rng.uniform_int(0, i - 1);
        bool j_is_parent = rng.bernoulli(0.5);
        // keep family sizes small so tables stay enumerable
        if (!j_is_parent && parents[j].size() >= 4) j_is_parent = true;
        if (j_is_parent && parents[i].size() >= 4) j_is_parent = false;
        if (j_is_parent) {
            parents[i].push_back(j);
        } else {
            parents[j].push_back(i);
        }
    }

    for (int i = 0; i < n; ++i) {
        int k = cards[i] - 1;
        if (parents[i].empty()) {
            b.prior(i, random_column(rng, k));
            continue;
        }
        if (allow_gates && rng.bernoulli(0.5)) {
            std::vector<std::pair<int, std::vector<GaussianParam>>> links;
            for (int p : parents[i]) {
                std::vector<GaussianParam> params;
                for (int u = 1; u < cards[p]; ++u) append(params, random_column(rng, k));
                links.emplace_back(p, std::move(params));
            }
            std::vector<GaussianParam> leak;
            if (rng.bernoulli(0.5)) leak = random_column(rng, k);
            b.gate(i, std::move(links), std::move(leak));
        } else {
            long long configs = 1;
            for (int p : parents[i]) configs *= cards[p];
            std::vector<GaussianParam> params;
            for (long long c = 0; c < configs; ++c) append(params, random_column(rng, k));
            b.table(i, parents[i], std::move(params));
        }
    }
    return b.build();
}

CaseRecord sampled_evidence(const Network& net, std::uint64_t seed, double hide_fraction) {
    return forward_sample(net, 1, seed, hide_fraction)[0];
}

GateFixture random_gate(Rng& rng, int n_parents, int max_degree, bool with_leak) {
    GateFixture fx;
    fx.cpd.child = 0;
    fx.cpd.g_child = rng.uniform_int(1, max_degree);
    for (int i = 0; i < n_parents; ++i) {
        NoisyMaxLink link;
        link.parent = i + 1;
        link.g_u = rng.uniform_int(1, max_degree);
        for (int u = 1; u <= link.g_u; ++u) {
            append(link.params, random_column(rng, fx.cpd.g_child));
        }
        fx.cpd.links.push_back(std::move(link));

        Eigen::VectorXd msg(link.g_u + 1);
        for (int u = 0; u <= link.g_u; ++u) msg[u] = rng.uniform(0.05, 1.0);
        fx.incoming.push_back(msg / msg.sum());
    }
    if (with_leak) fx.cpd.leak = random_column(rng, fx.cpd.g_child);

    fx.lambda.resize(fx.cpd.g_child + 1);
    for (int x = 0; x <= fx.cpd.g_child; ++x) fx.lambda[x] = rng.uniform(0.05, 1.0);
    return fx;
}

Eigen::VectorXd table_pi(const PointCpt& table, const std::vector<Eigen::VectorXd>& incoming) {
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(table.child_card);
    ConfigSpace space = table.config_space();
    std::vector<int> states(table.parent_cards.size(), 0);
    long long cfg = 0;
    do {
        double w = 1.0;
        for (size_t s = 0; s < states.size(); ++s) w *= incoming[s][states[s]];
        pi += w * table.table.col(cfg);
        ++cfg;
    } while (space.advance(states));
    return pi;
}

Eigen::VectorXd table_lambda_msg(const PointCpt& table,
                                 const std::vector<Eigen::VectorXd>& incoming,
                                 const Eigen::VectorXd& lambda, int slot) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(table.parent_cards[slot]);
    ConfigSpace space = table.config_space();
    std::vector<int> states(table.parent_cards.size(), 0);
    long long cfg = 0;
    do {
        double w = 1.0;
        for (size_t s = 0; s < states.size(); ++s) {
            if (static_cast<int>(s) == slot) continue;
            w *= incoming[s][states[s]];
        }
        out[states[slot]] += w * lambda.dot(table.table.col(cfg));
        ++cfg;
    } while (space.advance(states));
    return out;
}

std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR "/") + name; }

std::string golden_path(const std::string& name) { return std::string(GOLDEN_DIR "/") + name; }

Network load_fixture(const std::string& name) {
    NetworkParseResult result = parse_network(read_file(fixture_path(name)));
    if (!result.ok()) {
        throw EngineError("fixture " + name + ":\n" + format_issues(result.errors) +
                          result.validation.summary());
    }
    return std::move(*result.network);
}

std::pair<double, double> affine_moments_1d(double a_eff, double b, const GaussianParam& p) {
    if (p.std == 0.0) return {p.mean, 0.0};
    const int points = 40001;  // odd, for Simpson's rule
    double lo = p.mean - 10.0 * p.std, hi = p.mean + 10.0 * p.std;
    double h = (hi - lo) / (points - 1);
    double z = 0.0, m1c = 0.0, m2c = 0.0;
    for (int i = 0; i < points; ++i) {
        double theta = lo + i * h;
        double coeff = (i == 0 || i == points - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double zscore = (theta - p.mean) / p.std;
        double f = coeff * (a_eff + b * theta) * std::exp(-0.5 * zscore * zscore);
        z += f;
        m1c += f * (theta - p.mean);
        m2c += f * (theta - p.mean) * (theta - p.mean);
    }
    double shift = m1c / z;
    return {p.mean + shift, m2c / z - shift * shift};
}

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testsupport
