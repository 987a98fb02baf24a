#include "adbn/propagation.hpp"

#include <optional>

namespace adbn {

namespace {

/// Suffix sums of a link's mean parameters for one cause state:
/// s[x] = sum of mean(theta_{x'}^u) over x' > x, for x in 0..g. Computed by
/// accumulation from the top state, so s is non-increasing even in floating
/// point; downstream cumulative vectors inherit monotonicity and the gate
/// distributions stay non-negative without clamping.
Eigen::VectorXd suffix_means(const NoisyMaxLink& link, int u, int g, OpCount& ops) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(g + 1);
    for (int x = g - 1; x >= 0; --x) {
        s[x] = s[x + 1] + link.params[(u - 1) * g + x].mean;
        ++ops.add;
    }
    return s;
}

Eigen::VectorXd leak_suffix(const NoisyMaxCpd& cpd, OpCount& ops) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(cpd.g_child + 1);
    for (int x = cpd.g_child - 1; x >= 0; --x) {
        s[x] = s[x + 1] + cpd.leak[x].mean;
        ++ops.add;
    }
    return s;
}

/// q[x] = 1 - sum_u pi(u) s_u[x] for one real link.
Eigen::VectorXd link_q(const NoisyMaxCpd& cpd, int li, const Eigen::VectorXd& pi_msg,
                       OpCount& ops) {
    int g = cpd.g_child;
    const NoisyMaxLink& link = cpd.links[li];
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(g + 1);
    for (int u = 1; u <= link.g_u; ++u) {
        Eigen::VectorXd s = suffix_means(link, u, g, ops);
        for (int x = 0; x <= g; ++x) {
            acc[x] += pi_msg[u] * s[x];
            ++ops.mul;
            ++ops.add;
        }
    }
    Eigen::VectorXd q(g + 1);
    for (int x = 0; x <= g; ++x) {
        q[x] = 1.0 - acc[x];
        ++ops.add;
    }
    return q;
}

std::vector<Eigen::VectorXd> all_link_q(const NoisyMaxCpd& cpd,
                                        const std::vector<Eigen::VectorXd>& incoming,
                                        OpCount& ops) {
    std::vector<Eigen::VectorXd> qs;
    qs.reserve(cpd.num_effective_links());
    for (int li = 0; li < cpd.num_links(); ++li) qs.push_back(link_q(cpd, li, incoming[li], ops));
    if (cpd.has_leak()) {
        Eigen::VectorXd s = leak_suffix(cpd, ops);
        Eigen::VectorXd q(cpd.g_child + 1);
        for (int x = 0; x <= cpd.g_child; ++x) {
            q[x] = 1.0 - s[x];
            ++ops.add;
        }
        qs.push_back(q);
    }
    return qs;
}

}  // namespace

NoisyMaxPiResult noisy_max_pi(const NoisyMaxCpd& cpd,
                              const std::vector<Eigen::VectorXd>& incoming, OpCount* ops) {
    OpCount local;
    int g = cpd.g_child;
    NoisyMaxPiResult out;
    out.profile.per_link = all_link_q(cpd, incoming, local);

    Eigen::VectorXd q = Eigen::VectorXd::Ones(g + 1);
    for (const Eigen::VectorXd& lq : out.profile.per_link) {
        for (int x = 0; x <= g; ++x) {
            q[x] *= lq[x];
            ++local.mul;
        }
    }
    out.profile.q = q;

    out.pi.resize(g + 1);
    out.pi[0] = q[0];
    for (int x = 1; x <= g; ++x) {
        out.pi[x] = q[x] - q[x - 1];
        ++local.add;
    }
    if (ops) {
        ops->mul += local.mul;
        ops->add += local.add;
    }
    return out;
}

std::vector<Eigen::VectorXd> noisy_max_lambda(const NoisyMaxCpd& cpd,
                                              const std::vector<Eigen::VectorXd>& incoming,
                                              const Eigen::VectorXd& lambda, OpCount* ops) {
    OpCount local;
    int g = cpd.g_child;
    std::vector<Eigen::VectorXd> qs = all_link_q(cpd, incoming, local);
    int m = static_cast<int>(qs.size());

    // suffix products of the q vectors; suf[i] = q_i * q_{i+1} * ... * q_{m-1}
    std::vector<Eigen::VectorXd> suf(m + 1, Eigen::VectorXd::Ones(g + 1));
    for (int i = m - 1; i >= 0; --i) {
        for (int x = 0; x <= g; ++x) {
            suf[i][x] = qs[i][x] * suf[i + 1][x];
            ++local.mul;
        }
    }

    std::vector<Eigen::VectorXd> out(cpd.num_links());
    Eigen::VectorXd pre = Eigen::VectorXd::Ones(g + 1);
    for (int li = 0; li < cpd.num_links(); ++li) {
        const NoisyMaxLink& link = cpd.links[li];
        Eigen::VectorXd other(g + 1);  // product of every other link's q
        for (int x = 0; x <= g; ++x) {
            other[x] = pre[x] * suf[li + 1][x];
            ++local.mul;
        }

        Eigen::VectorXd result(link.g_u + 1);
        for (int u = 0; u <= link.g_u; ++u) {
            std::optional<Eigen::VectorXd> s;
            if (u > 0) s = suffix_means(link, u, g, local);
            double below = 0.0;  // C(x-1)
            double total = 0.0;
            for (int x = 0; x <= g; ++x) {
                double f = s ? 1.0 - (*s)[x] : 1.0;
                double c = other[x] * f;
                total += lambda[x] * (c - below);
                local.mul += 2;
                local.add += 3;
                below = c;
            }
            result[u] = total;
        }
        out[li] = result;

        for (int x = 0; x <= g; ++x) {
            pre[x] *= qs[li][x];
            ++local.mul;
        }
    }
    if (ops) {
        ops->mul += local.mul;
        ops->add += local.add;
    }
    return out;
}

namespace {

struct Neighbor {
    int other;       // neighbouring node
    bool is_parent;  // true: other is a parent of this node
    int slot;        // parent-slot index in the child's parent list
};

struct Topology {
    std::vector<std::vector<Neighbor>> adj;
    std::vector<std::vector<int>> parents;
};

Topology build_topology(const Network& net) {
    Topology t;
    t.adj.resize(net.num_nodes());
    t.parents.resize(net.num_nodes());
    for (int node = 0; node < net.num_nodes(); ++node) {
        t.parents[node] = parents_of(net.cpds[node]);
        for (int slot = 0; slot < static_cast<int>(t.parents[node].size()); ++slot) {
            int p = t.parents[node][slot];
            t.adj[node].push_back({p, true, slot});
            t.adj[p].push_back({node, false, slot});
        }
    }
    return t;
}

class Propagator {
  public:
    Propagator(const Network& net, const CaseRecord& record, const Options& opts)
        : net_(net), record_(record), opts_(opts), topo_(build_topology(net)) {
        msgs_.pi.resize(net.num_nodes());
        msgs_.lambda.resize(net.num_nodes());
        msgs_.pi_from_parent.resize(net.num_nodes());
        msgs_.lambda_to_parent.resize(net.num_nodes());
        msgs_.q_profile.resize(net.num_nodes());
        for (int node = 0; node < net.num_nodes(); ++node) {
            msgs_.pi_from_parent[node].resize(topo_.parents[node].size());
            msgs_.lambda_to_parent[node].resize(topo_.parents[node].size());
        }
        mean_tables_.resize(net.num_nodes());
        for (int node = 0; node < net.num_nodes(); ++node) {
            if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
                mean_tables_[node] = mean_cpt(*t);
            }
        }
    }

    MessageSet run() {
        check_evidence();
        std::vector<bool> seen(net_.num_nodes(), false);
        for (int root = 0; root < net_.num_nodes(); ++root) {
            if (seen[root]) continue;
            auto [order, tree_parent] = bfs(root, seen);
            // collect: leaves towards the root
            for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
                send(order[i], tree_parent[order[i]], /*in_collect=*/true);
            }
            Eigen::VectorXd bel = node_pi(root, nullptr).cwiseProduct(node_lambda(root));
            double total = bel.sum();
            if (total <= 0.0) throw ZeroEvidenceError(net_.variables[root].name);
            msgs_.evidence_probability *= total;
            // distribute: root towards the leaves
            for (size_t i = 1; i < order.size(); ++i) {
                send(tree_parent[order[i]], order[i], /*in_collect=*/false);
            }
        }
        finalize();
        return std::move(msgs_);
    }

  private:
    void check_evidence() {
        for (const auto& [node, state] : record_.assignments) {
            if (node < 0 || node >= net_.num_nodes()) {
                throw EngineError("evidence names an unknown node");
            }
            if (state < 0 || state >= net_.cardinality(node)) {
                throw EngineError("evidence state out of range at '" +
                                  net_.variables[node].name + "'");
            }
        }
    }

    std::pair<std::vector<int>, std::vector<int>> bfs(int root, std::vector<bool>& seen) {
        std::vector<int> order{root}, tree_parent(net_.num_nodes(), -1);
        seen[root] = true;
        for (size_t head = 0; head < order.size(); ++head) {
            int node = order[head];
            for (const Neighbor& nb : topo_.adj[node]) {
                if (seen[nb.other]) continue;
                seen[nb.other] = true;
                tree_parent[nb.other] = node;
                order.push_back(nb.other);
            }
        }
        return {order, tree_parent};
    }

    Eigen::VectorXd evidence_vector(int node) const {
        Eigen::VectorXd e = Eigen::VectorXd::Ones(net_.cardinality(node));
        auto it = record_.assignments.find(node);
        if (it != record_.assignments.end()) {
            e.setZero();
            e[it->second] = 1.0;
        }
        return e;
    }

    /// lambda(x): own evidence times every received child message.
    Eigen::VectorXd node_lambda(int node) const {
        Eigen::VectorXd lam = evidence_vector(node);
        for (const Neighbor& nb : topo_.adj[node]) {
            if (nb.is_parent) continue;
            const Eigen::VectorXd& m = msgs_.lambda_to_parent[nb.other][nb.slot];
            if (m.size() > 0) lam = lam.cwiseProduct(m);
        }
        return lam;
    }

    /// pi(x) from the received parent messages; sums to 1 because they are
    /// normalized. Stores the gate profile when profile != nullptr.
    Eigen::VectorXd node_pi(int node, QProfile* profile) const {
        if (const auto* t = std::get_if<TabularCpd>(&net_.cpds[node])) {
            const PointCpt& table = *mean_tables_[node];
            Eigen::VectorXd pi = Eigen::VectorXd::Zero(t->child_card);
            ConfigSpace space = t->config_space();
            std::vector<int> states(t->parents.size(), 0);
            long long cfg = 0;
            for (size_t s = 0; s < t->parents.size(); ++s) {
                if (msgs_.pi_from_parent[node][s].size() == 0) {
                    throw EngineError("internal: parent message not yet received");
                }
            }
            do {
                double w = 1.0;
                for (size_t s = 0; s < states.size(); ++s) {
                    w *= msgs_.pi_from_parent[node][s][states[s]];
                }
                pi += w * table.table.col(cfg);
                ++cfg;
            } while (space.advance(states));
            return pi;
        }
        const auto& m = std::get<NoisyMaxCpd>(net_.cpds[node]);
        for (const Eigen::VectorXd& msg : msgs_.pi_from_parent[node]) {
            if (msg.size() == 0) throw EngineError("internal: parent message not yet received");
        }
        NoisyMaxPiResult res = noisy_max_pi(m, msgs_.pi_from_parent[node]);
        if (profile) *profile = res.profile;
        return res.pi;
    }

    /// Message from parent to child: the parent's belief with the child's
    /// own contribution left out, normalized to sum 1.
    void send_pi(int parent, int child, int slot, bool in_collect) {
        Eigen::VectorXd raw = node_pi(parent, nullptr).cwiseProduct(evidence_vector(parent));
        for (const Neighbor& nb : topo_.adj[parent]) {
            if (nb.is_parent || (nb.other == child && nb.slot == slot)) continue;
            const Eigen::VectorXd& m = msgs_.lambda_to_parent[nb.other][nb.slot];
            if (m.size() > 0) raw = raw.cwiseProduct(m);
        }
        double kappa = raw.sum();
        if (kappa <= 0.0) throw ZeroEvidenceError(net_.variables[parent].name);
        msgs_.pi_from_parent[child][slot] = raw / kappa;
        // Only scales applied below the root feed its belief; the root's
        // normalizer and these together reassemble P(evidence).
        if (in_collect) msgs_.evidence_probability *= kappa;
    }

    /// Message from child to parent: the child's lambda pushed through the
    /// family, weighting the other parents by their received messages.
    void send_lambda(int child, int parent, int slot) {
        Eigen::VectorXd lam = node_lambda(child);
        Eigen::VectorXd out;
        if (const auto* t = std::get_if<TabularCpd>(&net_.cpds[child])) {
            const PointCpt& table = *mean_tables_[child];
            out = Eigen::VectorXd::Zero(net_.cardinality(parent));
            ConfigSpace space = t->config_space();
            std::vector<int> states(t->parents.size(), 0);
            long long cfg = 0;
            for (size_t s = 0; s < t->parents.size(); ++s) {
                if (static_cast<int>(s) != slot && msgs_.pi_from_parent[child][s].size() == 0) {
                    throw EngineError("internal: parent message not yet received");
                }
            }
            do {
                double w = 1.0;
                for (size_t s = 0; s < states.size(); ++s) {
                    if (static_cast<int>(s) == slot) continue;
                    w *= msgs_.pi_from_parent[child][s][states[s]];
                }
                out[states[slot]] += w * lam.dot(table.table.col(cfg));
                ++cfg;
            } while (space.advance(states));
        } else {
            const auto& m = std::get<NoisyMaxCpd>(net_.cpds[child]);
            out = noisy_max_lambda(m, placeholder_filled(child), lam)[slot];
        }
        if (out.maxCoeff() <= 0.0) throw ZeroEvidenceError(net_.variables[child].name);
        msgs_.lambda_to_parent[child][slot] = out;
    }

    /// Incoming messages with unreceived slots replaced by uniform vectors.
    /// The gate lambda path never reads the target link's own message, so a
    /// placeholder there does not affect the result.
    std::vector<Eigen::VectorXd> placeholder_filled(int child) const {
        std::vector<Eigen::VectorXd> in = msgs_.pi_from_parent[child];
        for (size_t s = 0; s < in.size(); ++s) {
            if (in[s].size() == 0) {
                int card = net_.cardinality(topo_.parents[child][s]);
                in[s] = Eigen::VectorXd::Constant(card, 1.0 / card);
            }
        }
        return in;
    }

    void send(int from, int to, bool in_collect) {
        for (const Neighbor& nb : topo_.adj[from]) {
            if (nb.other != to) continue;
            if (nb.is_parent) {
                send_lambda(from, to, nb.slot);  // "to" is a parent of "from"
            } else {
                send_pi(from, to, nb.slot, in_collect);
            }
            return;
        }
        throw EngineError("internal: message along a non-edge");
    }

    void finalize() {
        for (int node = 0; node < net_.num_nodes(); ++node) {
            msgs_.pi[node] = node_pi(node, &msgs_.q_profile[node]);
            msgs_.lambda[node] = node_lambda(node);
        }
    }

    const Network& net_;
    const CaseRecord& record_;
    const Options& opts_;
    Topology topo_;
    MessageSet msgs_;
    std::vector<std::optional<PointCpt>> mean_tables_;
};

}  // namespace

MessageSet propagate(const Network& net, const CaseRecord& record, const Options& opts) {
    return Propagator(net, record, opts).run();
}

Eigen::VectorXd posterior_marginal(const MessageSet& msgs, int node) {
    Eigen::VectorXd bel = msgs.pi[node].cwiseProduct(msgs.lambda[node]);
    double total = bel.sum();
    if (total <= 0.0) throw EngineError("zero belief after propagation");
    return bel / total;
}

}  // namespace adbn
