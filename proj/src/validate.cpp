#include "adbn/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace adbn {

namespace {

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    /// Returns false when the edge closes a cycle.
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent_[ra] = rb;
        return true;
    }

  private:
    std::vector<int> parent_;
};

struct Checker {
    const Network& net;
    const Options& opts;
    ValidationReport report;

    void error(std::string where, std::string message) {
        report.errors.push_back({std::move(where), std::move(message)});
    }
    void warn(std::string where, std::string message) {
        report.warnings.push_back({std::move(where), std::move(message)});
    }

    void check_variables() {
        std::set<std::string> seen;
        for (const Variable& v : net.variables) {
            if (!seen.insert(v.name).second) error(v.name, "duplicate variable name");
            if (v.cardinality() < 2) error(v.name, "cardinality must be at least 2");
            std::set<std::string> states(v.states.begin(), v.states.end());
            if (states.size() != v.states.size()) error(v.name, "duplicate state names");
            if (v.graded && !v.states.empty() && v.states[0] != "absent") {
                warn(v.name, "graded variable's state 0 is not named \"absent\"");
            }
        }
    }

    void check_structure() {
        if (static_cast<int>(net.cpds.size()) != net.num_nodes()) {
            error("network", "expected exactly one CPD per variable");
            return;
        }
        for (int i = 0; i < net.num_nodes(); ++i) {
            if (child_of(net.cpds[i]) != i) {
                error(net.variables[i].name, "CPD child index does not match its slot");
                return;
            }
        }

        UnionFind uf(net.num_nodes());
        bool tree = true;
        for (int i = 0; i < net.num_nodes(); ++i) {
            auto parents = parents_of(net.cpds[i]);
            std::set<int> distinct(parents.begin(), parents.end());
            if (distinct.size() != parents.size()) {
                error(net.variables[i].name, "duplicate parent");
                tree = false;
            }
            for (int p : parents) {
                if (p < 0 || p >= net.num_nodes()) {
                    error(net.variables[i].name, "parent index out of range");
                    return;
                }
                if (p == i) {
                    error(net.variables[i].name, "variable cannot be its own parent");
                    tree = false;
                    continue;
                }
                if (!uf.unite(p, i)) tree = false;
            }
        }
        if (!tree) {
            error("network", "not singly connected: the underlying undirected graph has a cycle");
        }

        // Directed acyclicity (Kahn). Subsumed by the undirected check, but
        // reported separately so the message names the actual defect.
        std::vector<int> indreg(net.num_nodes(), 0);
        for (int i = 0; i < net.num_nodes(); ++i) {
            indreg[i] = static_cast<int>(parents_of(net.cpds[i]).size());
        }
        auto children = children_of(net);
        std::vector<int> queue;
        for (int i = 0; i < net.num_nodes(); ++i) {
            if (indreg[i] == 0) queue.push_back(i);
        }
        int visited = 0;
        while (!queue.empty()) {
            int n = queue.back();
            queue.pop_back();
            ++visited;
            for (auto [c, slot] : children[n]) {
                if (--indreg[c] == 0) queue.push_back(c);
            }
        }
        if (visited != net.num_nodes()) error("network", "directed cycle");
    }

    void check_param(const std::string& where, const GaussianParam& p) {
        if (!std::isfinite(p.mean) || !std::isfinite(p.std)) {
            error(where, "non-finite parameter");
            return;
        }
        if (p.mean <= 0.0 || p.mean >= 1.0) {
            error(where, "mean must lie strictly inside (0,1)");
            return;
        }
        if (p.std < 0.0) {
            error(where, "negative std");
            return;
        }
        double margin = std::min(p.mean, 1.0 - p.mean);
        if (p.std >= margin) {
            error(where, "std reaches min(mean, 1-mean); the Gaussian model breaks down");
        } else if (p.std > opts.warn_ratio * margin) {
            std::ostringstream os;
            os << "std exceeds " << opts.warn_ratio << " * min(mean, 1-mean)";
            warn(where, os.str());
        }
    }

    void check_column(const std::string& where, double sum) {
        if (sum >= 1.0) error(where, "column means sum to >= 1; state-0 probability vanishes");
    }

    void check_tabular(int node, const TabularCpd& t) {
        const std::string& name = net.variables[node].name;
        if (t.child_card != net.cardinality(node)) {
            error(name, "child cardinality mismatch");
            return;
        }
        if (t.parent_cards.size() != t.parents.size()) {
            error(name, "parent cardinality list size mismatch");
            return;
        }
        for (size_t i = 0; i < t.parents.size(); ++i) {
            if (t.parent_cards[i] != net.cardinality(t.parents[i])) {
                error(name, "parent cardinality mismatch for " + net.variables[t.parents[i]].name);
                return;
            }
        }
        long long expected = t.num_configs() * (t.child_card - 1);
        if (static_cast<long long>(t.params.size()) != expected) {
            error(name, "wrong parameter count: expected " + std::to_string(expected) +
                            ", got " + std::to_string(t.params.size()));
            return;
        }
        for (long long cfg = 0; cfg < t.num_configs(); ++cfg) {
            double sum = 0.0;
            for (int x = 1; x < t.child_card; ++x) {
                ParamRef ref{node, ParamRef::Kind::Table, cfg, -1, 0, x};
                check_param(describe(net, ref), t.at(cfg, x));
                sum += t.at(cfg, x).mean;
            }
            check_column(name + " config " + std::to_string(cfg), sum);
        }
    }

    void check_noisy_max(int node, const NoisyMaxCpd& m) {
        const std::string& name = net.variables[node].name;
        if (!net.variables[node].graded) {
            error(name, "noisy-MAX child must be a graded variable");
        }
        if (m.g_child != net.cardinality(node) - 1) {
            error(name, "gate degree count does not match child cardinality");
            return;
        }
        for (int li = 0; li < m.num_links(); ++li) {
            const NoisyMaxLink& link = m.links[li];
            if (link.parent < 0 || link.parent >= net.num_nodes()) continue;  // reported above
            const Variable& parent = net.variables[link.parent];
            if (!parent.graded) {
                error(name, "noisy-MAX cause " + parent.name + " must be a graded variable");
            }
            if (link.g_u != parent.cardinality() - 1) {
                error(name, "link degree count mismatch for cause " + parent.name);
                continue;
            }
            if (static_cast<long long>(link.params.size()) !=
                static_cast<long long>(link.g_u) * m.g_child) {
                error(name, "wrong link parameter count for cause " + parent.name);
                continue;
            }
            for (int u = 1; u <= link.g_u; ++u) {
                double sum = 0.0;
                for (int x = 1; x <= m.g_child; ++x) {
                    ParamRef ref{node, ParamRef::Kind::MaxLink, 0, li, u, x};
                    check_param(describe(net, ref), m.link_param(li, u, x));
                    sum += m.link_param(li, u, x).mean;
                }
                check_column(name + " link " + parent.name + " u=" + std::to_string(u), sum);
            }
        }
        if (m.has_leak()) {
            if (static_cast<int>(m.leak.size()) != m.g_child) {
                error(name, "leak parameter count must equal the child's degree count");
                return;
            }
            double sum = 0.0;
            for (int x = 1; x <= m.g_child; ++x) {
                ParamRef ref{node, ParamRef::Kind::Leak, 0, -1, 0, x};
                check_param(describe(net, ref), m.leak_param(x));
                sum += m.leak_param(x).mean;
            }
            check_column(name + " leak", sum);
        }
    }

    void check_cpds() {
        if (static_cast<int>(net.cpds.size()) != net.num_nodes()) return;
        for (int node = 0; node < net.num_nodes(); ++node) {
            if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
                check_tabular(node, *t);
            } else {
                check_noisy_max(node, std::get<NoisyMaxCpd>(net.cpds[node]));
            }
        }
    }
};

}  // namespace

ValidationReport validate_network(const Network& net, const Options& opts) {
    Checker checker{net, opts, {}};
    checker.check_variables();
    checker.check_structure();
    if (checker.report.errors.empty()) checker.check_cpds();
    return checker.report;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& issue : errors) os << "error: " << issue.where << ": " << issue.message << "\n";
    for (const auto& issue : warnings) {
        os << "warning: " << issue.where << ": " << issue.message << "\n";
    }
    return os.str();
}

void require_valid(const Network& net, const Options& opts) {
    ValidationReport report = validate_network(net, opts);
    if (!report.ok()) {
        throw InvalidNetworkError("invalid network:\n" + report.summary());
    }
}

}  // namespace adbn
