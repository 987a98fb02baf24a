#include "adbn/network.hpp"

#include <algorithm>
#include <sstream>

namespace adbn {

Variable make_variable(std::string name, int cardinality, bool graded) {
    Variable v;
    v.name = std::move(name);
    v.graded = graded;
    v.states.reserve(cardinality);
    for (int s = 0; s < cardinality; ++s) {
        if (graded) {
            v.states.push_back(s == 0 ? "absent" : "deg" + std::to_string(s));
        } else {
            v.states.push_back("s" + std::to_string(s));
        }
    }
    return v;
}

ConfigSpace::ConfigSpace(std::vector<int> cards) : cards_(std::move(cards)) {
    for (int c : cards_) size_ *= c;
}

long long ConfigSpace::flat(const std::vector<int>& states) const {
    long long index = 0;
    for (size_t i = 0; i < cards_.size(); ++i) index = index * cards_[i] + states[i];
    return index;
}

std::vector<int> ConfigSpace::unflat(long long index) const {
    std::vector<int> states(cards_.size(), 0);
    for (int i = static_cast<int>(cards_.size()) - 1; i >= 0; --i) {
        states[i] = static_cast<int>(index % cards_[i]);
        index /= cards_[i];
    }
    return states;
}

bool ConfigSpace::advance(std::vector<int>& states) const {
    for (int i = static_cast<int>(cards_.size()) - 1; i >= 0; --i) {
        if (++states[i] < cards_[i]) return true;
        states[i] = 0;
    }
    return false;
}

std::vector<int> NoisyMaxCpd::parent_nodes() const {
    std::vector<int> out;
    out.reserve(links.size());
    for (const auto& link : links) out.push_back(link.parent);
    return out;
}

int child_of(const Cpd& cpd) {
    return std::visit([](const auto& c) { return c.child; }, cpd);
}

std::vector<int> parents_of(const Cpd& cpd) {
    if (const auto* t = std::get_if<TabularCpd>(&cpd)) return t->parents;
    return std::get<NoisyMaxCpd>(cpd).parent_nodes();
}

long long param_count(const Cpd& cpd) {
    if (const auto* t = std::get_if<TabularCpd>(&cpd)) {
        return static_cast<long long>(t->params.size());
    }
    const auto& m = std::get<NoisyMaxCpd>(cpd);
    long long n = static_cast<long long>(m.leak.size());
    for (const auto& link : m.links) n += static_cast<long long>(link.params.size());
    return n;
}

int Network::node_index(const std::string& name) const {
    for (int i = 0; i < num_nodes(); ++i) {
        if (variables[i].name == name) return i;
    }
    return -1;
}

namespace {

GaussianParam* locate(Network& net, const ParamRef& ref) {
    Cpd& cpd = net.cpds[ref.node];
    switch (ref.kind) {
        case ParamRef::Kind::Table: {
            auto& t = std::get<TabularCpd>(cpd);
            return &t.params[t.param_index(ref.config, ref.effect)];
        }
        case ParamRef::Kind::MaxLink: {
            auto& m = std::get<NoisyMaxCpd>(cpd);
            return &m.links[ref.link].params[(ref.cause - 1) * m.g_child + (ref.effect - 1)];
        }
        case ParamRef::Kind::Leak: {
            auto& m = std::get<NoisyMaxCpd>(cpd);
            return &m.leak[ref.effect - 1];
        }
    }
    throw EngineError("invalid parameter reference");
}

}  // namespace

const GaussianParam& get_param(const Network& net, const ParamRef& ref) {
    return *locate(const_cast<Network&>(net), ref);
}

void set_param(Network& net, const ParamRef& ref, const GaussianParam& value) {
    *locate(net, ref) = value;
}

void for_each_param(const Network& net, int node,
                    const std::function<void(const ParamRef&, const GaussianParam&)>& fn) {
    const Cpd& cpd = net.cpds[node];
    if (const auto* t = std::get_if<TabularCpd>(&cpd)) {
        for (long long cfg = 0; cfg < t->num_configs(); ++cfg) {
            for (int x = 1; x < t->child_card; ++x) {
                ParamRef ref{node, ParamRef::Kind::Table, cfg, -1, 0, x};
                fn(ref, t->at(cfg, x));
            }
        }
        return;
    }
    const auto& m = std::get<NoisyMaxCpd>(cpd);
    for (int li = 0; li < m.num_links(); ++li) {
        for (int u = 1; u <= m.links[li].g_u; ++u) {
            for (int x = 1; x <= m.g_child; ++x) {
                ParamRef ref{node, ParamRef::Kind::MaxLink, 0, li, u, x};
                fn(ref, m.link_param(li, u, x));
            }
        }
    }
    for (int x = 1; x <= static_cast<int>(m.leak.size()); ++x) {
        ParamRef ref{node, ParamRef::Kind::Leak, 0, -1, 0, x};
        fn(ref, m.leak_param(x));
    }
}

void for_each_param(const Network& net,
                    const std::function<void(const ParamRef&, const GaussianParam&)>& fn) {
    for (int node = 0; node < net.num_nodes(); ++node) for_each_param(net, node, fn);
}

std::string describe(const Network& net, const ParamRef& ref) {
    const Variable& child = net.variables[ref.node];
    std::ostringstream os;
    os << child.name << "(";
    switch (ref.kind) {
        case ParamRef::Kind::Table: {
            const auto& t = std::get<TabularCpd>(net.cpds[ref.node]);
            auto states = t.config_space().unflat(ref.config);
            for (size_t i = 0; i < t.parents.size(); ++i) {
                if (i) os << ",";
                os << net.variables[t.parents[i]].name << "="
                   << net.variables[t.parents[i]].states[states[i]];
            }
            if (t.parents.empty()) os << "prior";
            break;
        }
        case ParamRef::Kind::MaxLink: {
            const auto& m = std::get<NoisyMaxCpd>(net.cpds[ref.node]);
            const Variable& parent = net.variables[m.links[ref.link].parent];
            os << parent.name << "=" << parent.states[ref.cause];
            break;
        }
        case ParamRef::Kind::Leak:
            os << "leak";
            break;
    }
    os << " -> " << child.states[ref.effect] << ")";
    return os.str();
}

std::vector<std::vector<std::pair<int, int>>> children_of(const Network& net) {
    std::vector<std::vector<std::pair<int, int>>> out(net.num_nodes());
    for (int node = 0; node < net.num_nodes(); ++node) {
        auto parents = parents_of(net.cpds[node]);
        for (int slot = 0; slot < static_cast<int>(parents.size()); ++slot) {
            out[parents[slot]].emplace_back(node, slot);
        }
    }
    return out;
}

}  // namespace adbn
