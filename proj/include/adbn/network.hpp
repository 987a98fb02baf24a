#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adbn/errors.hpp"
#include "adbn/types.hpp"

namespace adbn {

/// Mixed-radix indexing over a tuple of parent states. The LAST parent varies
/// fastest, so flat index 0 is the all-zero configuration.
class ConfigSpace {
  public:
    ConfigSpace() = default;
    explicit ConfigSpace(std::vector<int> cards);

    long long size() const { return size_; }
    int dims() const { return static_cast<int>(cards_.size()); }
    const std::vector<int>& cards() const { return cards_; }

    long long flat(const std::vector<int>& states) const;
    std::vector<int> unflat(long long index) const;

    /// Odometer step; returns false after the last configuration.
    bool advance(std::vector<int>& states) const;

  private:
    std::vector<int> cards_;
    long long size_ = 1;
};

/// General CPD: one Gaussian parameter per (parent configuration, non-zero
/// child state). The child probability of state 0 is the stored complement.
/// A prior is the zero-parent special case (exactly one configuration).
struct TabularCpd {
    int child = -1;
    int child_card = 0;
    std::vector<int> parents;       // node indices, order fixes the config space
    std::vector<int> parent_cards;  // aligned with parents
    std::vector<GaussianParam> params;  // [config * (child_card-1) + (x-1)]

    ConfigSpace config_space() const { return ConfigSpace(parent_cards); }
    long long num_configs() const { return config_space().size(); }
    long long param_index(long long config, int state) const {
        return config * (child_card - 1) + (state - 1);
    }
    const GaussianParam& at(long long config, int state) const {
        return params[param_index(config, state)];
    }
    bool is_prior() const { return parents.empty(); }

    bool operator==(const TabularCpd&) const = default;
};

/// One cause link of a noisy-MAX gate: g_u * g_x parameters
/// theta[x | u, all other causes absent], u in 1..g_u, x in 1..g_x.
struct NoisyMaxLink {
    int parent = -1;
    int g_u = 0;
    std::vector<GaussianParam> params;  // [(u-1) * g_x + (x-1)]

    bool operator==(const NoisyMaxLink&) const = default;
};

/// Generalized noisy OR/MAX gate over graded variables. The leak, when
/// present, behaves as one extra always-present binary cause (g_u = 1) and is
/// carried through every code path as a pseudo-link.
struct NoisyMaxCpd {
    int child = -1;
    int g_child = 0;                   // degrees of the child (card - 1)
    std::vector<NoisyMaxLink> links;   // one per modeled cause
    std::vector<GaussianParam> leak;   // size g_child, empty when absent

    bool has_leak() const { return !leak.empty(); }
    int num_links() const { return static_cast<int>(links.size()); }
    /// Links plus the leak pseudo-link.
    int num_effective_links() const { return num_links() + (has_leak() ? 1 : 0); }

    const GaussianParam& link_param(int link, int u, int x) const {
        return links[link].params[(u - 1) * g_child + (x - 1)];
    }
    const GaussianParam& leak_param(int x) const { return leak[x - 1]; }

    std::vector<int> parent_nodes() const;

    bool operator==(const NoisyMaxCpd&) const = default;
};

using Cpd = std::variant<TabularCpd, NoisyMaxCpd>;

int child_of(const Cpd& cpd);
std::vector<int> parents_of(const Cpd& cpd);
long long param_count(const Cpd& cpd);

/// A polytree Bayesian network. cpds[i] is the family of variable i.
/// Treated as immutable once validated; learning commits produce a new value.
struct Network {
    std::vector<Variable> variables;
    std::vector<Cpd> cpds;

    int num_nodes() const { return static_cast<int>(variables.size()); }
    int cardinality(int node) const { return variables[node].cardinality(); }

    /// Index of a variable by name, or -1.
    int node_index(const std::string& name) const;

    bool operator==(const Network&) const = default;
};

/// One observation: a partial hard assignment of variables to states.
struct CaseRecord {
    std::map<int, int> assignments;  // node index -> state index

    bool observed(int node) const { return assignments.count(node) != 0; }

    bool operator==(const CaseRecord&) const = default;
};

/// Stable address of one Gaussian parameter inside a network.
struct ParamRef {
    enum class Kind : std::uint8_t { Table, MaxLink, Leak };

    int node = -1;
    Kind kind = Kind::Table;
    long long config = 0;  // Table: flat parent configuration
    int link = -1;         // MaxLink: link slot
    int cause = 0;         // MaxLink: parent state u >= 1
    int effect = 0;        // child state x >= 1

    auto operator<=>(const ParamRef&) const = default;
};

const GaussianParam& get_param(const Network& net, const ParamRef& ref);
void set_param(Network& net, const ParamRef& ref, const GaussianParam& value);

/// Visits every parameter of the family in its canonical order.
void for_each_param(const Network& net, int node,
                    const std::function<void(const ParamRef&, const GaussianParam&)>& fn);
void for_each_param(const Network& net,
                    const std::function<void(const ParamRef&, const GaussianParam&)>& fn);

/// Human-readable parameter label, e.g. "Sneezing(Cold=present -> mild)".
std::string describe(const Network& net, const ParamRef& ref);

/// Lists (child, parent-slot) pairs per node; built on demand from the cpds.
std::vector<std::vector<std::pair<int, int>>> children_of(const Network& net);

}  // namespace adbn
