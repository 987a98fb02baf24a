#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adbn/io.hpp"
#include "adbn/learning.hpp"
#include "adbn/network.hpp"
#include "adbn/oracle.hpp"
#include "adbn/propagation.hpp"
#include "adbn/rng.hpp"
#include "adbn/validate.hpp"

namespace testsupport {

using namespace adbn;

inline GaussianParam gp(double mean, double std = 0.0) { return {mean, std}; }

/// Small fluent builder so fixtures read as a few lines per family.
/// Parameter lists follow the canonical index order of each CPD kind.
class NetBuilder {
  public:
    int var(const std::string& name, int card, bool graded = false);
    int graded_var(const std::string& name, int card) { return var(name, card, true); }

    NetBuilder& prior(int node, std::vector<GaussianParam> params);
    NetBuilder& table(int node, std::vector<int> parents, std::vector<GaussianParam> params);
    NetBuilder& gate(int node, std::vector<std::pair<int, std::vector<GaussianParam>>> links,
                     std::vector<GaussianParam> leak = {});

    /// Finishes the network and validates it; throws on errors.
    Network build(const Options& opts = {});

  private:
    Network net_;
    std::vector<std::pair<int, Cpd>> cpds_;  // (node, family), any insertion order
};

/// Two-node chain A -> B, binary, uncertain parameters.
Network two_node_chain();

/// Cold, Allergy -> Sneezing (noisy-MAX with leak) -> Tissues (table).
/// Cold and Sneezing have three grades, Allergy two.
Network gate_chain();

/// A, B -> X (two-cause binary gate, no leak) -> Y (table): the learning
/// convergence fixture. The start network shifts every true mean by +0.15
/// (clipped to 0.85 to stay valid) and sets every std to 0.1.
Network learn_start();
Network learn_truth();

/// Random polytree over graded variables (cards 2..max_card): a random tree
/// with every edge oriented by coin flip; each family with parents is a
/// noisy-MAX gate or a table at random. All parameters pass validation.
Network random_polytree(Rng& rng, int n, bool allow_gates = true, int max_card = 4);

/// A free-standing random gate plus normalized per-cause messages and a
/// positive child lambda (node indices are placeholders).
struct GateFixture {
    NoisyMaxCpd cpd;
    std::vector<Eigen::VectorXd> incoming;
    Eigen::VectorXd lambda;
};
GateFixture random_gate(Rng& rng, int n_parents, int max_degree, bool with_leak);

/// Reference gate evaluation through the expanded table: the causal vector
/// as a message-weighted mixture of columns, and the message to one parent
/// by direct summation. Both are quadratic in the table, used only to check
/// the linear-time paths.
Eigen::VectorXd table_pi(const PointCpt& table, const std::vector<Eigen::VectorXd>& incoming);
Eigen::VectorXd table_lambda_msg(const PointCpt& table,
                                 const std::vector<Eigen::VectorXd>& incoming,
                                 const Eigen::VectorXd& lambda, int slot);

/// Random evidence drawn by forward sampling one case and hiding each
/// variable with the given probability. Guaranteed consistent (P > 0).
CaseRecord sampled_evidence(const Network& net, std::uint64_t seed, double hide_fraction);

/// Loads FIXTURE_DIR/name, throwing on parse or validation failure.
Network load_fixture(const std::string& name);
std::string fixture_path(const std::string& name);
std::string golden_path(const std::string& name);

/// Posterior mean and variance of a Gaussian reweighted by the nonnegative
/// affine function a_eff + b * theta, by Simpson integration over the full
/// effective support. Independent of the engine's closed forms.
std::pair<double, double> affine_moments_1d(double a_eff, double b, const GaussianParam& p);

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace testsupport
