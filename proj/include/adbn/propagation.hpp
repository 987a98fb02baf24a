#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "adbn/cpt.hpp"
#include "adbn/network.hpp"

namespace adbn {

/// Arithmetic-operation tally for the gate fast path (used to check the
/// linear-in-parents cost claim).
struct OpCount {
    std::uint64_t mul = 0;
    std::uint64_t add = 0;

    std::uint64_t total() const { return mul + add; }
};

/// Cumulative profiles of a noisy-MAX family: per effective link U,
/// q_u[x] = Q_U(x) = P(X <= x | evidence above link U, other causes absent),
/// and their product q[x] = Q(x). Vectors have length g_child + 1; the leak
/// pseudo-link, when present, is the last entry of per_link.
struct QProfile {
    std::vector<Eigen::VectorXd> per_link;
    Eigen::VectorXd q;

    bool empty() const { return per_link.empty(); }
};

struct NoisyMaxPiResult {
    QProfile profile;
    Eigen::VectorXd pi;  // pi(x) = Q(x) - Q(x-1)
};

/// Causal message of a MAX gate from normalized per-link pi messages, in time
/// linear in the number of causes. incoming[i] has length g_u(i) + 1.
NoisyMaxPiResult noisy_max_pi(const NoisyMaxCpd& cpd,
                              const std::vector<Eigen::VectorXd>& incoming,
                              OpCount* ops = nullptr);

/// Diagnostic messages of a MAX gate: for each real link U, the vector
/// lambda_X(u) over u in 0..g_u, computed from the child's lambda and the
/// other links' Q profiles via prefix/suffix products (linear in causes).
std::vector<Eigen::VectorXd> noisy_max_lambda(const NoisyMaxCpd& cpd,
                                              const std::vector<Eigen::VectorXd>& incoming,
                                              const Eigen::VectorXd& lambda,
                                              OpCount* ops = nullptr);

/// All messages of one propagated case. pi vectors are normalized to sum 1;
/// lambda vectors are stored as computed (any positive scale is equivalent).
struct MessageSet {
    std::vector<Eigen::VectorXd> pi;      // per node: pi(x)
    std::vector<Eigen::VectorXd> lambda;  // per node: lambda(x), includes own evidence
    std::vector<std::vector<Eigen::VectorXd>> pi_from_parent;    // [child][slot]: pi_X(u)
    std::vector<std::vector<Eigen::VectorXd>> lambda_to_parent;  // [child][slot]: lambda_X(u)
    std::vector<QProfile> q_profile;  // per node; non-empty only for MAX families
    double evidence_probability = 1.0;
};

/// Exact two-pass Pearl propagation on the polytree at parameter means.
/// Throws ZeroEvidenceError naming the offending node when P(evidence) = 0.
MessageSet propagate(const Network& net, const CaseRecord& record, const Options& opts = {});

/// Normalized product lambda(x) * pi(x).
Eigen::VectorXd posterior_marginal(const MessageSet& msgs, int node);

}  // namespace adbn
