#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "adbn/cpt.hpp"
#include "adbn/network.hpp"
#include "adbn/propagation.hpp"

namespace adbn {

/// Full joint distribution at parameter means, flattened in ConfigSpace order
/// over all variables (last variable varies fastest).
struct JointTable {
    std::vector<int> cards;
    Eigen::VectorXd p;

    ConfigSpace config_space() const { return ConfigSpace(cards); }
};

/// Chain-rule product of the per-family point tables (MAX gates expanded).
/// Throws CapExceededError when the state space exceeds the cap.
JointTable enumerate_joint(const Network& net, const Options& opts = {});

struct OracleResult {
    std::vector<Eigen::VectorXd> marginals;  // per node, normalized
    double evidence_probability = 0.0;
};

/// Exact conditionals by summation and renormalization of the joint.
OracleResult oracle_conditional(const JointTable& joint, const CaseRecord& record);

struct QuadratureMoments {
    std::vector<double> mean;
    std::vector<double> var;
    double evidence = 0.0;  // integral of P(e | theta) against the prior
};

/// Brute-force posterior moments of up to three parameters: tensor-product
/// Gauss-Legendre quadrature of P(e | theta) * prior over the unit box, with
/// every other parameter frozen at its mean. Parameters with std == 0 stay
/// point masses. Likelihoods come from joint enumeration, independent of the
/// propagation path.
QuadratureMoments posterior_moment_quadrature(const Network& net, const CaseRecord& record,
                                              const std::vector<ParamRef>& targets,
                                              const Options& opts = {});

/// Ancestral sampling at parameter means: n complete cases, reproducible for
/// a fixed seed. mask_fraction > 0 hides each variable independently with
/// that probability. MAX gates are sampled as the max of independently drawn
/// per-cause degrees (no table expansion).
std::vector<CaseRecord> forward_sample(const Network& net, int n, std::uint64_t seed,
                                       double mask_fraction = 0.0);

}  // namespace adbn
