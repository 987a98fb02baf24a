#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "adbn/network.hpp"
#include "adbn/propagation.hpp"

namespace adbn {

/// A likelihood that is affine in the parameters: a + sum_i b[i] * theta_i.
struct LinearWeight {
    double a = 0.0;
    Eigen::VectorXd b;
};

/// True when a + sum b_i theta_i >= 0 on every corner of the unit box
/// restricted to coordinates with b_i != 0.
bool nonnegative_on_unit_box(const LinearWeight& w);

enum ParamFlags : std::uint8_t {
    kNone = 0,
    kMeanClamped = 1 << 0,
    kVarFloored = 1 << 1,
    kColumnRescaled = 1 << 2,
};

struct ParamDelta {
    ParamRef ref;
    double delta = 0.0;
    double new_mean = 0.0;
    double new_var = 0.0;
    std::uint8_t flags = kNone;
};

/// Per-family update: mean shifts, reduced variances and the dropped-
/// correlation diagnostic max_{i != j} |delta_i * delta_j|.
struct UpdateDelta {
    std::vector<ParamDelta> items;
    double max_abs_cov = 0.0;
};

/// Moment matching for an affine reweighting of independent Gaussians:
/// delta_i = sigma_i^2 b_i / (a + sum_j b_j mu_j), new mean mu_i + delta_i,
/// new variance sigma_i^2 - delta_i^2. Throws EngineError when the
/// denominator is not positive.
UpdateDelta linear_gaussian_moments(const LinearWeight& w,
                                    const std::vector<GaussianParam>& params);

/// Update for a general (or prior) family from the propagated messages:
/// delta_x^u = sigma^2 [lambda(x) - lambda(0)] prod_i pi_X(u_i) / sum_x' lambda(x') pi(x').
UpdateDelta general_cpt_delta(const TabularCpd& cpd, const MessageSet& msgs);

/// Update for a noisy-MAX family (leak included as a link) built from the
/// other links' Q profiles and the telescoped lambda differences.
UpdateDelta noisy_max_delta(const NoisyMaxCpd& cpd, const MessageSet& msgs,
                            const QProfile& qprof);

/// Closed form for a single-cause binary gate; agrees with noisy_max_delta
/// specialized to one degree.
double binary_or_delta(const GaussianParam& link, double pi_present,
                       double lambda_absent, double lambda_present);

/// Commits raw family deltas: scales each by gamma, clamps means into
/// [mean_eps, 1 - mean_eps], floors positive variances at var_floor, and
/// proportionally rescales any column whose means then sum past 1 - mean_eps.
/// Returns the committed network and an entry per touched parameter.
std::pair<Network, std::vector<ParamDelta>> apply_deltas(
    const Network& net, const std::vector<std::pair<ParamRef, double>>& raw,
    const Options& opts = {});

struct CaseReport {
    std::string case_id;
    long long seq = 0;
    bool accepted = false;
    std::string error;  // set when the case was rejected
    double evidence_probability = 0.0;
    double max_abs_cov = 0.0;
    std::vector<ParamDelta> updates;
    std::vector<std::string> post_warnings;  // validation warnings after commit
};

struct CaseOutcome {
    Network net;
    CaseReport report;
};

/// One sequential learning step: propagate at means, compute every family's
/// update from that same message set, commit all means/variances atomically
/// (clamped per Options), re-validate. A contradictory case is rejected and
/// leaves the network unchanged.
CaseOutcome apply_case(const Network& net, const CaseRecord& record, const Options& opts = {});

}  // namespace adbn
