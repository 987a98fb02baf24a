#pragma once

#include <Eigen/Core>

#include "adbn/network.hpp"
#include "adbn/types.hpp"

namespace adbn {

/// A deterministic conditional probability table. Column c is the child
/// distribution for parent configuration c (ConfigSpace order over
/// parent_cards); every column sums to 1.
struct PointCpt {
    int child_card = 0;
    std::vector<int> parent_cards;
    Eigen::MatrixXd table;  // child_card x num_configs

    ConfigSpace config_space() const { return ConfigSpace(parent_cards); }
};

/// Table of parameter means: state x != 0 gets mean(theta_x^u), state 0 the
/// complement 1 - sum of the column's means.
PointCpt mean_cpt(const TabularCpd& cpd);

/// Expands a noisy-MAX gate into a full table over all parent configurations
/// using the cumulative-product rule at parameter means; the leak acts as an
/// extra parent held at state 1. Throws CapExceededError beyond cap.
PointCpt expand_noisy_max(const NoisyMaxCpd& cpd, long long cap = Options{}.expand_cap);

/// mean_cpt or expand_noisy_max, by cpd kind.
PointCpt point_cpt(const Cpd& cpd, long long expand_cap = Options{}.expand_cap);

}  // namespace adbn
