#pragma once

#include <string>
#include <vector>

#include "adbn/network.hpp"
#include "adbn/types.hpp"

namespace adbn {

struct ValidationIssue {
    std::string where;    // node or parameter the issue concerns
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;

    bool ok() const { return errors.empty(); }
    std::string summary() const;
};

/// Structural and parametric validation. Errors: cycles (directed or in the
/// underlying undirected graph), cardinality mismatches, means outside (0,1),
/// column sums reaching 1, non-graded variables on MAX gates, std at or above
/// min(mean, 1-mean). Warnings: std above warn_ratio * min(mean, 1-mean),
/// graded variables whose state 0 is not named "absent".
ValidationReport validate_network(const Network& net, const Options& opts = {});

/// Throws InvalidNetworkError when validate_network reports errors.
void require_valid(const Network& net, const Options& opts = {});

}  // namespace adbn
