#pragma once

#include <string>
#include <vector>

namespace adbn {

/// One uncertain probability parameter: a Gaussian N(mean, std^2) over [0,1].
/// mean must lie strictly inside (0,1); std == 0 marks an exactly known value.
struct GaussianParam {
    double mean = 0.5;
    double std = 0.0;

    bool operator==(const GaussianParam&) const = default;
};

/// A discrete variable. For graded variables state 0 means "absent" and
/// higher indices mean higher intensity; the degree count is cardinality()-1.
struct Variable {
    std::string name;
    std::vector<std::string> states;
    bool graded = false;

    int cardinality() const { return static_cast<int>(states.size()); }
    int degrees() const { return cardinality() - 1; }

    bool operator==(const Variable&) const = default;
};

/// Makes a variable with generated state names: graded variables get
/// "absent", "deg1", "deg2", ...; plain ones get "s0", "s1", ...
Variable make_variable(std::string name, int cardinality, bool graded);

/// Engine-wide caps and tolerances. Defaults reproduce the reference
/// behaviour; the CLI exposes each one as a flag.
struct Options {
    double warn_ratio = 1.0 / 3.0;  // std/min(mean,1-mean) warning threshold
    double mean_eps = 1e-6;         // committed means are clamped to [eps, 1-eps]
    double var_floor = 1e-12;       // committed variances never drop below this
    double gamma = 1.0;             // learning rate applied to every delta
    long long expand_cap = 1'000'000;     // max configurations for gate expansion
    long long joint_cap = 10'000'000;     // max entries for joint enumeration
    int quad_nodes = 2010;          // quadrature nodes per dimension (>= 2001)
};

}  // namespace adbn
