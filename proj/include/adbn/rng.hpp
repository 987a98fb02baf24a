#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace adbn {

/// Seeded RNG with explicitly coded draws so streams are reproducible
/// independent of the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Index drawn from an (unnormalized) non-negative weight vector.
    int categorical(const Eigen::VectorXd& weights) {
        double total = weights.sum();
        double target = uniform01() * total;
        double acc = 0.0;
        for (int i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (target < acc) return i;
        }
        return static_cast<int>(weights.size()) - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace adbn
