#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "radv/mdp.hpp"
#include "radv/policy.hpp"

namespace radv {

struct Step {
  Index state = 0;
  Index action = 0;
  std::optional<double> reward;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Time-ordered (state, action) pairs. A trajectory that reaches a terminal
/// state ends with one step at that terminal, so the last transition into
/// the terminal stays observable.
struct Trajectory {
  std::vector<Step> steps;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Seeded source of uniform variates. The mapping from engine output to
/// [0, 1) is fixed here rather than left to <random> distributions, whose
/// output is implementation-defined, so sequences match across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  Index below(Index n) { return static_cast<Index>(uniform() * static_cast<double>(n)); }

  /// Index drawn from a probability vector.
  template <typename Probabilities>
  Index categorical(const Probabilities& p) {
    const double u = uniform();
    double acc = 0.0;
    Index last = 0;
    for (Index i = 0; i < static_cast<Index>(p.size()); ++i) {
      if (p[i] <= 0.0) continue;
      acc += p[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

/// n trajectories from mu0 under the policy, each cut after max_len
/// decisions at nonterminal states. Identical seeds give identical output.
std::vector<Trajectory> simulate(const Mdp& mdp, const StochasticPolicy& policy, long n, std::uint64_t seed,
                                 long max_len);

}  // namespace radv
