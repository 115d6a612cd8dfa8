#include "radv/simulate.hpp"

#include "radv/error.hpp"

namespace radv {

std::vector<Trajectory> simulate(const Mdp& mdp, const StochasticPolicy& policy, long n, std::uint64_t seed,
                                 long max_len) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "simulate needs n >= 1");
  if (max_len < 1) throw Error(ErrorKind::invalid_input, "simulate needs max_len >= 1");
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "policy does not match the MDP");
  }

  Rng rng(seed);
  std::vector<Trajectory> out(static_cast<std::size_t>(n));
  for (auto& trajectory : out) {
    Index s = rng.categorical(mdp.mu0());
    for (long t = 0; t < max_len; ++t) {
      const Index a = rng.categorical(policy.probs().row(s));
      trajectory.steps.push_back({s, a, std::nullopt});
      if (mdp.is_terminal(s)) break;

      const auto successors = mdp.successors(s, a);
      const double u = rng.uniform();
      double acc = 0.0;
      Index next = successors.back().state;
      for (const auto& succ : successors) {
        acc += succ.probability;
        if (u < acc && succ.probability > 0.0) {
          next = succ.state;
          break;
        }
      }
      s = next;
      if (mdp.is_terminal(s)) {
        trajectory.steps.push_back({s, rng.categorical(policy.probs().row(s)), std::nullopt});
        break;
      }
    }
  }
  return out;
}

}  // namespace radv
