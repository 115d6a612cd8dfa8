#pragma once

#include "radv/evaluation.hpp"
#include "radv/mce.hpp"

namespace radv {

/// One member of the advancement family for a target policy: a state
/// potential beta, the additional Q-function it induces, and the additional
/// reward that realizes it. Terminal entries are 0 throughout.
struct AdvancementSolution {
  StateVector beta;
  QTable delta_q;
  Table delta_r;
  StochasticPolicy target;
};

struct AdvancementOptions {
  /// Smallest admissible target probability at a nonterminal state.
  double epsilon_floor = 1e-8;
  SolverOptions solver;
};

/// Throws Error(target_support) naming the first nonterminal pair whose
/// target probability is below the floor.
void check_target_support(const Mdp& mdp, const StochasticPolicy& target, double epsilon_floor);

/// DeltaR(s,a) = DeltaQ(s,a) - gamma sum_s' T(s'|s,a) sum_a' pi(a'|s') DeltaQ(s',a'),
/// terminal rows 0.
Table reward_from_q(const Mdp& mdp, const StochasticPolicy& policy, const QTable& delta_q);

/// DeltaQ(s,a) = ln pi_t(a|s) - Q_o^{pi_t}(s,a) + beta(s), with Q_o^{pi_t}
/// the evaluation of the target under the original rewards, and DeltaR its
/// Bellman residual. Any finite beta with beta = 0 on terminals gives an
/// additional reward whose MCE policy is the target.
AdvancementSolution advancement_delta_q(const Mdp& mdp, const StochasticPolicy& target, const StateVector& beta,
                                        const AdvancementOptions& options = {});

struct VerificationReport {
  /// sup over nonterminal (s,a) of |pi_new(a|s) - pi_t(a|s)|, where pi_new is
  /// the MCE policy of the advanced MDP solved from the uniform start.
  double max_deviation = 0.0;
  bool pass = false;
  /// sup |softmax(Q^{pi_t}_advanced) - pi_t|: how exactly the target itself
  /// is a fixed point of the advanced MDP.
  double target_fixed_point_residual = 0.0;
  long iterations = 0;
};

struct VerifyOptions {
  double tolerance = 1e-6;
  MceOptions mce;
};

/// Solves the MDP with rewards R_o + DeltaR and compares its MCE policy with
/// the target.
VerificationReport verify_transformation(const Mdp& mdp, const AdvancementSolution& solution,
                                         const VerifyOptions& options = {});

}  // namespace radv
