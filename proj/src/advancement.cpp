#include "radv/advancement.hpp"

#include <cmath>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

void check_target_support(const Mdp& mdp, const StochasticPolicy& target, double epsilon_floor) {
  if (target.n_states() != mdp.n_states() || target.n_actions() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "target policy does not match the MDP");
  }
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) continue;
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      if (target(s, a) < epsilon_floor) {
        std::ostringstream msg;
        msg << "target probability " << target(s, a) << " at (" << s << "," << a << ") is below the floor "
            << epsilon_floor;
        throw Error(ErrorKind::target_support, msg.str(), {s}, {{s, a}});
      }
    }
  }
}

Table reward_from_q(const Mdp& mdp, const StochasticPolicy& policy, const QTable& delta_q) {
  const StateVector v = policy.probs().cwiseProduct(delta_q).rowwise().sum();
  Table delta_r = delta_q - mdp.gamma() * expected_next(mdp, v);
  zero_terminal_rows(mdp, delta_r);
  return delta_r;
}

AdvancementSolution advancement_delta_q(const Mdp& mdp, const StochasticPolicy& target, const StateVector& beta,
                                        const AdvancementOptions& options) {
  check_target_support(mdp, target, options.epsilon_floor);
  if (beta.size() != mdp.n_states()) {
    throw Error(ErrorKind::shape_mismatch, "beta has length " + std::to_string(beta.size()));
  }
  if (!beta.allFinite()) throw Error(ErrorKind::invalid_input, "beta has non-finite entries");
  for (Index t : mdp.terminals()) {
    if (beta(t) != 0.0) throw Error(ErrorKind::invalid_input, "beta must be 0 at terminal " + std::to_string(t));
  }

  const QTable q_target = policy_evaluation_q(mdp, target, options.solver);

  QTable delta_q(mdp.n_states(), mdp.n_actions());
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) {
      delta_q.row(s).setZero();
      continue;
    }
    delta_q.row(s) = target.probs().row(s).array().log() - q_target.row(s).array() + beta(s);
  }
  Table delta_r = reward_from_q(mdp, target, delta_q);
  return AdvancementSolution{beta, std::move(delta_q), std::move(delta_r), target};
}

VerificationReport verify_transformation(const Mdp& mdp, const AdvancementSolution& solution,
                                         const VerifyOptions& options) {
  const Mdp advanced = mdp.with_rewards(mdp.rewards() + solution.delta_r);
  const MceResult solved = mce_policy(advanced, options.mce);

  VerificationReport report;
  report.iterations = solved.iterations;
  const SolverOptions inner{options.mce.tolerance, options.mce.max_iters};
  const Table target_softmax = softmax_rows(policy_evaluation_q(advanced, solution.target, inner));
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) continue;
    const double dev = (solved.policy.probs().row(s) - solution.target.probs().row(s)).cwiseAbs().maxCoeff();
    const double fp = (target_softmax.row(s) - solution.target.probs().row(s)).cwiseAbs().maxCoeff();
    report.max_deviation = std::max(report.max_deviation, dev);
    report.target_fixed_point_residual = std::max(report.target_fixed_point_residual, fp);
  }
  report.pass = report.max_deviation <= options.tolerance;
  return report;
}

}  // namespace radv
