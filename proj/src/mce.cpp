#include "radv/mce.hpp"

#include <cmath>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

MceResult mce_policy(const Mdp& mdp, const MceOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "damping must lie in (0, 1]");
  }
  QTable q = options.initial_q.value_or(QTable::Zero(mdp.n_states(), mdp.n_actions()));
  if (q.rows() != mdp.n_states() || q.cols() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "initial Q table has the wrong shape");
  }
  zero_terminal_rows(mdp, q);

  // The inner solve is direct; its tolerance only matters when it falls
  // back to sweeps.
  const SolverOptions inner{options.tolerance * 1e-2, options.max_iters};
  double residual = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter < options.max_iters; ++iter) {
    StochasticPolicy policy = softmax_policy(q);
    QTable evaluated = policy_evaluation_q(mdp, policy, inner);
    if (evaluated.cwiseAbs().maxCoeff() > options.q_limit) {
      std::ostringstream msg;
      msg << "|Q| reached " << evaluated.cwiseAbs().maxCoeff() << " after " << iter << " iterations";
      throw Error(ErrorKind::q_magnitude, msg.str());
    }
    residual = (evaluated - q).cwiseAbs().maxCoeff();
    if (residual <= options.tolerance) {
      return MceResult{std::move(policy), std::move(q), iter, residual};
    }
    q += options.damping * (evaluated - q);
  }
  std::ostringstream msg;
  msg << "MCE fixed point not reached in " << options.max_iters << " iterations (residual " << residual << ")";
  throw Error(ErrorKind::nonconvergent, msg.str());
}

}  // namespace radv
