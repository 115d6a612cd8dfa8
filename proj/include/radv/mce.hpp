#pragma once

#include <optional>

#include "radv/evaluation.hpp"

namespace radv {

struct MceOptions {
  double tolerance = 1e-10;
  long max_iters = 100000;
  /// Step size of the damped Picard update Q <- Q + damping (eval(softmax Q) - Q).
  double damping = 0.5;
  /// Largest |Q| accepted before the exponentials are considered unsafe.
  double q_limit = 700.0;
  /// Starting Q table; zero (the uniform policy) when absent.
  std::optional<QTable> initial_q;
};

struct MceResult {
  StochasticPolicy policy;
  QTable q;
  long iterations = 0;
  /// sup |policy_evaluation_q(mdp, policy) - q| at exit.
  double residual = 0.0;
};

/// The maximum-causal-entropy policy: the joint fixed point of
///   pi(a|s) = exp Q(s,a) / sum_a' exp Q(s,a')   and   Q = Q^pi,
/// where Q^pi is plain policy evaluation (expected reward, not the
/// log-sum-exp soft backup). The returned policy is exactly softmax(q) and
/// q evaluates that policy to within the tolerance.
///
/// The fixed point need not be unique; the iteration returns the one reached
/// from initial_q.
///
/// Throws Error(nonconvergent) after max_iters outer steps and
/// Error(q_magnitude) when an iterate leaves [-q_limit, q_limit].
MceResult mce_policy(const Mdp& mdp, const MceOptions& options = {});

}  // namespace radv
