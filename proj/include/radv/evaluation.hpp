#pragma once

#include "radv/mdp.hpp"
#include "radv/policy.hpp"

namespace radv {

/// Q(s, a): expected (discounted) reward collected from (s, a). Terminal rows are 0.
using QTable = Table;

/// D(s, a): expected (discounted) number of visits to (s, a). Terminal rows are 0.
using VisitationTable = Table;

struct SolverOptions {
  double tolerance = 1e-10;
  long max_iters = 100000;
};

/// One application of the policy-evaluation operator:
/// R(s,a) + gamma * sum_s' T(s'|s,a) sum_a' pi(a'|s') Q(s',a'), terminal rows 0.
QTable evaluation_backup(const Mdp& mdp, const StochasticPolicy& policy, const QTable& q);

/// Sup-norm distance between q and evaluation_backup(q).
double evaluation_residual(const Mdp& mdp, const StochasticPolicy& policy, const QTable& q);

/// Q^pi with sup-norm fixed-point residual <= options.tolerance.
///
/// Solves the state-value linear system over the nonterminal states directly
/// and then polishes with fixed-point sweeps if needed. When the system is
/// singular (a policy that never reaches a terminal under gamma = 1), the
/// sweeps start from zero. Throws Error(nonconvergent) naming the residual
/// if max_iters sweeps do not reach the tolerance.
QTable policy_evaluation_q(const Mdp& mdp, const StochasticPolicy& policy, const SolverOptions& options = {});

/// D(s, a) = sum_t gamma^t P(S_t = s) pi(a|s) over nonterminal s. Solves the
/// transposed state system directly; when that is singular or leaves a flow
/// imbalance above the tolerance, propagates the state distribution forward
/// until the next increment is below the tolerance instead.
VisitationTable visitation_frequencies(const Mdp& mdp, const StochasticPolicy& policy,
                                       const SolverOptions& options = {});

/// -sum D(s,a) ln pi(a|s), with 0 ln 0 = 0. Throws Error(entropy_domain)
/// when some D(s,a) > 0 has pi(a|s) = 0.
double causal_entropy(const VisitationTable& d, const StochasticPolicy& policy);

/// Expected return from mu0, computed as sum D(s,a) R(s,a) and cross-checked
/// against sum mu0(s) sum pi(a|s) Q^pi(s,a). Throws Error(nonconvergent)
/// when the two disagree by more than 1e-8 (relative to max(1, |value|)).
double expected_return(const Mdp& mdp, const StochasticPolicy& policy, const SolverOptions& options = {});

/// The state-level inflow + mu0 - outflow imbalance of a visitation table,
/// sup over nonterminal states. Zero for an exact table.
double flow_imbalance(const Mdp& mdp, const VisitationTable& d);

}  // namespace radv
