#pragma once

#include <optional>
#include <vector>

#include "radv/advancement.hpp"
#include "radv/features.hpp"

namespace radv {

/// Per-pair bounds [lower(s,a), upper(s,a)] on the additional reward.
struct RewardBounds {
  Table lower;
  Table upper;

  static RewardBounds uniform(Index n_states, Index n_actions, double r_min, double r_max);
};

/// k(s,a) = ln pi_t(a|s) - gamma sum_s' T(s'|s,a) sum_a' pi_t(a'|s') ln pi_t(a'|s') - R_o(s,a),
/// the part of the additional reward that does not depend on beta. Terminal
/// successors contribute no entropy term; terminal rows are 0.
Table compute_k(const Mdp& mdp, const StochasticPolicy& target, double epsilon_floor = 1e-8);

struct BetaBounds {
  StateVector beta_min;
  StateVector beta_max;
  bool feasible = false;
  /// States with beta_min > beta_max (beyond 1e-9).
  std::vector<Index> infeasible_states;
};

/// Fixed points, from 0 with terminals pinned at 0, of
///   beta_min(s) <- max_a (gamma E[beta_min(S') | s,a] + lower(s,a) - k(s,a))
///   beta_max(s) <- min_a (gamma E[beta_max(S') | s,a] + upper(s,a) - k(s,a)).
/// Any beta keeping every DeltaR >= lower satisfies beta >= beta_min.
/// Throws Error(nonconvergent) when either iteration does not settle (for
/// gamma = 1 this happens when r - k is positive, resp. negative, around a
/// cycle).
BetaBounds beta_bounds(const Mdp& mdp, const Table& k, const RewardBounds& bounds,
                       const SolverOptions& options = {});

BetaBounds beta_bounds(const Mdp& mdp, const Table& k, double r_min, double r_max,
                       const SolverOptions& options = {});

/// DeltaR(s,a) = beta(s) - gamma E[beta(S') | s,a] + k(s,a), terminal rows 0.
Table reward_from_beta(const Mdp& mdp, const Table& k, const StateVector& beta);

/// sum_s mu0(s) sum_a pi_t(a|s) DeltaQ(s,a).
double objective_value(const Mdp& mdp, const StochasticPolicy& target, const AdvancementSolution& solution);

struct MinCostSolution {
  /// The advancement family member at beta = beta_min (its delta_r is the
  /// Bellman-residual route).
  AdvancementSolution advancement;
  StateVector beta_min;
  StateVector beta_max;
  Table k;
  /// DeltaR* from the closed form beta_min(s) - gamma E[beta_min] + k(s,a).
  Table delta_r_star;
  double objective = 0.0;
  /// assignments[s * n_actions + a] is the feature vector for (s, a); empty
  /// for terminal pairs.
  std::vector<Eigen::VectorXd> assignments;
  /// C(s,a) = phi . dF(s,a), 0 on terminal rows.
  Table costs;
  /// Expected cost under the target: sum D_{pi_t}(s,a) C(s,a).
  double total_cost = 0.0;

  const Eigen::VectorXd& assignment(Index s, Index a) const {
    return assignments[static_cast<std::size_t>(s * delta_r_star.cols() + a)];
  }
};

struct MinCostOptions {
  double epsilon_floor = 1e-8;
  SolverOptions solver;
  /// Replaces the feature-derived [r_min, r_max] in the min-reward stage.
  /// Must lie inside the feature bounds so the assignment stays achievable.
  std::optional<RewardBounds> bounds;
};

/// The full two-stage pipeline: bounds on beta by value iteration, the
/// min-reward DeltaR* at beta_min, then the greedy feature assignment per
/// nonterminal pair.
///
/// Throws Error(no_valid_solution) listing the states with
/// beta_min > beta_max, and Error(not_achievable) listing the pairs when
/// beta_min passes that test yet DeltaR* still leaves the bounds.
MinCostSolution min_reward_solution(const Mdp& mdp, const StochasticPolicy& target, const FeatureModel& features,
                                    const MinCostOptions& options = {});

}  // namespace radv
