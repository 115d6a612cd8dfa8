#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "radv/mincost.hpp"
#include "radv/simulate.hpp"

namespace radv {

/// Maximum-likelihood transition estimates from observed (s, a, s') triples.
/// Pairs that were never observed stay flagged and carry no distribution.
class EmpiricalModel {
 public:
  EmpiricalModel(Index n_states, Index n_actions);

  void add(Index s, Index a, Index next);

  Index n_states() const noexcept { return n_states_; }
  Index n_actions() const noexcept { return n_actions_; }
  bool observed(Index s, Index a) const { return !counts_[flat(s, a)].empty(); }
  long visits(Index s, Index a) const;
  const std::map<Index, long>& counts(Index s, Index a) const { return counts_[flat(s, a)]; }

  /// Normalized successor distribution of an observed pair.
  std::vector<Successor> row(Index s, Index a) const;

  /// Unobserved pairs in (s, a) order.
  std::vector<std::pair<Index, Index>> unobserved() const;

 private:
  std::size_t flat(Index s, Index a) const { return static_cast<std::size_t>(s * n_actions_ + a); }

  Index n_states_;
  Index n_actions_;
  std::vector<std::map<Index, long>> counts_;
};

/// Throws Error(no_data) when there are no trajectories or no transitions in
/// them, and Error(invalid_input) on out-of-range indices.
EmpiricalModel estimate_transitions(std::span<const Trajectory> trajectories, Index n_states, Index n_actions);

/// What the sample-based pipeline knows without the transition function.
struct KnownModel {
  Table rewards;
  StateVector mu0;
  double gamma = 1.0;
  std::vector<Index> terminals;

  static KnownModel of(const Mdp& mdp);
};

enum class CoverageFallback {
  /// An unobserved pair moves to every state with equal probability.
  uniform_successor,
  /// Any unobserved nonterminal pair is an Error(coverage).
  reject,
};

/// An MDP with the estimated transitions in place of the true ones. Terminal
/// rows are always the absorbing self-loop.
Mdp empirical_mdp(const EmpiricalModel& model, const KnownModel& known, CoverageFallback fallback);

/// The min-cost pipeline run against the empirical transition model.
MinCostSolution sample_based_min_reward(std::span<const Trajectory> trajectories, const KnownModel& known,
                                        const StochasticPolicy& target, const FeatureModel& features,
                                        CoverageFallback fallback, const MinCostOptions& options = {});

/// sup over nonterminal (s,a) of |DeltaR*_estimated - DeltaR*_exact|.
/// Nonterminal pairs are those the exact solution assigned features to.
/// Throws Error(shape_mismatch) when the tables differ in shape.
double advancement_error(const MinCostSolution& estimated, const MinCostSolution& exact);

/// Mean of |DeltaR*_estimated - DeltaR*_exact| over the same pairs.
double advancement_mean_abs_error(const MinCostSolution& estimated, const MinCostSolution& exact);

}  // namespace radv
