#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radv/estimation.hpp"
#include "radv/mincost.hpp"

namespace radv {

/// Actions of every grid cell, in index order.
enum class Move : Index { stay = 0, up = 1, down = 2, left = 3, right = 4 };
inline constexpr Index kObjectWorldActions = 5;

struct ObjectPlacement {
  Index cell = 0;
  std::string color;

  friend bool operator==(const ObjectPlacement&, const ObjectPlacement&) = default;
};

/// Grid world with colored objects and a rewarding destination. Cells are
/// numbered row-major, cell = row * width + col; the state after the
/// destination is an extra absorbing terminal with index width * height.
///
/// Entering an object cell pays its color reward (every time), arriving at
/// the destination pays destination_reward, and every action taken in a
/// non-destination cell additionally pays step_reward. A move goes where it
/// points with probability 1 - slip and to each of the two perpendicular
/// neighbors with probability slip / 2; moves off the grid stay put.
struct ObjectWorldSpec {
  Index width = 9;
  Index height = 5;
  /// Explicit layout. When empty, object_counts are placed at random from seed.
  std::vector<ObjectPlacement> objects;
  std::map<std::string, Index> object_counts{{"green", 2}, {"red", 3}};
  std::map<std::string, double> color_rewards{{"green", 1.0}, {"red", -1.0}};
  /// Defaults to the last cell (bottom-right).
  std::optional<Index> destination;
  double destination_reward = 5.0;
  double step_reward = -0.1;
  double slip = 0.3;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

struct ObjectWorldLayout {
  Index width = 0;
  Index height = 0;
  std::vector<ObjectPlacement> objects;
  Index destination = 0;
  Index terminal = 0;
};

/// Checks the spec and places the objects. Throws Error(invalid_input).
ObjectWorldLayout resolve_layout(const ObjectWorldSpec& spec);

/// width * height + 1 states, 5 actions, mu0 uniform over the cells other
/// than the destination.
Mdp build_object_world(const ObjectWorldSpec& spec);

/// Feature model used by the object-world experiments when none is given:
/// a cheap feature covering [-4, 7] at unit cost and a half-as-efficient one
/// adding up to 50 more, so r_min = -4 and r_max = 57.
FeatureModel default_object_world_features();

/// MCE policy of the world with every nonterminal reward perturbed by
/// U[-scale, scale] noise drawn from seed.
StochasticPolicy perturbed_target(const Mdp& world, double scale, std::uint64_t seed, const MceOptions& mce = {});

struct ExperimentOptions {
  long max_len = 2000;
  CoverageFallback fallback = CoverageFallback::uniform_successor;
  MinCostOptions mincost;
  MceOptions mce;
  /// Worker threads for independent tasks; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct AccuracyRow {
  long count = 0;
  std::uint64_t seed = 0;
  double sup_err = 0.0;
  double mae = 0.0;
  /// "ok", or the error kind that stopped the estimated pipeline; both
  /// errors are then infinite.
  std::string status = "ok";
};

/// For every (count, seed): simulate count trajectories under the world's
/// MCE policy, rerun the min-cost pipeline on the estimated transitions and
/// compare its DeltaR* with the exact one. Rows are ordered count-major.
/// Failures of the exact pipeline propagate; infeasibility or divergence of
/// an estimated instance is recorded in its row.
std::vector<AccuracyRow> run_accuracy_experiment(const ObjectWorldSpec& spec, const StochasticPolicy& target,
                                                 const FeatureModel& features, std::span<const long> counts,
                                                 std::span<const std::uint64_t> seeds,
                                                 const ExperimentOptions& options = {});

struct CostCurveRow {
  double r_min = 0.0;
  double objective = 0.0;
  double total_cost = 0.0;
  /// "ok", or the error kind that stopped this value (e.g. "no-valid-solution").
  std::string status = "ok";

  bool feasible() const { return status == "ok"; }
};

/// Solves the min-cost problem once per lower bound, with the lower bound
/// on the additional reward raised to that value at every pair (upper bound
/// and feature model unchanged). Values below the feature r_min or above
/// r_max are rejected up front.
std::vector<CostCurveRow> run_cost_curve_experiment(const ObjectWorldSpec& spec, const StochasticPolicy& target,
                                                    const FeatureModel& features,
                                                    std::span<const double> r_min_values,
                                                    const ExperimentOptions& options = {});

/// CSV with header "count,seed,sup_err,mae,status".
std::string accuracy_csv(std::span<const AccuracyRow> rows);

/// CSV with header "r_min,objective,total_cost,status".
std::string cost_curve_csv(std::span<const CostCurveRow> rows);

}  // namespace radv
