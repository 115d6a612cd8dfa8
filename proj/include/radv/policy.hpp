#pragma once

#include "radv/types.hpp"

namespace radv {

/// pi(a|s) as an S x A table with every row a probability distribution
/// (entries >= 0, rows summing to 1 within 1e-12).
class StochasticPolicy {
 public:
  /// Throws Error(invalid_input) when a row is not a distribution.
  explicit StochasticPolicy(Table probs);

  static StochasticPolicy uniform(Index n_states, Index n_actions);

  Index n_states() const noexcept { return probs_.rows(); }
  Index n_actions() const noexcept { return probs_.cols(); }
  double operator()(Index s, Index a) const { return probs_(s, a); }
  const Table& probs() const noexcept { return probs_; }

 private:
  Table probs_;
};

/// Row-wise softmax of a Q table, evaluated with the row maximum shifted out.
Table softmax_rows(const Table& q);

StochasticPolicy softmax_policy(const Table& q);

/// sup over all (s, a) of |p(a|s) - q(a|s)|.
double max_deviation(const StochasticPolicy& p, const StochasticPolicy& q);

}  // namespace radv
