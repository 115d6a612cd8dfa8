#include "radv/policy.hpp"

#include <cmath>
#include <string>

#include "radv/error.hpp"

namespace radv {

namespace {
constexpr double kRowTolerance = 1e-12;
}

StochasticPolicy::StochasticPolicy(Table probs) : probs_(std::move(probs)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw Error(ErrorKind::invalid_input, "policy table is empty");
  for (Index s = 0; s < probs_.rows(); ++s) {
    const auto row = probs_.row(s);
    if (!row.allFinite() || (row.array() < 0.0).any()) {
      throw Error(ErrorKind::invalid_input, "policy row " + std::to_string(s) + " has negative or non-finite entries");
    }
    const double sum = row.sum();
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw Error(ErrorKind::invalid_input, "policy row " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
  }
}

StochasticPolicy StochasticPolicy::uniform(Index n_states, Index n_actions) {
  return StochasticPolicy(Table::Constant(n_states, n_actions, 1.0 / static_cast<double>(n_actions)));
}

Table softmax_rows(const Table& q) {
  Table out(q.rows(), q.cols());
  for (Index s = 0; s < q.rows(); ++s) {
    const double shift = q.row(s).maxCoeff();
    out.row(s) = (q.row(s).array() - shift).exp();
    out.row(s) /= out.row(s).sum();
  }
  return out;
}

StochasticPolicy softmax_policy(const Table& q) { return StochasticPolicy(softmax_rows(q)); }

double max_deviation(const StochasticPolicy& p, const StochasticPolicy& q) {
  if (p.n_states() != q.n_states() || p.n_actions() != q.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "policies have different shapes");
  }
  return (p.probs() - q.probs()).cwiseAbs().maxCoeff();
}

}  // namespace radv
