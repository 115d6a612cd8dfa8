#include "radv/mincost.hpp"

#include <cmath>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kDivergenceLimit = 1e15;

enum class Backup { max, min };

StateVector bound_iteration(const Mdp& mdp, const Table& effective_reward, Backup backup,
                            const SolverOptions& options) {
  StateVector beta = StateVector::Zero(mdp.n_states());
  double increment = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter < options.max_iters; ++iter) {
    const Table g = mdp.gamma() * expected_next(mdp, beta) + effective_reward;
    StateVector next = backup == Backup::max ? StateVector(g.rowwise().maxCoeff()) : StateVector(g.rowwise().minCoeff());
    for (Index t : mdp.terminals()) next(t) = 0.0;
    increment = (next - beta).cwiseAbs().maxCoeff();
    beta = std::move(next);
    if (increment <= options.tolerance) return beta;
    if (!std::isfinite(increment) || beta.cwiseAbs().maxCoeff() > kDivergenceLimit) break;
  }
  std::ostringstream msg;
  msg << (backup == Backup::max ? "beta_min" : "beta_max") << " iteration did not settle (last increment "
      << increment << ")";
  throw Error(ErrorKind::nonconvergent, msg.str());
}

void check_bounds_shape(const Mdp& mdp, const RewardBounds& bounds) {
  if (bounds.lower.rows() != mdp.n_states() || bounds.lower.cols() != mdp.n_actions() ||
      bounds.upper.rows() != mdp.n_states() || bounds.upper.cols() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "reward bounds do not match the MDP");
  }
  if (!bounds.lower.allFinite() || !bounds.upper.allFinite()) {
    throw Error(ErrorKind::invalid_input, "reward bounds must be finite");
  }
  if ((bounds.lower.array() > bounds.upper.array()).any()) {
    throw Error(ErrorKind::invalid_input, "reward bounds need lower <= upper");
  }
}

}  // namespace

RewardBounds RewardBounds::uniform(Index n_states, Index n_actions, double r_min, double r_max) {
  return RewardBounds{Table::Constant(n_states, n_actions, r_min), Table::Constant(n_states, n_actions, r_max)};
}

Table compute_k(const Mdp& mdp, const StochasticPolicy& target, double epsilon_floor) {
  check_target_support(mdp, target, epsilon_floor);
  Table log_target = target.probs().array().log();
  zero_terminal_rows(mdp, log_target);
  // Entries at or below the floor are only reachable on terminal rows, which
  // were just zeroed.
  const StateVector neg_entropy = target.probs().cwiseProduct(log_target).rowwise().sum();
  Table k = log_target - mdp.gamma() * expected_next(mdp, neg_entropy) - mdp.rewards();
  zero_terminal_rows(mdp, k);
  return k;
}

BetaBounds beta_bounds(const Mdp& mdp, const Table& k, const RewardBounds& bounds, const SolverOptions& options) {
  check_bounds_shape(mdp, bounds);
  if (k.rows() != mdp.n_states() || k.cols() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "k table does not match the MDP");
  }
  if (!k.allFinite()) throw Error(ErrorKind::invalid_input, "k has non-finite entries");

  BetaBounds out;
  out.beta_min = bound_iteration(mdp, bounds.lower - k, Backup::max, options);
  out.beta_max = bound_iteration(mdp, bounds.upper - k, Backup::min, options);
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (out.beta_min(s) > out.beta_max(s) + kFeasibilitySlack) out.infeasible_states.push_back(s);
  }
  out.feasible = out.infeasible_states.empty();
  return out;
}

BetaBounds beta_bounds(const Mdp& mdp, const Table& k, double r_min, double r_max, const SolverOptions& options) {
  if (r_min > r_max) throw Error(ErrorKind::invalid_input, "r_min must not exceed r_max");
  return beta_bounds(mdp, k, RewardBounds::uniform(mdp.n_states(), mdp.n_actions(), r_min, r_max), options);
}

Table reward_from_beta(const Mdp& mdp, const Table& k, const StateVector& beta) {
  Table delta_r = (k - mdp.gamma() * expected_next(mdp, beta)).colwise() + beta;
  zero_terminal_rows(mdp, delta_r);
  return delta_r;
}

double objective_value(const Mdp& mdp, const StochasticPolicy& target, const AdvancementSolution& solution) {
  const StateVector per_state = target.probs().cwiseProduct(solution.delta_q).rowwise().sum();
  return mdp.mu0().dot(per_state);
}

MinCostSolution min_reward_solution(const Mdp& mdp, const StochasticPolicy& target, const FeatureModel& features,
                                    const MinCostOptions& options) {
  const RewardBounds bounds = options.bounds.value_or(
      RewardBounds::uniform(mdp.n_states(), mdp.n_actions(), features.r_min(), features.r_max()));
  check_bounds_shape(mdp, bounds);
  if (bounds.lower.minCoeff() < features.r_min() - kAchievableSlack ||
      bounds.upper.maxCoeff() > features.r_max() + kAchievableSlack) {
    throw Error(ErrorKind::invalid_input, "reward bound overrides must lie inside the feature bounds");
  }

  Table k = compute_k(mdp, target, options.epsilon_floor);
  BetaBounds bb = beta_bounds(mdp, k, bounds, options.solver);
  if (!bb.feasible) {
    std::ostringstream msg;
    msg << "beta_min > beta_max at state(s)";
    for (Index s : bb.infeasible_states) msg << ' ' << s;
    throw Error(ErrorKind::no_valid_solution, msg.str(), bb.infeasible_states);
  }
  Table delta_r_star = reward_from_beta(mdp, k, bb.beta_min);
  std::vector<std::pair<Index, Index>> outside;
  std::vector<Index> outside_states;
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) continue;
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      const double r = delta_r_star(s, a);
      if (r < bounds.lower(s, a) - kAchievableSlack || r > bounds.upper(s, a) + kAchievableSlack) {
        outside.emplace_back(s, a);
        if (outside_states.empty() || outside_states.back() != s) outside_states.push_back(s);
      }
    }
  }
  if (!outside.empty()) {
    std::ostringstream msg;
    msg << "beta_min <= beta_max everywhere but the additional reward at beta_min leaves the bounds at";
    for (const auto& [s, a] : outside) msg << " (" << s << "," << a << ")";
    throw Error(ErrorKind::not_achievable, msg.str(), std::move(outside_states), std::move(outside));
  }

  MinCostSolution out{advancement_delta_q(mdp, target, bb.beta_min, {options.epsilon_floor, options.solver}),
                      std::move(bb.beta_min),
                      std::move(bb.beta_max),
                      std::move(k),
                      std::move(delta_r_star),
                      0.0,
                      {},
                      Table(),
                      0.0};
  out.objective = objective_value(mdp, target, out.advancement);

  out.assignments.resize(static_cast<std::size_t>(mdp.n_states() * mdp.n_actions()));
  out.costs = Table::Zero(mdp.n_states(), mdp.n_actions());
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) continue;
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      auto& df = out.assignments[static_cast<std::size_t>(s * mdp.n_actions() + a)];
      df = assign_features(out.delta_r_star(s, a), features);
      out.costs(s, a) = features.phi().dot(df);
    }
  }
  const VisitationTable d = visitation_frequencies(mdp, target, options.solver);
  out.total_cost = d.cwiseProduct(out.costs).sum();
  return out;
}

}  // namespace radv
