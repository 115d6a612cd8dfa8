#include "radv/estimation.hpp"

#include <cmath>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

EmpiricalModel::EmpiricalModel(Index n_states, Index n_actions)
    : n_states_(n_states), n_actions_(n_actions), counts_(static_cast<std::size_t>(n_states * n_actions)) {
  if (n_states <= 0 || n_actions <= 0) throw Error(ErrorKind::invalid_input, "empty state or action set");
}

void EmpiricalModel::add(Index s, Index a, Index next) {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_ || next < 0 || next >= n_states_) {
    std::ostringstream msg;
    msg << "transition (" << s << "," << a << "," << next << ") is out of range";
    throw Error(ErrorKind::invalid_input, msg.str());
  }
  ++counts_[flat(s, a)][next];
}

long EmpiricalModel::visits(Index s, Index a) const {
  long total = 0;
  for (const auto& [next, count] : counts_[flat(s, a)]) total += count;
  return total;
}

std::vector<Successor> EmpiricalModel::row(Index s, Index a) const {
  const double total = static_cast<double>(visits(s, a));
  std::vector<Successor> out;
  for (const auto& [next, count] : counts_[flat(s, a)]) out.push_back({next, static_cast<double>(count) / total});
  return out;
}

std::vector<std::pair<Index, Index>> EmpiricalModel::unobserved() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index s = 0; s < n_states_; ++s) {
    for (Index a = 0; a < n_actions_; ++a) {
      if (!observed(s, a)) out.emplace_back(s, a);
    }
  }
  return out;
}

EmpiricalModel estimate_transitions(std::span<const Trajectory> trajectories, Index n_states, Index n_actions) {
  if (trajectories.empty()) throw Error(ErrorKind::no_data, "no trajectories");
  EmpiricalModel model(n_states, n_actions);
  long transitions = 0;
  for (const auto& trajectory : trajectories) {
    for (std::size_t t = 0; t + 1 < trajectory.steps.size(); ++t) {
      const auto& step = trajectory.steps[t];
      model.add(step.state, step.action, trajectory.steps[t + 1].state);
      ++transitions;
    }
  }
  if (transitions == 0) throw Error(ErrorKind::no_data, "trajectories contain no transitions");
  return model;
}

KnownModel KnownModel::of(const Mdp& mdp) {
  return KnownModel{mdp.rewards(), mdp.mu0(), mdp.gamma(), mdp.terminals()};
}

Mdp empirical_mdp(const EmpiricalModel& model, const KnownModel& known, CoverageFallback fallback) {
  MdpDefinition def;
  def.n_states = model.n_states();
  def.n_actions = model.n_actions();
  def.gamma = known.gamma;
  def.mu0 = known.mu0;
  def.terminals = known.terminals;
  def.rewards = known.rewards;
  def.transitions.resize(static_cast<std::size_t>(def.n_states * def.n_actions));

  std::vector<bool> terminal(static_cast<std::size_t>(def.n_states), false);
  for (Index t : known.terminals) {
    if (t >= 0 && t < def.n_states) terminal[static_cast<std::size_t>(t)] = true;
  }

  std::vector<std::pair<Index, Index>> gaps;
  std::vector<Index> gap_states;
  for (Index s = 0; s < def.n_states; ++s) {
    for (Index a = 0; a < def.n_actions; ++a) {
      auto& row = def.transitions[static_cast<std::size_t>(s * def.n_actions + a)];
      if (terminal[static_cast<std::size_t>(s)]) {
        row.push_back({s, 1.0});
      } else if (model.observed(s, a)) {
        row = model.row(s, a);
      } else if (fallback == CoverageFallback::uniform_successor) {
        for (Index next = 0; next < def.n_states; ++next) {
          row.push_back({next, 1.0 / static_cast<double>(def.n_states)});
        }
      } else {
        gaps.emplace_back(s, a);
        if (gap_states.empty() || gap_states.back() != s) gap_states.push_back(s);
      }
    }
  }
  if (!gaps.empty()) {
    std::ostringstream msg;
    msg << gaps.size() << " unobserved pair(s):";
    for (const auto& [s, a] : gaps) msg << " (" << s << "," << a << ")";
    throw Error(ErrorKind::coverage, msg.str(), std::move(gap_states), std::move(gaps));
  }
  return Mdp(std::move(def));
}

MinCostSolution sample_based_min_reward(std::span<const Trajectory> trajectories, const KnownModel& known,
                                        const StochasticPolicy& target, const FeatureModel& features,
                                        CoverageFallback fallback, const MinCostOptions& options) {
  const EmpiricalModel model = estimate_transitions(trajectories, known.rewards.rows(), known.rewards.cols());
  const Mdp estimated = empirical_mdp(model, known, fallback);
  return min_reward_solution(estimated, target, features, options);
}

namespace {

template <typename Visit>
void for_each_error(const MinCostSolution& estimated, const MinCostSolution& exact, Visit&& visit) {
  const Table& est = estimated.delta_r_star;
  const Table& ref = exact.delta_r_star;
  if (est.rows() != ref.rows() || est.cols() != ref.cols() ||
      estimated.assignments.size() != exact.assignments.size()) {
    throw Error(ErrorKind::shape_mismatch, "solutions have different shapes");
  }
  for (Index s = 0; s < ref.rows(); ++s) {
    for (Index a = 0; a < ref.cols(); ++a) {
      if (exact.assignment(s, a).size() == 0) continue;
      visit(std::abs(est(s, a) - ref(s, a)));
    }
  }
}

}  // namespace

double advancement_error(const MinCostSolution& estimated, const MinCostSolution& exact) {
  double worst = 0.0;
  for_each_error(estimated, exact, [&](double e) { worst = std::max(worst, e); });
  return worst;
}

double advancement_mean_abs_error(const MinCostSolution& estimated, const MinCostSolution& exact) {
  double sum = 0.0;
  long count = 0;
  for_each_error(estimated, exact, [&](double e) {
    sum += e;
    ++count;
  });
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace radv
