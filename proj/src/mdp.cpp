#include "radv/mdp.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

namespace {

constexpr double kSumTolerance = 1e-9;

std::string fmt_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

bool in_range(Index i, Index n) { return i >= 0 && i < n; }

std::vector<std::vector<Index>> predecessor_lists(const MdpDefinition& def) {
  std::vector<std::vector<Index>> predecessors(static_cast<std::size_t>(def.n_states));
  for (Index s = 0; s < def.n_states; ++s) {
    for (Index a = 0; a < def.n_actions; ++a) {
      for (const auto& succ : def.transitions[static_cast<std::size_t>(s * def.n_actions + a)]) {
        if (succ.probability > 0.0 && in_range(succ.state, def.n_states)) {
          predecessors[static_cast<std::size_t>(succ.state)].push_back(s);
        }
      }
    }
  }
  return predecessors;
}

// Marks every state that can reach a marked state (marks included).
void backward_closure(const std::vector<std::vector<Index>>& predecessors, std::vector<bool>& marked) {
  std::deque<Index> queue;
  for (std::size_t s = 0; s < marked.size(); ++s) {
    if (marked[s]) queue.push_back(static_cast<Index>(s));
  }
  while (!queue.empty()) {
    Index s = queue.front();
    queue.pop_front();
    for (Index p : predecessors[static_cast<std::size_t>(s)]) {
      if (!marked[static_cast<std::size_t>(p)]) {
        marked[static_cast<std::size_t>(p)] = true;
        queue.push_back(p);
      }
    }
  }
}

// Under the uniform policy a state is absorbed with probability 1 iff no
// state reachable from it is cut off from every terminal.
std::vector<bool> absorbed_surely(const MdpDefinition& def) {
  const auto n = static_cast<std::size_t>(def.n_states);
  const auto predecessors = predecessor_lists(def);

  std::vector<bool> reaches_terminal(n, false);
  for (Index t : def.terminals) reaches_terminal[static_cast<std::size_t>(t)] = true;
  backward_closure(predecessors, reaches_terminal);

  std::vector<bool> doomed(n);
  for (std::size_t s = 0; s < n; ++s) doomed[s] = !reaches_terminal[s];
  backward_closure(predecessors, doomed);

  std::vector<bool> ok(n);
  for (std::size_t s = 0; s < n; ++s) ok[s] = !doomed[s];
  return ok;
}

}  // namespace

void complete_terminal_rows(MdpDefinition& def) {
  if (def.n_states <= 0 || def.n_actions <= 0) return;
  def.transitions.resize(static_cast<std::size_t>(def.n_states * def.n_actions));
  for (Index t : def.terminals) {
    if (!in_range(t, def.n_states)) continue;
    for (Index a = 0; a < def.n_actions; ++a) {
      auto& row = def.transitions[static_cast<std::size_t>(t * def.n_actions + a)];
      if (row.empty()) row.push_back({t, 1.0});
    }
  }
}

ValidationReport validate_mdp(const MdpDefinition& def) {
  ValidationReport report;
  auto& v = report.violations;
  if (def.n_states <= 0) v.push_back("n_states must be positive");
  if (def.n_actions <= 0) v.push_back("n_actions must be positive");
  if (!(def.gamma > 0.0 && def.gamma <= 1.0)) v.push_back("gamma " + fmt_number(def.gamma) + " outside (0, 1]");
  if (!v.empty()) return report;

  const Index pairs = def.n_states * def.n_actions;
  if (static_cast<Index>(def.transitions.size()) != pairs) {
    v.push_back("transition table has " + std::to_string(def.transitions.size()) + " rows, expected " +
                std::to_string(pairs));
    return report;
  }
  if (def.mu0.size() != def.n_states) {
    v.push_back("mu0 has length " + std::to_string(def.mu0.size()) + ", expected " + std::to_string(def.n_states));
  }
  const bool has_rewards = def.rewards.size() != 0;
  if (has_rewards && (def.rewards.rows() != def.n_states || def.rewards.cols() != def.n_actions)) {
    v.push_back("reward table has shape " + std::to_string(def.rewards.rows()) + "x" +
                std::to_string(def.rewards.cols()));
    return report;
  }
  if (has_rewards && !def.rewards.allFinite()) v.push_back("reward table has non-finite entries");

  bool indices_ok = true;
  for (Index s = 0; s < def.n_states; ++s) {
    for (Index a = 0; a < def.n_actions; ++a) {
      double sum = 0.0;
      for (const auto& succ : def.transitions[static_cast<std::size_t>(s * def.n_actions + a)]) {
        if (!in_range(succ.state, def.n_states)) {
          v.push_back("row (" + std::to_string(s) + "," + std::to_string(a) + ") has successor " +
                      std::to_string(succ.state) + " out of range");
          indices_ok = false;
        }
        if (!(succ.probability >= 0.0) || !std::isfinite(succ.probability)) {
          v.push_back("row (" + std::to_string(s) + "," + std::to_string(a) + ") has invalid probability " +
                      fmt_number(succ.probability));
        }
        sum += succ.probability;
      }
      if (std::abs(sum - 1.0) > kSumTolerance) {
        v.push_back("row (" + std::to_string(s) + "," + std::to_string(a) + ") sums to " + fmt_number(sum));
      }
    }
  }

  if (def.mu0.size() == def.n_states) {
    if ((def.mu0.array() < 0.0).any() || !def.mu0.allFinite()) v.push_back("mu0 has negative or non-finite entries");
    if (std::abs(def.mu0.sum() - 1.0) > kSumTolerance) v.push_back("mu0 sums to " + fmt_number(def.mu0.sum()));
  }

  for (Index t : def.terminals) {
    if (!in_range(t, def.n_states)) {
      v.push_back("terminal " + std::to_string(t) + " out of range");
      indices_ok = false;
      continue;
    }
    for (Index a = 0; a < def.n_actions; ++a) {
      const auto& row = def.transitions[static_cast<std::size_t>(t * def.n_actions + a)];
      double self = 0.0;
      for (const auto& succ : row) {
        if (succ.state == t) self += succ.probability;
      }
      if (std::abs(self - 1.0) > kSumTolerance) {
        v.push_back("terminal " + std::to_string(t) + " is not absorbing under action " + std::to_string(a));
      }
      if (has_rewards && def.rewards(t, a) != 0.0) {
        v.push_back("terminal " + std::to_string(t) + " has nonzero reward under action " + std::to_string(a));
      }
    }
  }

  if (def.gamma == 1.0 && indices_ok) {
    const auto ok = absorbed_surely(def);
    for (Index s = 0; s < def.n_states; ++s) {
      if (!ok[static_cast<std::size_t>(s)]) v.push_back("state " + std::to_string(s) + " cannot reach terminal");
    }
  }
  return report;
}

Mdp::Mdp(MdpDefinition def) : def_(std::move(def)) {
  const auto report = validate_mdp(def_);
  if (!report.ok()) {
    std::string msg = "invalid MDP:";
    for (const auto& violation : report.violations) msg += "\n  " + violation;
    throw Error(ErrorKind::invalid_input, msg);
  }
  if (def_.rewards.size() == 0) def_.rewards = Table::Zero(def_.n_states, def_.n_actions);

  terminal_mask_.assign(static_cast<std::size_t>(def_.n_states), false);
  for (Index t : def_.terminals) terminal_mask_[static_cast<std::size_t>(t)] = true;

  std::vector<Eigen::Triplet<double>> triplets;
  for (Index row = 0; row < def_.n_states * def_.n_actions; ++row) {
    for (const auto& succ : def_.transitions[static_cast<std::size_t>(row)]) {
      if (succ.probability != 0.0) triplets.emplace_back(row, succ.state, succ.probability);
    }
  }
  transition_matrix_.resize(def_.n_states * def_.n_actions, def_.n_states);
  // duplicates are summed
  transition_matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

Mdp Mdp::with_rewards(const Table& rewards) const {
  MdpDefinition def = def_;
  def.rewards = rewards;
  return Mdp(std::move(def));
}

Table expected_next(const Mdp& mdp, const StateVector& v) {
  Eigen::VectorXd flat = mdp.transition_matrix() * v;
  return Eigen::Map<const Table>(flat.data(), mdp.n_states(), mdp.n_actions());
}

void zero_terminal_rows(const Mdp& mdp, Table& table) {
  for (Index t : mdp.terminals()) table.row(t).setZero();
}

}  // namespace radv
