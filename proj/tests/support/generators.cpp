#include "generators.hpp"

#include <algorithm>
#include <numeric>

namespace radv::testing {

double uniform(Engine& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Index uniform_index(Engine& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

Mdp random_mdp(Engine& rng, const RandomMdpOptions& options) {
  const Index n = uniform_index(rng, options.min_states, options.max_states);
  const Index m = uniform_index(rng, options.min_actions, options.max_actions);
  const Index terminal = n - 1;

  MdpDefinition def;
  def.n_states = n;
  def.n_actions = m;
  def.gamma = options.gamma;
  def.terminals = {terminal};
  def.mu0 = StateVector::Zero(n);
  def.mu0.head(n - 1).setConstant(1.0 / static_cast<double>(n - 1));
  def.rewards = Table::Zero(n, m);
  def.transitions.resize(static_cast<std::size_t>(n * m));

  std::vector<Index> states(static_cast<std::size_t>(n - 1));
  std::iota(states.begin(), states.end(), Index{0});
  for (Index s = 0; s < n - 1; ++s) {
    for (Index a = 0; a < m; ++a) {
      auto& row = def.transitions[static_cast<std::size_t>(s * m + a)];
      const double stop = uniform(rng, 0.1, 0.4);
      row.push_back({terminal, stop});
      std::shuffle(states.begin(), states.end(), rng);
      const Index k = std::min<Index>(uniform_index(rng, 1, options.max_successors), n - 1);
      std::vector<double> w(static_cast<std::size_t>(k));
      for (auto& x : w) x = uniform(rng, 0.1, 1.0);
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (Index i = 0; i < k; ++i) {
        row.push_back({states[static_cast<std::size_t>(i)], (1.0 - stop) * w[static_cast<std::size_t>(i)] / total});
      }
      def.rewards(s, a) = options.reward_scale * uniform(rng, -1.0, 1.0);
    }
  }
  complete_terminal_rows(def);
  return Mdp(std::move(def));
}

StochasticPolicy random_positive_policy(Engine& rng, Index n_states, Index n_actions) {
  Table p(n_states, n_actions);
  for (Index s = 0; s < n_states; ++s) {
    for (Index a = 0; a < n_actions; ++a) p(s, a) = uniform(rng, 0.1, 1.0);
    p.row(s) /= p.row(s).sum();
  }
  return StochasticPolicy(p);
}

StateVector random_beta(Engine& rng, const Mdp& mdp, double lo, double hi) {
  StateVector beta(mdp.n_states());
  for (Index s = 0; s < mdp.n_states(); ++s) beta(s) = mdp.is_terminal(s) ? 0.0 : uniform(rng, lo, hi);
  return beta;
}

FeatureModel random_feature_model(Engine& rng, Index max_features) {
  const Index n = uniform_index(rng, 1, max_features);
  Eigen::VectorXd omega(n), phi(n), c_min(n), c_max(n);
  for (Index i = 0; i < n; ++i) {
    omega(i) = uniform(rng, 0.2, 3.0);
    phi(i) = uniform(rng, 0.2, 3.0);
    // Occasionally repeat an efficiency so ties get exercised.
    if (i > 0 && uniform(rng, 0.0, 1.0) < 0.2) {
      omega(i) = omega(i - 1);
      phi(i) = phi(i - 1);
    }
    c_min(i) = uniform(rng, -3.0, 2.0);
    c_max(i) = c_min(i) + uniform(rng, 0.0, 5.0);
  }
  return FeatureModel(omega, phi, c_min, c_max);
}

Mdp one_step_mdp(double r0, double r1, double gamma) {
  MdpDefinition def;
  def.n_states = 2;
  def.n_actions = 2;
  def.gamma = gamma;
  def.terminals = {1};
  def.mu0 = StateVector::Zero(2);
  def.mu0(0) = 1.0;
  def.transitions = {{{1, 1.0}}, {{1, 1.0}}, {}, {}};
  def.rewards = Table::Zero(2, 2);
  def.rewards(0, 0) = r0;
  def.rewards(0, 1) = r1;
  complete_terminal_rows(def);
  return Mdp(std::move(def));
}

Mdp chain_mdp(Index n, const Table& rewards, double gamma) {
  MdpDefinition def;
  def.n_states = n;
  def.n_actions = 2;
  def.gamma = gamma;
  def.terminals = {n - 1};
  def.mu0 = StateVector::Zero(n);
  def.mu0(0) = 1.0;
  def.transitions.resize(static_cast<std::size_t>(n * 2));
  for (Index s = 0; s + 1 < n; ++s) {
    def.transitions[static_cast<std::size_t>(s * 2)] = {{s + 1, 1.0}};
    def.transitions[static_cast<std::size_t>(s * 2 + 1)] = {{s, 1.0}};
  }
  def.rewards = rewards;
  complete_terminal_rows(def);
  return Mdp(std::move(def));
}

StochasticPolicy deterministic_policy(Index n_states, Index n_actions, Index action) {
  Table p = Table::Zero(n_states, n_actions);
  p.col(action).setOnes();
  return StochasticPolicy(p);
}

}  // namespace radv::testing
