#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace radv::testing {

Table dense_q(const Mdp& mdp, const StochasticPolicy& policy) {
  const Index n = mdp.n_states();
  const Index m = mdp.n_actions();
  const Index dim = n * m;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (Index s = 0; s < n; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (Index a = 0; a < m; ++a) {
      const Index row = s * m + a;
      rhs(row) = mdp.rewards()(s, a);
      for (const auto& succ : mdp.successors(s, a)) {
        if (mdp.is_terminal(succ.state)) continue;
        for (Index b = 0; b < m; ++b) {
          system(row, succ.state * m + b) -= mdp.gamma() * succ.probability * policy(succ.state, b);
        }
      }
    }
  }
  const Eigen::VectorXd q = system.fullPivLu().solve(rhs);
  Table out(n, m);
  for (Index s = 0; s < n; ++s) {
    for (Index a = 0; a < m; ++a) out(s, a) = q(s * m + a);
  }
  return out;
}

Table dense_visitation(const Mdp& mdp, const StochasticPolicy& policy) {
  const Index n = mdp.n_states();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = mdp.mu0();
  for (Index s = 0; s < n; ++s) {
    if (mdp.is_terminal(s)) {
      rhs(s) = 0.0;
      continue;
    }
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      for (const auto& succ : mdp.successors(s, a)) {
        if (mdp.is_terminal(succ.state)) continue;
        system(succ.state, s) -= mdp.gamma() * policy(s, a) * succ.probability;
      }
    }
  }
  const Eigen::VectorXd x = system.fullPivLu().solve(rhs);
  Table d = Table::Zero(n, mdp.n_actions());
  for (Index s = 0; s < n; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (Index a = 0; a < mdp.n_actions(); ++a) d(s, a) = x(s) * policy(s, a);
  }
  return d;
}

Table rollout_q(const Mdp& mdp, const StochasticPolicy& policy, int horizon) {
  const Index n = mdp.n_states();
  const Index m = mdp.n_actions();
  Table q = Table::Zero(n, m);
  for (int h = 0; h < horizon; ++h) {
    Table next = Table::Zero(n, m);
    for (Index s = 0; s < n; ++s) {
      if (mdp.is_terminal(s)) continue;
      for (Index a = 0; a < m; ++a) {
        double future = 0.0;
        for (const auto& succ : mdp.successors(s, a)) {
          double v = 0.0;
          for (Index b = 0; b < m; ++b) v += policy(succ.state, b) * q(succ.state, b);
          future += succ.probability * v;
        }
        next(s, a) = mdp.rewards()(s, a) + mdp.gamma() * future;
      }
    }
    q = next;
  }
  return q;
}

MonteCarloVisitation monte_carlo_visitation(const Mdp& mdp, const StochasticPolicy& policy, long n,
                                            std::uint64_t seed) {
  const Index ns = mdp.n_states();
  const Index m = mdp.n_actions();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](const auto& weights, Index size) {
    double x = u(rng);
    for (Index i = 0; i < size; ++i) {
      x -= weights(i);
      if (x < 0.0) return i;
    }
    return size - 1;
  };

  Table sum = Table::Zero(ns, m);
  Table sum_sq = Table::Zero(ns, m);
  Table episode(ns, m);
  for (long e = 0; e < n; ++e) {
    episode.setZero();
    Index s = draw(mdp.mu0(), ns);
    while (!mdp.is_terminal(s)) {
      const Index a = draw(policy.probs().row(s), m);
      episode(s, a) += 1.0;
      const auto succ = mdp.successors(s, a);
      double x = u(rng);
      Index next = succ.back().state;
      for (const auto& t : succ) {
        x -= t.probability;
        if (x < 0.0) {
          next = t.state;
          break;
        }
      }
      s = next;
    }
    sum += episode;
    sum_sq += episode.cwiseProduct(episode);
  }
  const double count = static_cast<double>(n);
  MonteCarloVisitation out;
  out.mean = sum / count;
  const Table var = (sum_sq / count - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0);
  out.std_error = (var / count).cwiseSqrt();
  return out;
}

double enumerated_causal_entropy(const Mdp& mdp, const StochasticPolicy& policy, int max_depth) {
  double entropy = 0.0;
  std::function<void(Index, double, double, int)> walk = [&](Index s, double prob, double log_sum, int depth) {
    if (mdp.is_terminal(s)) {
      entropy -= prob * log_sum;
      return;
    }
    if (depth == max_depth) throw std::runtime_error("episode longer than the enumeration depth");
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      for (const auto& succ : mdp.successors(s, a)) {
        walk(succ.state, prob * pa * succ.probability, log_sum + std::log(pa), depth + 1);
      }
    }
  };
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.mu0()(s) > 0.0) walk(s, mdp.mu0()(s), 0.0, 0);
  }
  return entropy;
}

LpAssignment lp_assignment(double delta_r, const FeatureModel& features) {
  const Index n = features.n_features();
  const Eigen::VectorXd e = features.omega().cwiseQuotient(features.phi());
  LpAssignment best;
  best.cost = std::numeric_limits<double>::infinity();
  // Every vertex of {y in box : e . y = delta_r} has at most one coordinate
  // strictly inside its bounds.
  for (Index free = 0; free < n; ++free) {
    for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
      Eigen::VectorXd y(n);
      double fixed = 0.0;
      long bit = 0;
      for (Index i = 0; i < n; ++i) {
        if (i == free) continue;
        y(i) = (mask >> bit++) & 1 ? features.c_max()(i) : features.c_min()(i);
        fixed += e(i) * y(i);
      }
      y(free) = (delta_r - fixed) / e(free);
      const double slack = 1e-9 * (1.0 + std::abs(y(free)));
      if (y(free) < features.c_min()(free) - slack || y(free) > features.c_max()(free) + slack) continue;
      y(free) = std::clamp(y(free), features.c_min()(free), features.c_max()(free));
      const double cost = y.sum();
      if (cost < best.cost) {
        best.feasible = true;
        best.cost = cost;
        best.spend = y;
      }
    }
  }
  return best;
}

std::vector<double> softmax(const std::vector<double>& x) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : x) mx = std::max(mx, v);
  std::vector<double> out(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += out[i] = std::exp(x[i] - mx);
  for (double& v : out) v /= total;
  return out;
}

}  // namespace radv::testing
