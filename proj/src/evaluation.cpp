#include "radv/evaluation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "radv/error.hpp"

namespace radv {

namespace {

// Above this many nonterminal states the value system is factored sparse.
constexpr Index kDenseSolveLimit = 400;

void check_shapes(const Mdp& mdp, const StochasticPolicy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "policy is " + std::to_string(policy.n_states()) + "x" +
                                               std::to_string(policy.n_actions()) + ", MDP is " +
                                               std::to_string(mdp.n_states()) + "x" +
                                               std::to_string(mdp.n_actions()));
  }
}

std::string describe(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

enum class System { values, flows };

// Solves (I - gamma P_pi) x = b for values, or its transpose for discounted
// state flows, over nonterminal states. Returns a full-length vector
// (terminals 0); may contain non-finite values when the system is singular.
StateVector solve_policy_system(const Mdp& mdp, const StochasticPolicy& policy, const StateVector& b,
                                System which) {
  const Index n = mdp.n_states();
  const Index m = mdp.n_actions();
  std::vector<Index> position(static_cast<std::size_t>(n), -1);
  std::vector<Index> free_states;
  for (Index s = 0; s < n; ++s) {
    if (!mdp.is_terminal(s)) {
      position[static_cast<std::size_t>(s)] = static_cast<Index>(free_states.size());
      free_states.push_back(s);
    }
  }
  const auto k = static_cast<Index>(free_states.size());
  StateVector full = StateVector::Zero(n);
  if (k == 0) return full;

  StateVector rhs(k);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < k; ++i) {
    const Index s = free_states[static_cast<std::size_t>(i)];
    rhs(i) = b(s);
    triplets.emplace_back(i, i, 1.0);
    for (Index a = 0; a < m; ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      for (const auto& succ : mdp.successors(s, a)) {
        const Index j = position[static_cast<std::size_t>(succ.state)];
        if (j < 0) continue;
        if (which == System::values) {
          triplets.emplace_back(i, j, -mdp.gamma() * pa * succ.probability);
        } else {
          triplets.emplace_back(j, i, -mdp.gamma() * pa * succ.probability);
        }
      }
    }
  }

  StateVector v;
  if (k <= kDenseSolveLimit) {
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k, k);
    for (const auto& t : triplets) system(t.row(), t.col()) += t.value();
    v = system.partialPivLu().solve(rhs);
  } else {
    Eigen::SparseMatrix<double> system(k, k);
    system.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) {
      full.setConstant(std::numeric_limits<double>::quiet_NaN());
      return full;
    }
    v = lu.solve(rhs);
  }
  for (Index i = 0; i < k; ++i) full(free_states[static_cast<std::size_t>(i)]) = v(i);
  return full;
}

}  // namespace

QTable evaluation_backup(const Mdp& mdp, const StochasticPolicy& policy, const QTable& q) {
  const StateVector v = policy.probs().cwiseProduct(q).rowwise().sum();
  QTable out = mdp.rewards() + mdp.gamma() * expected_next(mdp, v);
  zero_terminal_rows(mdp, out);
  return out;
}

double evaluation_residual(const Mdp& mdp, const StochasticPolicy& policy, const QTable& q) {
  return (evaluation_backup(mdp, policy, q) - q).cwiseAbs().maxCoeff();
}

QTable policy_evaluation_q(const Mdp& mdp, const StochasticPolicy& policy, const SolverOptions& options) {
  check_shapes(mdp, policy);
  const StateVector r_pi = policy.probs().cwiseProduct(mdp.rewards()).rowwise().sum();
  const StateVector v = solve_policy_system(mdp, policy, r_pi, System::values);

  QTable q;
  if (v.allFinite()) {
    q = mdp.rewards() + mdp.gamma() * expected_next(mdp, v);
    zero_terminal_rows(mdp, q);
  } else {
    q = QTable::Zero(mdp.n_states(), mdp.n_actions());
  }

  double residual = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter <= options.max_iters; ++iter) {
    QTable next = evaluation_backup(mdp, policy, q);
    residual = (next - q).cwiseAbs().maxCoeff();
    if (residual <= options.tolerance) return q;
    if (!std::isfinite(residual)) break;
    q = std::move(next);
  }
  throw Error(ErrorKind::nonconvergent, "policy evaluation stopped with residual " + describe(residual));
}

VisitationTable visitation_frequencies(const Mdp& mdp, const StochasticPolicy& policy,
                                       const SolverOptions& options) {
  check_shapes(mdp, policy);
  const Index n = mdp.n_states();
  const Index m = mdp.n_actions();

  StateVector x = mdp.mu0();
  for (Index t : mdp.terminals()) x(t) = 0.0;

  const StateVector direct = solve_policy_system(mdp, policy, x, System::flows);
  if (direct.allFinite() && direct.minCoeff() >= -options.tolerance) {
    VisitationTable d = policy.probs().array().colwise() * direct.cwiseMax(0.0).array();
    if (flow_imbalance(mdp, d) <= options.tolerance * std::max(1.0, direct.maxCoeff())) return d;
  }

  // Singular or inaccurate direct solve: accumulate the flow step by step.
  VisitationTable d = VisitationTable::Zero(n, m);
  double increment = x.cwiseAbs().maxCoeff();
  for (long iter = 0; iter < options.max_iters; ++iter) {
    const VisitationTable flow = policy.probs().array().colwise() * x.array();
    d += flow;
    const Eigen::Map<const Eigen::VectorXd> flat(flow.data(), n * m);
    x = mdp.gamma() * (mdp.transition_matrix().transpose() * flat);
    for (Index t : mdp.terminals()) x(t) = 0.0;
    increment = x.cwiseAbs().maxCoeff();
    if (increment <= options.tolerance) return d;
  }
  throw Error(ErrorKind::nonconvergent, "visitation frequencies still moving by " + describe(increment));
}

double causal_entropy(const VisitationTable& d, const StochasticPolicy& policy) {
  if (d.rows() != policy.n_states() || d.cols() != policy.n_actions()) {
    throw Error(ErrorKind::shape_mismatch, "visitation table and policy have different shapes");
  }
  double h = 0.0;
  for (Index s = 0; s < d.rows(); ++s) {
    for (Index a = 0; a < d.cols(); ++a) {
      if (d(s, a) == 0.0) continue;
      if (policy(s, a) == 0.0) {
        throw Error(ErrorKind::entropy_domain, "pair (" + std::to_string(s) + "," + std::to_string(a) +
                                                   ") is visited but has zero probability",
                    {}, {{s, a}});
      }
      h -= d(s, a) * std::log(policy(s, a));
    }
  }
  return h;
}

double expected_return(const Mdp& mdp, const StochasticPolicy& policy, const SolverOptions& options) {
  const VisitationTable d = visitation_frequencies(mdp, policy, options);
  const double by_visits = d.cwiseProduct(mdp.rewards()).sum();

  const QTable q = policy_evaluation_q(mdp, policy, options);
  const StateVector v = policy.probs().cwiseProduct(q).rowwise().sum();
  const double by_values = mdp.mu0().dot(v);

  if (std::abs(by_visits - by_values) > 1e-8 * std::max(1.0, std::abs(by_values))) {
    throw Error(ErrorKind::nonconvergent, "expected return mismatch: visitation " + describe(by_visits) +
                                              " vs values " + describe(by_values));
  }
  return by_visits;
}

double flow_imbalance(const Mdp& mdp, const VisitationTable& d) {
  const Eigen::Map<const Eigen::VectorXd> flat(d.data(), d.size());
  const StateVector inflow = mdp.gamma() * (mdp.transition_matrix().transpose() * flat);
  const StateVector outflow = d.rowwise().sum();
  double worst = 0.0;
  for (Index s = 0; s < mdp.n_states(); ++s) {
    if (mdp.is_terminal(s)) continue;
    worst = std::max(worst, std::abs(inflow(s) + mdp.mu0()(s) - outflow(s)));
  }
  return worst;
}

}  // namespace radv
