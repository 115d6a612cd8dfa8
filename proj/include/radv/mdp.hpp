#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "radv/types.hpp"

namespace radv {

struct Successor {
  Index state = 0;
  double probability = 0.0;
};

/// Raw, unchecked description of a finite MDP. Turn it into an Mdp to get
/// the validated, immutable form the solvers accept.
struct MdpDefinition {
  Index n_states = 0;
  Index n_actions = 0;
  double gamma = 1.0;
  StateVector mu0;
  std::vector<Index> terminals;
  /// Successor lists indexed by s * n_actions + a.
  std::vector<std::vector<Successor>> transitions;
  /// Missing (zero-size) means all rewards are 0.
  Table rewards;
};

/// Gives every terminal state with an empty successor list the absorbing
/// self-loop under each action. Rows that are already present are left alone
/// so validation still catches malformed terminals.
void complete_terminal_rows(MdpDefinition& def);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_mdp(const MdpDefinition& def);

/// Validated finite MDP. Immutable after construction.
///
/// Transitions are stored twice: as per-pair successor lists (for sampling)
/// and as a sparse (S*A) x S matrix whose row s * n_actions + a holds
/// T(. | s, a), which turns every expectation over successors into a single
/// sparse product.
class Mdp {
 public:
  /// Throws Error(invalid_input) carrying every violation when the
  /// definition does not validate.
  explicit Mdp(MdpDefinition def);

  Index n_states() const noexcept { return def_.n_states; }
  Index n_actions() const noexcept { return def_.n_actions; }
  double gamma() const noexcept { return def_.gamma; }
  const StateVector& mu0() const noexcept { return def_.mu0; }
  const Table& rewards() const noexcept { return def_.rewards; }
  const std::vector<Index>& terminals() const noexcept { return def_.terminals; }
  bool is_terminal(Index s) const { return terminal_mask_[static_cast<std::size_t>(s)]; }

  std::span<const Successor> successors(Index s, Index a) const {
    return def_.transitions[static_cast<std::size_t>(s * def_.n_actions + a)];
  }

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& transition_matrix() const noexcept {
    return transition_matrix_;
  }

  const MdpDefinition& definition() const noexcept { return def_; }

  /// Same dynamics, different reward table.
  Mdp with_rewards(const Table& rewards) const;

 private:
  MdpDefinition def_;
  std::vector<bool> terminal_mask_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> transition_matrix_;
};

/// E[v(S') | s, a] for every pair, as an S x A table (not discounted).
Table expected_next(const Mdp& mdp, const StateVector& v);

/// Zeroes the rows of terminal states in place.
void zero_terminal_rows(const Mdp& mdp, Table& table);

}  // namespace radv
