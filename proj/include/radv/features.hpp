#pragma once

#include <vector>

#include "radv/types.hpp"

namespace radv {

/// Additional rewards are paid through N features: reward omega_i and cost
/// phi_i per unit of feature i, with the spend phi_i * dF_i boxed in
/// [c_min_i, c_max_i].
class FeatureModel {
 public:
  /// Throws Error(invalid_input) unless all vectors have the same positive
  /// length, every omega_i / phi_i is finite and > 0, and c_min <= c_max.
  FeatureModel(Eigen::VectorXd omega, Eigen::VectorXd phi, Eigen::VectorXd c_min, Eigen::VectorXd c_max);

  Index n_features() const noexcept { return omega_.size(); }
  const Eigen::VectorXd& omega() const noexcept { return omega_; }
  const Eigen::VectorXd& phi() const noexcept { return phi_; }
  const Eigen::VectorXd& c_min() const noexcept { return c_min_; }
  const Eigen::VectorXd& c_max() const noexcept { return c_max_; }

  /// Reward per unit cost, omega_i / phi_i.
  Eigen::VectorXd efficiency() const { return omega_.cwiseQuotient(phi_); }

  /// Smallest and largest achievable additional reward.
  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }

  /// Feature indices by descending efficiency, ties by lower index.
  const std::vector<Index>& greedy_order() const noexcept { return order_; }

 private:
  Eigen::VectorXd omega_, phi_, c_min_, c_max_;
  double r_min_ = 0.0;
  double r_max_ = 0.0;
  std::vector<Index> order_;
};

/// Slack allowed when deciding that a reward lies inside [r_min, r_max].
inline constexpr double kAchievableSlack = 1e-9;

bool is_achievable(double delta_r, const FeatureModel& features);

/// Cheapest feature vector paying exactly delta_r: every feature starts at its
/// minimum spend, then the reward still missing above r_min is bought from
/// the most cost-efficient features first, each up to its remaining
/// capacity (omega_i / phi_i)(c_max_i - c_min_i).
///
/// Throws Error(not_achievable) outside [r_min, r_max] (beyond the slack).
Eigen::VectorXd assign_features(double delta_r, const FeatureModel& features);

/// Cost phi . assign_features(delta_r).
double min_cost_of_reward(double delta_r, const FeatureModel& features);

}  // namespace radv
