#include "radv/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

FeatureModel::FeatureModel(Eigen::VectorXd omega, Eigen::VectorXd phi, Eigen::VectorXd c_min,
                           Eigen::VectorXd c_max)
    : omega_(std::move(omega)), phi_(std::move(phi)), c_min_(std::move(c_min)), c_max_(std::move(c_max)) {
  const Index n = omega_.size();
  if (n == 0) throw Error(ErrorKind::invalid_input, "feature model needs at least one feature");
  if (phi_.size() != n || c_min_.size() != n || c_max_.size() != n) {
    throw Error(ErrorKind::invalid_input, "omega, phi, c_min and c_max must have equal length");
  }
  for (Index i = 0; i < n; ++i) {
    const double ratio = omega_(i) / phi_(i);
    if (!std::isfinite(ratio) || !(ratio > 0.0)) {
      throw Error(ErrorKind::invalid_input, "feature " + std::to_string(i) + " needs omega/phi > 0");
    }
    if (!std::isfinite(c_min_(i)) || !std::isfinite(c_max_(i)) || c_min_(i) > c_max_(i)) {
      throw Error(ErrorKind::invalid_input, "feature " + std::to_string(i) + " needs finite c_min <= c_max");
    }
  }
  const Eigen::VectorXd eff = efficiency();
  r_min_ = eff.dot(c_min_);
  r_max_ = eff.dot(c_max_);

  order_.resize(static_cast<std::size_t>(n));
  std::iota(order_.begin(), order_.end(), Index{0});
  std::stable_sort(order_.begin(), order_.end(), [&eff](Index a, Index b) { return eff(a) > eff(b); });
}

bool is_achievable(double delta_r, const FeatureModel& features) {
  return delta_r >= features.r_min() - kAchievableSlack && delta_r <= features.r_max() + kAchievableSlack;
}

Eigen::VectorXd assign_features(double delta_r, const FeatureModel& features) {
  if (!is_achievable(delta_r, features)) {
    std::ostringstream msg;
    msg.precision(17);
    if (delta_r < features.r_min()) {
      msg << "reward " << delta_r << " is below r_min = " << features.r_min();
    } else {
      msg << "reward " << delta_r << " is above r_max = " << features.r_max();
    }
    throw Error(ErrorKind::not_achievable, msg.str());
  }
  const Eigen::VectorXd eff = features.efficiency();
  Eigen::VectorXd delta_f = features.c_min().cwiseQuotient(features.phi());

  double missing = std::clamp(delta_r, features.r_min(), features.r_max()) - features.r_min();
  for (Index i : features.greedy_order()) {
    if (missing <= 0.0) break;
    const double capacity = eff(i) * (features.c_max()(i) - features.c_min()(i));
    const double fill = std::min(missing, capacity);
    delta_f(i) += fill / features.omega()(i);
    missing -= fill;
  }
  return delta_f;
}

double min_cost_of_reward(double delta_r, const FeatureModel& features) {
  return features.phi().dot(assign_features(delta_r, features));
}

}  // namespace radv
