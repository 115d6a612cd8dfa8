#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radv/types.hpp"

namespace radv {

enum class ErrorKind {
  invalid_input,
  nonconvergent,
  q_magnitude,
  entropy_domain,
  target_support,
  no_valid_solution,
  not_achievable,
  coverage,
  no_data,
  shape_mismatch,
};

/// Stable lower-case identifier, e.g. "no-valid-solution".
std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library. Solver failures that
/// concern particular states or state-action pairs carry them as payload.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  Error(ErrorKind kind, const std::string& message, std::vector<Index> states,
        std::vector<std::pair<Index, Index>> pairs = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<Index>& states() const noexcept { return states_; }
  const std::vector<std::pair<Index, Index>>& pairs() const noexcept { return pairs_; }

 private:
  ErrorKind kind_;
  std::vector<Index> states_;
  std::vector<std::pair<Index, Index>> pairs_;
};

}  // namespace radv
