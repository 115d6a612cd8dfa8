#include "radv/error.hpp"

namespace radv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::nonconvergent: return "nonconvergent";
    case ErrorKind::q_magnitude: return "q-magnitude";
    case ErrorKind::entropy_domain: return "entropy-domain";
    case ErrorKind::target_support: return "target-support";
    case ErrorKind::no_valid_solution: return "no-valid-solution";
    case ErrorKind::not_achievable: return "not-achievable";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::no_data: return "no-data";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
  }
  return "unknown";
}

namespace {
std::string decorate(ErrorKind kind, const std::string& message) {
  return std::string(to_string(kind)) + ": " + message;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(decorate(kind, message)), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& message, std::vector<Index> states,
             std::vector<std::pair<Index, Index>> pairs)
    : std::runtime_error(decorate(kind, message)),
      kind_(kind),
      states_(std::move(states)),
      pairs_(std::move(pairs)) {}

}  // namespace radv
