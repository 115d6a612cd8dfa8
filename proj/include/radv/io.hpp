#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "radv/advancement.hpp"
#include "radv/estimation.hpp"
#include "radv/mincost.hpp"
#include "radv/objectworld.hpp"

namespace radv {

using Json = nlohmann::json;

/// "%.17g", with nan / inf / -inf spelled out.
std::string format_number(double value);

/// Parse failures and schema violations throw Error(invalid_input).
Json parse_json(std::string_view text, std::string_view what);
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
/// Compact JSON followed by a newline.
std::string dump(const Json& doc);

/// {"n_states", "n_actions", "gamma", "mu0", "terminals",
///  "transitions": [[s,a,s',p],...], "rewards": [[s,a,r],...]}.
/// Missing reward entries are 0; terminal rows without transitions become
/// self-loops.
Mdp mdp_from_json(const Json& doc);
Json mdp_to_json(const Mdp& mdp);

/// {"probs": [[s,a,p],...]}; missing entries are 0.
StochasticPolicy policy_from_json(const Json& doc, Index n_states, Index n_actions);
Json policy_to_json(const StochasticPolicy& policy);

/// [[s,a,v],...] for every entry.
Json table_to_json(const Table& table);
Table table_from_json(const Json& doc, Index n_states, Index n_actions, std::string_view what);

/// A plain array or {"beta": [...]}.
StateVector beta_from_json(const Json& doc);

/// One JSON array per line, each element [s,a] or [s,a,r]. Blank lines are
/// skipped.
std::vector<Trajectory> parse_trajectories(std::istream& in);
std::string trajectories_to_jsonl(std::span<const Trajectory> trajectories);

Json advancement_to_json(const AdvancementSolution& solution);
Json verification_to_json(const VerificationReport& report);

/// Feature file: {"omega", "phi", "c_min", "c_max"} and optionally "r_min"
/// / "r_max", which narrow the bounds used by the min-reward stage.
struct FeatureFile {
  FeatureModel model;
  std::optional<double> r_min;
  std::optional<double> r_max;

  /// Bounds for MinCostOptions when either override is present.
  std::optional<RewardBounds> bounds(Index n_states, Index n_actions) const;
};
FeatureFile features_from_json(const Json& doc);
Json features_to_json(const FeatureModel& features);

Json mincost_to_json(const MinCostSolution& solution);

/// MDP-style document of the observed transitions (with raw counts) plus an
/// "unobserved" list of [s,a] pairs.
Json empirical_to_json(const EmpiricalModel& model);

ObjectWorldSpec objectworld_spec_from_json(const Json& doc);
Json objectworld_spec_to_json(const ObjectWorldSpec& spec);

}  // namespace radv
