#include "radv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "radv/error.hpp"

namespace radv {

namespace {

[[noreturn]] void fail(std::string_view what, const std::string& detail) {
  throw Error(ErrorKind::invalid_input, std::string(what) + ": " + detail);
}

// nlohmann reports schema problems (wrong type, missing key) with its own
// exceptions; they all become input errors here.
template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(what, e.what());
  }
}

const Json& field(const Json& doc, const char* key, std::string_view what) {
  if (!doc.is_object()) fail(what, "expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(what, std::string("missing \"") + key + "\"");
  return *it;
}

Index index_value(const Json& v, std::string_view what) {
  if (!v.is_number_integer()) fail(what, "expected an integer index, got " + v.dump());
  return v.get<Index>();
}

double number_value(const Json& v, std::string_view what) {
  if (!v.is_number()) fail(what, "expected a number, got " + v.dump());
  return v.get<double>();
}

Eigen::VectorXd vector_value(const Json& v, std::string_view what) {
  if (!v.is_array()) fail(what, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = number_value(v[i], what);
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const Json& entry(const Json& row, std::size_t width, std::string_view what) {
  if (!row.is_array() || row.size() != width) {
    fail(what, "expected a " + std::to_string(width) + "-element array, got " + row.dump());
  }
  return row;
}

void check_pair(Index s, Index a, Index n_states, Index n_actions, std::string_view what) {
  if (s < 0 || s >= n_states || a < 0 || a >= n_actions) {
    fail(what, "pair (" + std::to_string(s) + "," + std::to_string(a) + ") out of range");
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(what, std::string("parse error: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::filesystem::path& path) { return parse_json(read_text_file(path), path.string()); }

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::invalid_input, "failed writing " + path.string());
}

std::string dump(const Json& doc) { return doc.dump() + "\n"; }

Mdp mdp_from_json(const Json& doc) {
  constexpr std::string_view what = "mdp";
  return guarded(what, [&] {
    MdpDefinition def;
    def.n_states = index_value(field(doc, "n_states", what), what);
    def.n_actions = index_value(field(doc, "n_actions", what), what);
    if (def.n_states <= 0 || def.n_actions <= 0) fail(what, "n_states and n_actions must be positive");
    def.gamma = number_value(field(doc, "gamma", what), what);
    def.mu0 = vector_value(field(doc, "mu0", what), what);
    if (doc.contains("terminals")) {
      for (const auto& t : doc.at("terminals")) def.terminals.push_back(index_value(t, what));
    }
    def.transitions.resize(static_cast<std::size_t>(def.n_states * def.n_actions));
    for (const auto& row : field(doc, "transitions", what)) {
      entry(row, 4, what);
      const Index s = index_value(row[0], what);
      const Index a = index_value(row[1], what);
      check_pair(s, a, def.n_states, def.n_actions, what);
      def.transitions[static_cast<std::size_t>(s * def.n_actions + a)].push_back(
          {index_value(row[2], what), number_value(row[3], what)});
    }
    def.rewards = Table::Zero(def.n_states, def.n_actions);
    if (doc.contains("rewards")) {
      for (const auto& row : doc.at("rewards")) {
        entry(row, 3, what);
        const Index s = index_value(row[0], what);
        const Index a = index_value(row[1], what);
        check_pair(s, a, def.n_states, def.n_actions, what);
        def.rewards(s, a) = number_value(row[2], what);
      }
    }
    complete_terminal_rows(def);
    return Mdp(std::move(def));
  });
}

Json mdp_to_json(const Mdp& mdp) {
  Json transitions = Json::array();
  for (Index s = 0; s < mdp.n_states(); ++s) {
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      for (const auto& succ : mdp.successors(s, a)) transitions.push_back({s, a, succ.state, succ.probability});
    }
  }
  return Json{{"n_states", mdp.n_states()},
              {"n_actions", mdp.n_actions()},
              {"gamma", mdp.gamma()},
              {"mu0", vector_json(mdp.mu0())},
              {"terminals", mdp.terminals()},
              {"transitions", std::move(transitions)},
              {"rewards", table_to_json(mdp.rewards())}};
}

Table table_from_json(const Json& doc, Index n_states, Index n_actions, std::string_view what) {
  return guarded(what, [&] {
    if (!doc.is_array()) fail(what, "expected an array of [s,a,v] entries");
    Table out = Table::Zero(n_states, n_actions);
    for (const auto& row : doc) {
      entry(row, 3, what);
      const Index s = index_value(row[0], what);
      const Index a = index_value(row[1], what);
      check_pair(s, a, n_states, n_actions, what);
      out(s, a) = number_value(row[2], what);
    }
    return out;
  });
}

Json table_to_json(const Table& table) {
  Json out = Json::array();
  for (Index s = 0; s < table.rows(); ++s) {
    for (Index a = 0; a < table.cols(); ++a) out.push_back({s, a, table(s, a)});
  }
  return out;
}

StochasticPolicy policy_from_json(const Json& doc, Index n_states, Index n_actions) {
  constexpr std::string_view what = "policy";
  return StochasticPolicy(table_from_json(field(doc, "probs", what), n_states, n_actions, what));
}

Json policy_to_json(const StochasticPolicy& policy) { return Json{{"probs", table_to_json(policy.probs())}}; }

StateVector beta_from_json(const Json& doc) {
  constexpr std::string_view what = "beta";
  return guarded(what, [&] { return vector_value(doc.is_object() ? field(doc, "beta", what) : doc, what); });
}

std::vector<Trajectory> parse_trajectories(std::istream& in) {
  std::vector<Trajectory> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string what = "trajectories line " + std::to_string(line_no);
    const Json doc = parse_json(line, what);
    out.push_back(guarded(what, [&] {
      if (!doc.is_array()) fail(what, "expected an array of steps");
      Trajectory traj;
      for (const auto& step : doc) {
        if (!step.is_array() || (step.size() != 2 && step.size() != 3)) {
          fail(what, "expected [s,a] or [s,a,r], got " + step.dump());
        }
        Step st{index_value(step[0], what), index_value(step[1], what), std::nullopt};
        if (step.size() == 3) st.reward = number_value(step[2], what);
        traj.steps.push_back(st);
      }
      return traj;
    }));
  }
  return out;
}

std::string trajectories_to_jsonl(std::span<const Trajectory> trajectories) {
  std::string out;
  for (const auto& traj : trajectories) {
    Json line = Json::array();
    for (const auto& step : traj.steps) {
      if (step.reward) {
        line.push_back({step.state, step.action, *step.reward});
      } else {
        line.push_back({step.state, step.action});
      }
    }
    out += line.dump() + "\n";
  }
  return out;
}

Json advancement_to_json(const AdvancementSolution& solution) {
  return Json{{"beta", vector_json(solution.beta)},
              {"delta_q", table_to_json(solution.delta_q)},
              {"delta_r", table_to_json(solution.delta_r)}};
}

Json verification_to_json(const VerificationReport& report) {
  return Json{{"max_deviation", report.max_deviation},
              {"pass", report.pass},
              {"target_fixed_point_residual", report.target_fixed_point_residual},
              {"iterations", report.iterations}};
}

std::optional<RewardBounds> FeatureFile::bounds(Index n_states, Index n_actions) const {
  if (!r_min && !r_max) return std::nullopt;
  return RewardBounds::uniform(n_states, n_actions, r_min.value_or(model.r_min()), r_max.value_or(model.r_max()));
}

FeatureFile features_from_json(const Json& doc) {
  constexpr std::string_view what = "features";
  return guarded(what, [&] {
    FeatureFile out{FeatureModel(vector_value(field(doc, "omega", what), what),
                                 vector_value(field(doc, "phi", what), what),
                                 vector_value(field(doc, "c_min", what), what),
                                 vector_value(field(doc, "c_max", what), what)),
                    std::nullopt, std::nullopt};
    if (doc.contains("r_min")) out.r_min = number_value(doc.at("r_min"), what);
    if (doc.contains("r_max")) out.r_max = number_value(doc.at("r_max"), what);
    return out;
  });
}

Json features_to_json(const FeatureModel& features) {
  return Json{{"omega", vector_json(features.omega())},
              {"phi", vector_json(features.phi())},
              {"c_min", vector_json(features.c_min())},
              {"c_max", vector_json(features.c_max())}};
}

Json mincost_to_json(const MinCostSolution& solution) {
  Json out = advancement_to_json(solution.advancement);
  out["delta_r_star"] = table_to_json(solution.delta_r_star);
  out["beta_min"] = vector_json(solution.beta_min);
  out["beta_max"] = vector_json(solution.beta_max);
  out["k"] = table_to_json(solution.k);
  out["objective"] = solution.objective;
  Json assignments = Json::array();
  const Index n_actions = solution.delta_r_star.cols();
  for (std::size_t i = 0; i < solution.assignments.size(); ++i) {
    const auto& df = solution.assignments[i];
    if (df.size() == 0) continue;
    const auto flat = static_cast<Index>(i);
    assignments.push_back({flat / n_actions, flat % n_actions, vector_json(df)});
  }
  out["assignments"] = std::move(assignments);
  out["costs"] = table_to_json(solution.costs);
  out["total_cost"] = solution.total_cost;
  return out;
}

Json empirical_to_json(const EmpiricalModel& model) {
  Json transitions = Json::array();
  Json counts = Json::array();
  for (Index s = 0; s < model.n_states(); ++s) {
    for (Index a = 0; a < model.n_actions(); ++a) {
      if (!model.observed(s, a)) continue;
      for (const auto& succ : model.row(s, a)) transitions.push_back({s, a, succ.state, succ.probability});
      for (const auto& [next, n] : model.counts(s, a)) counts.push_back({s, a, next, n});
    }
  }
  Json unobserved = Json::array();
  for (const auto& [s, a] : model.unobserved()) unobserved.push_back({s, a});
  return Json{{"n_states", model.n_states()},
              {"n_actions", model.n_actions()},
              {"transitions", std::move(transitions)},
              {"counts", std::move(counts)},
              {"unobserved", std::move(unobserved)}};
}

ObjectWorldSpec objectworld_spec_from_json(const Json& doc) {
  constexpr std::string_view what = "object world spec";
  return guarded(what, [&] {
    if (!doc.is_object()) fail(what, "expected a JSON object");
    ObjectWorldSpec spec;
    if (doc.contains("width")) spec.width = index_value(doc.at("width"), what);
    if (doc.contains("height")) spec.height = index_value(doc.at("height"), what);
    if (doc.contains("objects")) {
      for (const auto& o : doc.at("objects")) {
        spec.objects.push_back({index_value(field(o, "cell", what), what), field(o, "color", what).get<std::string>()});
      }
    }
    if (doc.contains("object_counts")) {
      spec.object_counts.clear();
      for (const auto& [color, n] : doc.at("object_counts").items()) spec.object_counts[color] = index_value(n, what);
    }
    if (doc.contains("color_rewards")) {
      spec.color_rewards.clear();
      for (const auto& [color, r] : doc.at("color_rewards").items()) spec.color_rewards[color] = number_value(r, what);
    }
    if (doc.contains("destination") && !doc.at("destination").is_null()) {
      spec.destination = index_value(doc.at("destination"), what);
    }
    if (doc.contains("destination_reward")) spec.destination_reward = number_value(doc.at("destination_reward"), what);
    if (doc.contains("step_reward")) spec.step_reward = number_value(doc.at("step_reward"), what);
    if (doc.contains("slip")) spec.slip = number_value(doc.at("slip"), what);
    if (doc.contains("gamma")) spec.gamma = number_value(doc.at("gamma"), what);
    if (doc.contains("seed")) {
      const Json& seed = doc.at("seed");
      if (!seed.is_number_unsigned()) fail(what, "seed must be a non-negative integer");
      spec.seed = seed.get<std::uint64_t>();
    }
    return spec;
  });
}

Json objectworld_spec_to_json(const ObjectWorldSpec& spec) {
  Json objects = Json::array();
  for (const auto& o : spec.objects) objects.push_back({{"cell", o.cell}, {"color", o.color}});
  Json out{{"width", spec.width},
           {"height", spec.height},
           {"objects", std::move(objects)},
           {"object_counts", spec.object_counts},
           {"color_rewards", spec.color_rewards},
           {"destination_reward", spec.destination_reward},
           {"step_reward", spec.step_reward},
           {"slip", spec.slip},
           {"gamma", spec.gamma},
           {"seed", spec.seed}};
  out["destination"] = spec.destination ? Json(*spec.destination) : Json(nullptr);
  return out;
}

}  // namespace radv
