#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "radv/error.hpp"
#include "radv/io.hpp"

namespace radv::cli {

namespace {

struct Config {
  std::string mdp;
  std::string target;
  std::string beta;
  std::string features;
  std::string trajectories;
  std::string spec;
  std::string policy;
  std::string out;
  std::string empirical_out;
  /// Empty means the command's default (CSV for experiments, JSON otherwise).
  std::string format;

  double tol = 1e-10;
  long max_iters = 100000;
  double eps_floor = 1e-8;
  double verify_tol = 1e-6;
  std::uint64_t seed = 0;

  long count = 100;
  long max_len = 2000;
  std::string fallback = "uniform";

  std::string experiment;
  std::vector<long> counts{10, 50, 100, 500};
  std::vector<std::uint64_t> seeds;
  std::vector<double> r_min_values{-4.0, -3.5, -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0};
  std::string target_kind = "uniform";
  double target_scale = 0.1;
  std::uint64_t target_seed = 7;
  std::optional<double> slip;
  unsigned threads = 0;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
    case ErrorKind::shape_mismatch:
    case ErrorKind::no_data:
      return bad_input;
    case ErrorKind::nonconvergent:
    case ErrorKind::q_magnitude:
      return no_convergence;
    case ErrorKind::target_support:
    case ErrorKind::entropy_domain:
      return bad_support;
    case ErrorKind::no_valid_solution:
    case ErrorKind::not_achievable:
      return infeasible;
    case ErrorKind::coverage:
      return no_coverage;
  }
  return failure;
}

SolverOptions solver_options(const Config& c) { return SolverOptions{c.tol, c.max_iters}; }

MceOptions mce_options(const Config& c) {
  MceOptions opts;
  opts.tolerance = c.tol;
  opts.max_iters = c.max_iters;
  return opts;
}

void emit(const Config& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text_file(c.out, text);
  }
}

void require_json(const Config& c, std::string_view command) {
  if (!c.format.empty() && c.format != "json") {
    throw Error(ErrorKind::invalid_input, std::string(command) + " writes JSON only");
  }
}

Mdp load_mdp(const Config& c) { return mdp_from_json(read_json_file(c.mdp)); }

std::vector<Trajectory> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open " + path);
  return parse_trajectories(in);
}

CoverageFallback parse_fallback(const std::string& name) {
  if (name == "uniform") return CoverageFallback::uniform_successor;
  if (name == "reject") return CoverageFallback::reject;
  throw Error(ErrorKind::invalid_input, "unknown fallback " + name);
}

int cmd_solve(const Config& c, std::ostream& out) {
  const Mdp mdp = load_mdp(c);
  const MceResult result = mce_policy(mdp, mce_options(c));
  if (c.format == "csv") {
    std::string text = "s,a,probability,q\n";
    for (Index s = 0; s < mdp.n_states(); ++s) {
      for (Index a = 0; a < mdp.n_actions(); ++a) {
        text += std::to_string(s) + "," + std::to_string(a) + "," + format_number(result.policy(s, a)) + "," +
                format_number(result.q(s, a)) + "\n";
      }
    }
    emit(c, out, text);
  } else {
    Json doc = policy_to_json(result.policy);
    doc["q"] = table_to_json(result.q);
    doc["iterations"] = result.iterations;
    doc["residual"] = result.residual;
    emit(c, out, dump(doc));
  }
  return ok;
}

int cmd_advance(const Config& c, std::ostream& out, std::ostream& err) {
  require_json(c, "advance");
  const Mdp mdp = load_mdp(c);
  const StochasticPolicy target = policy_from_json(read_json_file(c.target), mdp.n_states(), mdp.n_actions());
  const StateVector beta =
      c.beta.empty() ? StateVector(StateVector::Zero(mdp.n_states())) : beta_from_json(read_json_file(c.beta));
  const AdvancementSolution solution = advancement_delta_q(mdp, target, beta, {c.eps_floor, solver_options(c)});
  VerifyOptions verify;
  verify.tolerance = c.verify_tol;
  verify.mce = mce_options(c);
  const VerificationReport report = verify_transformation(mdp, solution, verify);

  Json doc = advancement_to_json(solution);
  doc["verification"] = verification_to_json(report);
  emit(c, out, dump(doc));
  if (!report.pass) {
    err << "verification failed: max deviation " << format_number(report.max_deviation) << " > "
        << format_number(c.verify_tol) << "\n";
    return verification_failed;
  }
  return ok;
}

int cmd_mincost(const Config& c, std::ostream& out) {
  require_json(c, "mincost");
  const Mdp mdp = load_mdp(c);
  const StochasticPolicy target = policy_from_json(read_json_file(c.target), mdp.n_states(), mdp.n_actions());
  const FeatureFile features = features_from_json(read_json_file(c.features));
  MinCostOptions opts;
  opts.epsilon_floor = c.eps_floor;
  opts.solver = solver_options(c);
  opts.bounds = features.bounds(mdp.n_states(), mdp.n_actions());

  std::optional<MinCostSolution> solution;
  if (c.trajectories.empty()) {
    solution = min_reward_solution(mdp, target, features.model, opts);
  } else {
    const auto trajectories = load_trajectories(c.trajectories);
    if (!c.empirical_out.empty()) {
      const EmpiricalModel model = estimate_transitions(trajectories, mdp.n_states(), mdp.n_actions());
      write_text_file(c.empirical_out, dump(empirical_to_json(model)));
    }
    solution = sample_based_min_reward(trajectories, KnownModel::of(mdp), target, features.model,
                                       parse_fallback(c.fallback), opts);
  }
  emit(c, out, dump(mincost_to_json(*solution)));
  return ok;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  require_json(c, "simulate");
  const Mdp mdp = load_mdp(c);
  const StochasticPolicy policy = c.policy.empty()
                                      ? mce_policy(mdp, mce_options(c)).policy
                                      : policy_from_json(read_json_file(c.policy), mdp.n_states(), mdp.n_actions());
  if (c.count <= 0) throw Error(ErrorKind::invalid_input, "--count must be positive");
  const auto trajectories = simulate(mdp, policy, c.count, c.seed, c.max_len);
  emit(c, out, trajectories_to_jsonl(trajectories));
  return ok;
}

StochasticPolicy experiment_target(const Config& c, const Mdp& world) {
  if (!c.target.empty()) return policy_from_json(read_json_file(c.target), world.n_states(), world.n_actions());
  if (c.target_kind == "uniform") return StochasticPolicy::uniform(world.n_states(), world.n_actions());
  if (c.target_kind == "perturbed") return perturbed_target(world, c.target_scale, c.target_seed, mce_options(c));
  throw Error(ErrorKind::invalid_input, "unknown target kind " + c.target_kind);
}

int cmd_experiment(const Config& c, std::ostream& out) {
  if (c.experiment != "accuracy" && c.experiment != "cost-curve") {
    throw Error(ErrorKind::invalid_input, "unknown experiment " + c.experiment);
  }
  ObjectWorldSpec spec = c.spec.empty() ? ObjectWorldSpec{} : objectworld_spec_from_json(read_json_file(c.spec));
  if (c.slip) spec.slip = *c.slip;
  const Mdp world = build_object_world(spec);
  const StochasticPolicy target = experiment_target(c, world);
  const FeatureModel features =
      c.features.empty() ? default_object_world_features() : features_from_json(read_json_file(c.features)).model;

  ExperimentOptions opts;
  opts.max_len = c.max_len;
  opts.fallback = parse_fallback(c.fallback);
  opts.mincost.epsilon_floor = c.eps_floor;
  opts.mincost.solver = solver_options(c);
  opts.mce = mce_options(c);
  opts.threads = c.threads;

  if (c.experiment == "accuracy") {
    std::vector<std::uint64_t> seeds = c.seeds;
    if (seeds.empty()) {
      for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
    }
    const auto rows = run_accuracy_experiment(spec, target, features, c.counts, seeds, opts);
    if (c.format != "json") {
      emit(c, out, accuracy_csv(rows));
    } else {
      Json doc = Json::array();
      for (const auto& r : rows) {
        doc.push_back({{"count", r.count}, {"seed", r.seed}, {"status", r.status}});
        doc.back()["sup_err"] = r.status == "ok" ? Json(r.sup_err) : Json(nullptr);
        doc.back()["mae"] = r.status == "ok" ? Json(r.mae) : Json(nullptr);
      }
      emit(c, out, dump(doc));
    }
  } else {
    const auto rows = run_cost_curve_experiment(spec, target, features, c.r_min_values, opts);
    if (c.format != "json") {
      emit(c, out, cost_curve_csv(rows));
    } else {
      Json doc = Json::array();
      for (const auto& r : rows) {
        Json row{{"r_min", r.r_min}, {"status", r.status}};
        row["objective"] = r.feasible() ? Json(r.objective) : Json(nullptr);
        row["total_cost"] = r.feasible() ? Json(r.total_cost) : Json(nullptr);
        doc.push_back(std::move(row));
      }
      emit(c, out, dump(doc));
    }
  }
  return ok;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out, "Output file (default: stdout)");
  sub->add_option("--tol", c.tol, "Solver tolerance")->envname("RADV_TOLERANCE")->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", c.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Reward advancement solver"};
  app.name("radv");
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "MCE policy and Q table of an MDP");
  solve->add_option("--mdp", c.mdp, "MDP JSON")->required();
  add_common(solve, c);

  auto* advance = app.add_subcommand("advance", "Additional reward turning the MCE policy into a target");
  advance->add_option("--mdp", c.mdp, "MDP JSON")->required();
  advance->add_option("--target", c.target, "Target policy JSON")->required();
  advance->add_option("--beta", c.beta, "State potential JSON (default: zero)");
  advance->add_option("--eps-floor", c.eps_floor, "Smallest admissible target probability")
      ->check(CLI::Range(0.0, 1.0));
  advance->add_option("--verify-tol", c.verify_tol, "Verification tolerance")->check(CLI::PositiveNumber);
  add_common(advance, c);

  auto* mincost = app.add_subcommand("mincost", "Min-cost reward advancement with feature assignment");
  mincost->add_option("--mdp", c.mdp, "MDP JSON (rewards, mu0, gamma, terminals; transitions unless sampled)")
      ->required();
  mincost->add_option("--target", c.target, "Target policy JSON")->required();
  mincost->add_option("--features", c.features, "Feature model JSON")->required();
  mincost->add_option("--trajectories", c.trajectories, "Trajectory JSONL; estimates the transitions");
  mincost->add_option("--fallback", c.fallback, "Unobserved pairs: uniform or reject")
      ->check(CLI::IsMember({"uniform", "reject"}));
  mincost->add_option("--empirical-out", c.empirical_out, "Write the estimated transition model here");
  mincost->add_option("--eps-floor", c.eps_floor, "Smallest admissible target probability")
      ->check(CLI::Range(0.0, 1.0));
  add_common(mincost, c);

  auto* sim = app.add_subcommand("simulate", "Sample trajectories");
  sim->add_option("--mdp", c.mdp, "MDP JSON")->required();
  sim->add_option("--policy,--target", c.policy, "Policy JSON (default: the MCE policy)");
  sim->add_option("--count", c.count, "Number of trajectories");
  sim->add_option("--seed", c.seed, "Random seed");
  sim->add_option("--max-len", c.max_len, "Decisions per trajectory")->check(CLI::PositiveNumber);
  add_common(sim, c);

  auto* experiment = app.add_subcommand("experiment", "Object-world experiments");
  experiment->add_option("name", c.experiment, "accuracy or cost-curve")->required();
  experiment->add_option("--spec", c.spec, "Object world spec JSON (default: 5x9, 2 green, 3 red)");
  experiment->add_option("--target", c.target, "Target policy JSON for the world");
  experiment->add_option("--target-kind", c.target_kind, "uniform or perturbed");
  experiment->add_option("--target-scale", c.target_scale, "Reward noise of the perturbed target");
  experiment->add_option("--target-seed", c.target_seed, "Seed of the perturbed target");
  experiment->add_option("--features", c.features, "Feature model JSON");
  experiment->add_option("--counts", c.counts, "Trajectory counts")->delimiter(',');
  experiment->add_option("--seeds", c.seeds, "Simulation seeds (default 1..20)")->delimiter(',');
  experiment->add_option("--r-min-values", c.r_min_values, "Lower bounds for the cost curve")->delimiter(',');
  experiment->add_option("--slip", c.slip, "Overrides the spec slip")->check(CLI::Range(0.0, 1.0));
  experiment->add_option("--max-len", c.max_len, "Decisions per trajectory")->check(CLI::PositiveNumber);
  experiment->add_option("--fallback", c.fallback, "Unobserved pairs: uniform or reject")
      ->check(CLI::IsMember({"uniform", "reject"}));
  experiment->add_option("--eps-floor", c.eps_floor, "Smallest admissible target probability")
      ->check(CLI::Range(0.0, 1.0));
  experiment->add_option("--threads", c.threads, "Worker threads (0: hardware concurrency)");
  add_common(experiment, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return bad_input;
  }

  try {
    if (solve->parsed()) return cmd_solve(c, out);
    if (advance->parsed()) return cmd_advance(c, out, err);
    if (mincost->parsed()) return cmd_mincost(c, out);
    if (sim->parsed()) return cmd_simulate(c, out);
    return cmd_experiment(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!e.states().empty()) {
      err << "states:";
      for (Index s : e.states()) err << " s" << s;
      err << "\n";
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace radv::cli
