#include "radv/objectworld.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "radv/error.hpp"
#include "radv/io.hpp"

namespace radv {

namespace {

Index neighbor(const ObjectWorldLayout& layout, Index cell, Move move) {
  Index row = cell / layout.width;
  Index col = cell % layout.width;
  switch (move) {
    case Move::stay: break;
    case Move::up: --row; break;
    case Move::down: ++row; break;
    case Move::left: --col; break;
    case Move::right: ++col; break;
  }
  if (row < 0 || row >= layout.height || col < 0 || col >= layout.width) return cell;
  return row * layout.width + col;
}

std::pair<Move, Move> perpendicular(Move move) {
  if (move == Move::up || move == Move::down) return {Move::left, Move::right};
  return {Move::up, Move::down};
}

void add_successor(std::vector<Successor>& row, Index state, double p) {
  if (p == 0.0) return;
  for (auto& succ : row) {
    if (succ.state == state) {
      succ.probability += p;
      return;
    }
  }
  row.push_back({state, p});
}

// Runs task(i) for i in [0, n) on a few threads; results land by index so
// the outcome does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t n, unsigned threads, Task&& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Solver outcomes that describe one experiment instance rather than a bug
// in the inputs.
bool recordable(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::no_valid_solution:
    case ErrorKind::not_achievable:
    case ErrorKind::nonconvergent:
    case ErrorKind::q_magnitude:
      return true;
    default:
      return false;
  }
}

}  // namespace

ObjectWorldLayout resolve_layout(const ObjectWorldSpec& spec) {
  if (spec.width < 1 || spec.height < 1 || spec.width * spec.height < 2) {
    throw Error(ErrorKind::invalid_input, "object world needs width * height >= 2");
  }
  if (!(spec.slip >= 0.0 && spec.slip < 1.0)) throw Error(ErrorKind::invalid_input, "slip must lie in [0, 1)");
  const Index cells = spec.width * spec.height;

  ObjectWorldLayout layout;
  layout.width = spec.width;
  layout.height = spec.height;
  layout.terminal = cells;
  layout.destination = spec.destination.value_or(cells - 1);
  if (layout.destination < 0 || layout.destination >= cells) {
    throw Error(ErrorKind::invalid_input, "destination cell out of range");
  }

  if (!spec.objects.empty()) {
    layout.objects = spec.objects;
  } else {
    std::vector<Index> free_cells;
    for (Index c = 0; c < cells; ++c) {
      if (c != layout.destination) free_cells.push_back(c);
    }
    Index wanted = 0;
    for (const auto& [color, count] : spec.object_counts) {
      if (count < 0) throw Error(ErrorKind::invalid_input, "negative object count for " + color);
      wanted += count;
    }
    if (wanted > static_cast<Index>(free_cells.size())) {
      throw Error(ErrorKind::invalid_input, "more objects than free cells");
    }
    Rng rng(spec.seed);
    for (std::size_t i = free_cells.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(static_cast<Index>(i + 1)));
      std::swap(free_cells[i], free_cells[j]);
    }
    std::size_t next = 0;
    for (const auto& [color, count] : spec.object_counts) {
      for (Index k = 0; k < count; ++k) layout.objects.push_back({free_cells[next++], color});
    }
  }

  std::set<Index> seen;
  for (const auto& object : layout.objects) {
    if (object.cell < 0 || object.cell >= cells) throw Error(ErrorKind::invalid_input, "object cell out of range");
    if (object.cell == layout.destination) throw Error(ErrorKind::invalid_input, "object placed on the destination");
    if (!seen.insert(object.cell).second) {
      throw Error(ErrorKind::invalid_input, "two objects share cell " + std::to_string(object.cell));
    }
    if (!spec.color_rewards.contains(object.color)) {
      throw Error(ErrorKind::invalid_input, "no reward for color " + object.color);
    }
  }
  return layout;
}

Mdp build_object_world(const ObjectWorldSpec& spec) {
  const ObjectWorldLayout layout = resolve_layout(spec);
  const Index cells = layout.width * layout.height;
  const Index n = cells + 1;

  StateVector entry_reward = StateVector::Zero(n);
  for (const auto& object : layout.objects) entry_reward(object.cell) = spec.color_rewards.at(object.color);
  entry_reward(layout.destination) = spec.destination_reward;

  MdpDefinition def;
  def.n_states = n;
  def.n_actions = kObjectWorldActions;
  def.gamma = spec.gamma;
  def.terminals = {layout.terminal};
  def.transitions.resize(static_cast<std::size_t>(n * kObjectWorldActions));
  def.rewards = Table::Zero(n, kObjectWorldActions);
  def.mu0 = StateVector::Zero(n);
  for (Index c = 0; c < cells; ++c) {
    if (c != layout.destination) def.mu0(c) = 1.0 / static_cast<double>(cells - 1);
  }

  for (Index c = 0; c < n; ++c) {
    for (Index a = 0; a < kObjectWorldActions; ++a) {
      auto& row = def.transitions[static_cast<std::size_t>(c * kObjectWorldActions + a)];
      if (c == layout.terminal) {
        row.push_back({c, 1.0});
        continue;
      }
      if (c == layout.destination) {
        row.push_back({layout.terminal, 1.0});
        continue;
      }
      const auto move = static_cast<Move>(a);
      if (move == Move::stay) {
        row.push_back({c, 1.0});
      } else {
        const auto [side_a, side_b] = perpendicular(move);
        add_successor(row, neighbor(layout, c, move), 1.0 - spec.slip);
        add_successor(row, neighbor(layout, c, side_a), spec.slip / 2.0);
        add_successor(row, neighbor(layout, c, side_b), spec.slip / 2.0);
      }
      double r = spec.step_reward;
      for (const auto& succ : row) {
        if (succ.state != c) r += succ.probability * entry_reward(succ.state);
      }
      def.rewards(c, a) = r;
    }
  }
  return Mdp(std::move(def));
}

FeatureModel default_object_world_features() {
  Eigen::VectorXd omega(2), phi(2), c_min(2), c_max(2);
  omega << 1.0, 1.0;
  phi << 1.0, 2.0;
  c_min << -4.0, 0.0;
  c_max << 7.0, 100.0;
  return FeatureModel(omega, phi, c_min, c_max);
}

StochasticPolicy perturbed_target(const Mdp& world, double scale, std::uint64_t seed, const MceOptions& mce) {
  Rng rng(seed);
  Table rewards = world.rewards();
  for (Index s = 0; s < world.n_states(); ++s) {
    if (world.is_terminal(s)) continue;
    for (Index a = 0; a < world.n_actions(); ++a) rewards(s, a) += scale * (2.0 * rng.uniform() - 1.0);
  }
  return mce_policy(world.with_rewards(rewards), mce).policy;
}

std::vector<AccuracyRow> run_accuracy_experiment(const ObjectWorldSpec& spec, const StochasticPolicy& target,
                                                 const FeatureModel& features, std::span<const long> counts,
                                                 std::span<const std::uint64_t> seeds,
                                                 const ExperimentOptions& options) {
  const Mdp world = build_object_world(spec);
  const StochasticPolicy behavior = mce_policy(world, options.mce).policy;
  const MinCostSolution exact = min_reward_solution(world, target, features, options.mincost);
  const KnownModel known = KnownModel::of(world);

  std::vector<AccuracyRow> rows(counts.size() * seeds.size());
  parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    const long count = counts[i / seeds.size()];
    const std::uint64_t seed = seeds[i % seeds.size()];
    const auto trajectories = simulate(world, behavior, count, seed, options.max_len);
    AccuracyRow row{count, seed, 0.0, 0.0, "ok"};
    try {
      const MinCostSolution estimated =
          sample_based_min_reward(trajectories, known, target, features, options.fallback, options.mincost);
      row.sup_err = advancement_error(estimated, exact);
      row.mae = advancement_mean_abs_error(estimated, exact);
    } catch (const Error& e) {
      if (!recordable(e)) throw;
      row.sup_err = row.mae = std::numeric_limits<double>::infinity();
      row.status = std::string(to_string(e.kind()));
    }
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<CostCurveRow> run_cost_curve_experiment(const ObjectWorldSpec& spec, const StochasticPolicy& target,
                                                    const FeatureModel& features,
                                                    std::span<const double> r_min_values,
                                                    const ExperimentOptions& options) {
  const Mdp world = build_object_world(spec);
  for (double r : r_min_values) {
    if (r < features.r_min() - kAchievableSlack || r > features.r_max() + kAchievableSlack) {
      std::ostringstream msg;
      msg << "lower bound " << r << " outside the feature range [" << features.r_min() << ", " << features.r_max()
          << "]";
      throw Error(ErrorKind::invalid_input, msg.str());
    }
  }

  std::vector<CostCurveRow> rows(r_min_values.size());
  parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    CostCurveRow row;
    row.r_min = r_min_values[i];
    MinCostOptions opts = options.mincost;
    opts.bounds = RewardBounds::uniform(world.n_states(), world.n_actions(), row.r_min, features.r_max());
    try {
      const MinCostSolution solution = min_reward_solution(world, target, features, opts);
      row.objective = solution.objective;
      row.total_cost = solution.total_cost;
    } catch (const Error& e) {
      if (!recordable(e)) throw;
      row.objective = std::numeric_limits<double>::quiet_NaN();
      row.total_cost = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string(to_string(e.kind()));
    }
    rows[i] = std::move(row);
  });
  return rows;
}

std::string accuracy_csv(std::span<const AccuracyRow> rows) {
  std::string out = "count,seed,sup_err,mae,status\n";
  for (const auto& row : rows) {
    out += std::to_string(row.count) + "," + std::to_string(row.seed) + "," + format_number(row.sup_err) + "," +
           format_number(row.mae) + "," + row.status + "\n";
  }
  return out;
}

std::string cost_curve_csv(std::span<const CostCurveRow> rows) {
  std::string out = "r_min,objective,total_cost,status\n";
  for (const auto& row : rows) {
    out += format_number(row.r_min) + "," + format_number(row.objective) + "," + format_number(row.total_cost) +
           "," + row.status + "\n";
  }
  return out;
}

}  // namespace radv
