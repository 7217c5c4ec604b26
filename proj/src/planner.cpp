#include "abplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_set>
#include <utility>

namespace abplan {

std::string_view to_string(StageTag tag) {
  switch (tag) {
    case StageTag::Full: return "full";
    case StageTag::SingleShot: return "single-shot";
    case StageTag::SingleShotNoBlocks: return "single-shot-no-blocks";
    case StageTag::DefaultAction: return "default-action";
  }
  return "?";
}

StageTag stage_from_string(std::string_view s) {
  if (s == "full") return StageTag::Full;
  if (s == "single-shot") return StageTag::SingleShot;
  if (s == "single-shot-no-blocks") return StageTag::SingleShotNoBlocks;
  if (s == "default-action") return StageTag::DefaultAction;
  throw InputError("unknown stage tag '" + std::string(s) + "'");
}

std::string_view to_string(SolveOutcome o) {
  switch (o) {
    case SolveOutcome::Found: return "found";
    case SolveOutcome::FrontierExhausted: return "frontier-exhausted";
    case SolveOutcome::HorizonExhausted: return "horizon-exhausted";
    case SolveOutcome::Timeout: return "timeout";
  }
  return "?";
}

void SearchConfig::validate() const {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(timeout_seconds > 0)) throw ConfigError("timeout must be positive");
  if (!(position_grid > 0) || !(velocity_grid > 0) || !(angle_grid > 0)) {
    throw ConfigError("quantization grids must be positive");
  }
}

size_t QuantKeyHash::operator()(const QuantKey& k) const {
  // FNV-1a over the words
  uint64_t h = 1469598103934665603ull;
  for (int64_t w : k.words) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<uint64_t>(w >> (i * 8)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return static_cast<size_t>(h);
}

QuantKey quantize(const State& state, const SearchConfig& config) {
  QuantKey key;
  key.words.reserve(state.values.size());
  const FluentSchema& schema = *state.schema;
  // time is deliberately excluded: the grounded dynamics never read it, so
  // states equal in every fluent have identical futures
  for (size_t i = 0; i < schema.size(); ++i) {
    const FluentDecl& d = schema.decl(i);
    const double v = state.values[i];
    if (d.kind == ValueKind::Boolean) {
      key.words.push_back(v != 0.0 ? 1 : 0);
      continue;
    }
    double grid;
    switch (d.unit) {
      case Unit::Meters: grid = config.position_grid; break;
      case Unit::MetersPerSecond: grid = config.velocity_grid; break;
      case Unit::Degrees: grid = config.angle_grid; break;
      case Unit::Count: grid = 1.0; break;  // counts are integers, snapped exactly
      case Unit::Dimensionless: grid = config.position_grid; break;
      default: grid = config.position_grid; break;
    }
    key.words.push_back(std::llround(v / grid));
  }
  return key;
}

namespace {

struct SearchEntry {
  int depth = 0;
  uint64_t seq = 0;
  bool is_goal = false;
  State state;
  std::vector<PlanStep> steps;
};

struct EntryLater {
  bool operator()(const SearchEntry& a, const SearchEntry& b) const {
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.seq > b.seq;
  }
};

}  // namespace

ReplayOutcome replay_plan(const HybridProblem& problem, const std::vector<PlanStep>& steps) {
  for (size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].tick <= steps[i - 1].tick) throw ModelError("plan ticks must strictly increase");
  }
  State s = problem.initial;
  if (problem.goal.eval_boolean(s)) return {std::move(s), true, 0};
  size_t next = 0;
  for (int t = 0; t < problem.horizon; ++t) {
    std::optional<std::string> act;
    if (next < steps.size() && steps[next].tick == t) {
      act = steps[next].action;
      ++next;
    }
    s = tick(std::move(s), problem, act).state;
    if (problem.goal.eval_boolean(s)) return {std::move(s), true, t + 1};
  }
  return {std::move(s), false, problem.horizon};
}

SolveResult solve(const HybridProblem& problem, const SearchConfig& config) {
  config.validate();
  if (config.dt != problem.dt) {
    throw ConfigError("search dt " + format_number(config.dt) + " does not match problem dt " +
                      format_number(problem.dt));
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveResult res;
  auto done = [&](SolveOutcome o, std::optional<Plan> plan) {
    res.outcome = o;
    res.elapsed_seconds = elapsed();
    if (plan) plan->planning_seconds = res.elapsed_seconds;
    res.plan = std::move(plan);
    return res;
  };

  if (problem.goal.eval_boolean(problem.initial)) {
    return done(SolveOutcome::Found, Plan{{}, StageTag::Full, 0});
  }

  std::priority_queue<SearchEntry, std::vector<SearchEntry>, EntryLater> queue;
  std::unordered_set<QuantKey, QuantKeyHash> seen;
  uint64_t seq = 0;
  bool truncated = false;
  bool timed_out = false;

  seen.insert(quantize(problem.initial, config));
  queue.push({0, seq++, false, problem.initial, {}});

  auto any_applicable = [&](const State& s) {
    return std::any_of(problem.actions.begin(), problem.actions.end(),
                       [&](const ActionDef& a) { return a.precondition.eval_boolean(s); });
  };
  // Post-tick states are event-quiescent, and nothing reads the clock, so a
  // state with no applicable action and no active process can never change
  // again: a dead end, not a horizon truncation.
  auto inert = [&](const State& s) {
    return !any_applicable(s) &&
           std::none_of(problem.processes.begin(), problem.processes.end(),
                        [&](const ProcessDef& p) { return p.condition.eval_boolean(s); });
  };

  // Enqueue a successor reached at `depth`. Only decision points (states with
  // an applicable action) enter the duplicate table; the deterministic
  // corridors between them cannot loop, since time only moves forward and
  // every flight terminates in expiry. With macro_suffix the corridor is
  // walked eagerly and re-enters the queue at its true depth, so outcomes
  // match step-by-step search.
  auto push_successor = [&](int depth, State s, std::vector<PlanStep> steps) {
    if (problem.goal.eval_boolean(s)) {
      queue.push({depth, seq++, true, State{}, std::move(steps)});
      return;
    }
    if (inert(s)) return;  // dead end
    if (!any_applicable(s)) {
      if (!config.macro_suffix) {
        queue.push({depth, seq++, false, std::move(s), std::move(steps)});
        return;
      }
      while (true) {
        if (depth >= config.horizon) {
          truncated = true;
          return;
        }
        if (elapsed() >= config.timeout_seconds) {
          timed_out = true;
          return;
        }
        TickResult tr = tick(std::move(s), problem, std::nullopt);
        s = std::move(tr.state);
        ++depth;
        if (problem.goal.eval_boolean(s)) {
          queue.push({depth, seq++, true, State{}, std::move(steps)});
          return;
        }
        if (inert(s)) return;  // dead end
        if (any_applicable(s)) break;
      }
    }
    if (!seen.insert(quantize(s, config)).second) return;
    queue.push({depth, seq++, false, std::move(s), std::move(steps)});
  };

  while (!queue.empty()) {
    if (timed_out || elapsed() >= config.timeout_seconds) {
      return done(SolveOutcome::Timeout, std::nullopt);
    }
    SearchEntry cur = queue.top();
    queue.pop();

    if (cur.is_goal) {
      // soundness gate: the plan must replay to the goal in the exact model
      ReplayOutcome replay = replay_plan(problem, cur.steps);
      if (!replay.goal_reached) {
        throw ModelError("planner produced a plan that fails replay validation");
      }
      return done(SolveOutcome::Found, Plan{std::move(cur.steps), StageTag::Full, 0});
    }

    ++res.expanded;
    if (cur.depth >= config.horizon) {
      truncated = true;
      continue;
    }

    for (const ActionDef& a : problem.actions) {
      if (!a.precondition.eval_boolean(cur.state)) continue;
      TickResult tr = tick(cur.state, problem, a.name);
      std::vector<PlanStep> steps = cur.steps;
      steps.push_back({cur.depth, a.name});
      push_successor(cur.depth + 1, std::move(tr.state), std::move(steps));
      if (timed_out) return done(SolveOutcome::Timeout, std::nullopt);
    }
    TickResult tw = tick(std::move(cur.state), problem, std::nullopt);
    push_successor(cur.depth + 1, std::move(tw.state), cur.steps);
    if (timed_out) return done(SolveOutcome::Timeout, std::nullopt);
  }

  return done(truncated ? SolveOutcome::HorizonExhausted : SolveOutcome::FrontierExhausted,
              std::nullopt);
}

int default_release_tick(const Physics& physics, double dt, double angle_deg) {
  const double per_tick = physics.angle_rate * dt;
  const int saturation = static_cast<int>(std::ceil(physics.max_angle / per_tick));
  const int k = static_cast<int>(std::llround(angle_deg / per_tick));
  return std::clamp(k, 0, saturation);
}

ShotDecision cascade(const Level& level, const CascadeConfig& config, const MaterialTable& table) {
  level.validate();

  HybridProblem full = translate(level, table, config.search.dt, config.search.horizon);
  HybridProblem stage1 = single_shot(full);

  ShotDecision decision;

  SearchConfig c1 = config.search;
  c1.timeout_seconds = config.stage1_timeout;
  SolveResult r1 = solve(stage1, c1);
  decision.stage1_outcome = r1.outcome;
  decision.planning_seconds = r1.elapsed_seconds;
  if (r1.plan) {
    decision.stage = StageTag::SingleShot;
    decision.steps = std::move(r1.plan->steps);
    return decision;
  }

  HybridProblem stage2 = strip_blocks(stage1);
  SearchConfig c2 = config.search;
  c2.timeout_seconds = config.stage2_timeout;
  SolveResult r2 = solve(stage2, c2);
  decision.stage2_outcome = r2.outcome;
  decision.planning_seconds += r2.elapsed_seconds;
  if (r2.plan) {
    decision.stage = StageTag::SingleShotNoBlocks;
    decision.steps = std::move(r2.plan->steps);
    return decision;
  }

  decision.stage = StageTag::DefaultAction;
  const int active = static_cast<int>(std::llround(full.initial.numeric("active_bird")));
  decision.steps = {
      {default_release_tick(level.physics, config.search.dt, config.default_angle),
       pa_twang_name(active)}};
  return decision;
}

}  // namespace abplan
