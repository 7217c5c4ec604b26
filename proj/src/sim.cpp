#include "abplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace abplan {

std::string Trace::text() const {
  std::string out;
  for (const TickRecord& rec : ticks) append_trace_text(out, rec);
  out += "terminal pigs_dead=";
  out += all_pigs_dead ? "true" : "false";
  out += " birds_exhausted=";
  out += birds_exhausted ? "true" : "false";
  out += " horizon=";
  out += horizon_reached ? "true" : "false";
  out += "\n";
  return out;
}

ScoreReport make_score(int pigs, int blocks, int unused, const ScoreConfig& cfg) {
  ScoreReport r;
  r.pigs_killed = pigs;
  r.blocks_destroyed = blocks;
  r.unused_birds = unused;
  r.pig_score = pigs * cfg.pig_points;
  r.block_score = blocks * cfg.block_points;
  r.bird_score = unused * cfg.bird_points;
  r.total = r.pig_score + r.block_score + r.bird_score;
  return r;
}

namespace {

// cached fluent indices for the hot per-tick checks
struct StateView {
  int active_bird = -1;
  std::vector<int> pig_alive;
  std::vector<int> block_dead;
  std::vector<int> bird_released;
  std::vector<int> bird_expired;

  static StateView make(const FluentSchema& schema, const Level& level) {
    StateView v;
    v.active_bird = schema.index_of("active_bird");
    for (size_t j = 0; j < level.pigs.size(); ++j) {
      v.pig_alive.push_back(schema.index_of(fluents::pig(static_cast<int>(j), "alive")));
    }
    for (size_t k = 0; k < level.blocks.size(); ++k) {
      v.block_dead.push_back(schema.index_of(fluents::block(static_cast<int>(k), "dead")));
    }
    for (size_t i = 0; i < level.birds.size(); ++i) {
      v.bird_released.push_back(schema.index_of(fluents::bird(static_cast<int>(i), "released")));
      v.bird_expired.push_back(schema.index_of(fluents::bird(static_cast<int>(i), "expired")));
    }
    return v;
  }

  int pigs_alive(const State& s) const {
    int n = 0;
    for (int idx : pig_alive) n += s.values[idx] != 0.0;
    return n;
  }
  int blocks_dead(const State& s) const {
    int n = 0;
    for (int idx : block_dead) n += s.values[idx] != 0.0;
    return n;
  }
  int birds_released(const State& s) const {
    int n = 0;
    for (int idx : bird_released) n += s.values[idx] != 0.0;
    return n;
  }
  int active(const State& s) const {
    return static_cast<int>(std::llround(s.values[active_bird]));
  }
  bool expired(const State& s, int bird) const { return s.values[bird_expired[bird]] != 0.0; }
};

}  // namespace

ExecResult execute(const Level& level, const std::vector<ShotDecision>& shots,
                   const ExecOptions& options) {
  level.validate();
  if (shots.size() > level.birds.size()) {
    throw InputError("more shot decisions than birds");
  }

  HybridProblem problem =
      translate(level, options.materials, options.dt, options.horizon_per_bird);
  StateView view = StateView::make(*problem.schema, level);

  ExecResult res;
  State s = problem.initial;

  auto do_tick = [&](const std::optional<std::string>& decision) {
    TickResult tr = tick(s, problem, decision);
    if (options.record_trace) {
      res.trace.ticks.push_back(diff_tick(s, tr.state, decision, std::move(tr.fired)));
    }
    s = std::move(tr.state);
  };
  auto pigs_gone = [&] { return view.pigs_alive(s) == 0; };

  bool stuck = false;
  size_t launched = 0;
  for (size_t bi = 0; bi < shots.size() && !stuck && !pigs_gone(); ++bi) {
    if (view.active(s) != static_cast<int>(bi)) {
      // the previous episode never finished; cannot load this bird
      stuck = true;
      break;
    }
    if (shots[bi].steps.empty()) throw InputError("shot decision has no steps");
    int local = 0;
    int release_tick = 0;
    for (const PlanStep& step : shots[bi].steps) {
      if (step.tick < local) throw InputError("shot ticks must not decrease");
      if (!problem.find_action(step.action)) {
        throw InputError("shot references unknown action '" + step.action + "'");
      }
      while (local < step.tick && !pigs_gone()) {
        do_tick(std::nullopt);
        ++local;
      }
      if (pigs_gone()) break;
      do_tick(step.action);
      release_tick = local;
      ++local;
    }
    ++launched;
    const int episode_cap = std::min(options.horizon_per_bird, release_tick + kFlightTickCap);
    while (!pigs_gone() && view.active(s) == static_cast<int>(bi) &&
           !view.expired(s, static_cast<int>(bi))) {
      if (local >= episode_cap) {
        res.trace.horizon_reached = true;
        stuck = true;
        break;
      }
      do_tick(std::nullopt);
      ++local;
    }
  }

  res.trace.all_pigs_dead = pigs_gone();
  res.trace.birds_exhausted = !res.trace.all_pigs_dead && launched == level.birds.size();
  res.solved = res.trace.all_pigs_dead;

  const int killed = static_cast<int>(level.pigs.size()) - view.pigs_alive(s);
  const int destroyed = view.blocks_dead(s);
  const int unused =
      res.solved ? static_cast<int>(level.birds.size()) - view.birds_released(s) : 0;
  res.score = make_score(killed, destroyed, unused, options.score);
  res.final_state = std::move(s);
  return res;
}

Level rebuild_residual(const Level& level, const State& final_state) {
  Level out;
  out.slingshot = level.slingshot;
  out.physics = level.physics;
  for (size_t i = 0; i < level.birds.size(); ++i) {
    if (final_state.boolean(fluents::bird(static_cast<int>(i), "released"))) continue;
    out.birds.push_back(level.birds[i]);
  }
  for (size_t j = 0; j < level.pigs.size(); ++j) {
    const int pj = static_cast<int>(j);
    if (!final_state.boolean(fluents::pig(pj, "alive"))) continue;
    PigSpec p = level.pigs[j];
    p.x = final_state.numeric(fluents::pig(pj, "x"));
    p.y = final_state.numeric(fluents::pig(pj, "y"));
    out.pigs.push_back(p);
  }
  for (size_t k = 0; k < level.blocks.size(); ++k) {
    const int bk = static_cast<int>(k);
    if (final_state.boolean(fluents::block(bk, "dead"))) continue;
    BlockSpec b = level.blocks[k];
    b.x = final_state.numeric(fluents::block(bk, "x"));
    b.y = final_state.numeric(fluents::block(bk, "y"));
    out.blocks.push_back(b);
  }
  out.platforms = level.platforms;
  return out;
}

AgentResult agent_loop(const Level& level, const AgentConfig& config) {
  level.validate();

  AgentResult res;
  Level residual = level;
  double budget = config.level_budget_seconds;
  int killed_total = 0;
  int destroyed_total = 0;

  while (!residual.pigs.empty() && !residual.birds.empty()) {
    ShotDecision shot;
    if (budget > 0) {
      CascadeConfig cc = config.cascade;
      cc.stage1_timeout = std::min(cc.stage1_timeout, budget);
      cc.stage2_timeout = std::min(cc.stage2_timeout, budget);
      shot = cascade(residual, cc, config.materials);
      budget -= shot.planning_seconds;
    } else {
      // planning budget exhausted: fall through to the default action
      shot.stage = StageTag::DefaultAction;
      shot.steps = {{default_release_tick(residual.physics, config.cascade.search.dt,
                                          config.cascade.default_angle),
                     pa_twang_name(0)}};
    }

    ExecOptions eo;
    eo.materials = config.materials;
    eo.score = config.score;
    eo.dt = config.cascade.search.dt;
    eo.horizon_per_bird = config.horizon_per_bird;
    eo.record_trace = config.record_trace;
    ExecResult er = execute(residual, {shot}, eo);

    killed_total += er.score.pigs_killed;
    destroyed_total += er.score.blocks_destroyed;
    res.shots.push_back({shot.stage, shot.steps, shot.planning_seconds, er.score.pigs_killed});
    if (config.record_trace) {
      res.trace.ticks.insert(res.trace.ticks.end(), er.trace.ticks.begin(),
                             er.trace.ticks.end());
    }
    res.trace.horizon_reached = res.trace.horizon_reached || er.trace.horizon_reached;

    residual = rebuild_residual(residual, er.final_state);
    if (er.trace.horizon_reached) break;
  }

  res.solved = residual.pigs.empty();
  res.trace.all_pigs_dead = res.solved;
  res.trace.birds_exhausted = !res.solved && residual.birds.empty();
  const int unused = res.solved ? static_cast<int>(residual.birds.size()) : 0;
  res.score = make_score(killed_total, destroyed_total, unused, config.score);
  return res;
}

namespace {

// same interval decomposition the grounded events use
bool circle_rect_touch(double x, double y, double r, double cx, double cy, double w, double h) {
  const double left = cx - 0.5 * w;
  const double right = cx + 0.5 * w;
  const double bottom = cy - 0.5 * h;
  const double top = cy + 0.5 * h;
  const bool band_x = x >= left - r && x <= right + r && y >= bottom && y <= top;
  if (band_x) return true;
  const bool band_y = x >= left && x <= right && y >= bottom - r && y <= top + r;
  if (band_y) return true;
  auto corner = [&](double px, double py) {
    return (x - px) * (x - px) + (y - py) * (y - py) <= r * r;
  };
  return corner(left, bottom) || corner(right, bottom) || corner(left, top) || corner(right, top);
}

}  // namespace

namespace {

struct FlightOutcome {
  bool hit = false;
  double closest = std::numeric_limits<double>::infinity();
};

// One flight from release tick k, mirroring the grounded event order for a
// block-free scene: pig contact, platform contact, ground bounce,
// out-of-scene, three-bounce expiry; the first enabled rule fires and the
// scan restarts. Plain arithmetic throughout.
FlightOutcome run_flight(const Level& level, int pig_index, double release_angle_deg,
                         int release_tick, const OracleConfig& config,
                         std::vector<Vec2>* trajectory) {
  const Physics& ph = level.physics;
  const double dt = config.dt;
  const double rb = config.materials.bird_radius;
  const double clearance = config.materials.ground_clearance;
  const PigSpec& target = level.pigs[pig_index];
  const double contact = rb + target.radius;

  double x = level.slingshot.x;
  double y = level.slingshot.y;
  double vx = ph.launch_speed * approx_cos_rad(release_angle_deg * kDeg2Rad);
  double vy = ph.launch_speed * approx_sin_deg(release_angle_deg);
  int bounce = 0;
  bool expired = false;
  FlightOutcome out;

  auto events_phase = [&] {
    bool again = true;
    while (again && !expired && !out.hit) {
      again = false;
      const double dx = x - target.x;
      const double dy = y - target.y;
      const double d2 = dx * dx + dy * dy;
      const double miss = std::sqrt(d2) - contact;
      if (miss < out.closest) out.closest = miss;
      if (d2 <= contact * contact && d2 > 0.0) {
        out.hit = true;
        return;
      }
      bool fired = false;
      for (const PlatformSpec& p : level.platforms) {
        if (circle_rect_touch(x, y, rb, p.x, p.y, p.width, p.height)) {
          vx = 0;
          vy = 0;
          expired = true;
          fired = true;
          break;
        }
      }
      if (fired) continue;
      if (y <= 0.0) {
        y = clearance;
        vy = (vy * -1.0) * ph.ground_damper;
        bounce += 1;
        again = true;
        continue;
      }
      if (x > ph.scene_xmax) {
        expired = true;
        continue;
      }
      if (bounce >= 3) {
        expired = true;
        continue;
      }
    }
  };

  events_phase();  // the release tick's post-action event phase
  for (int t = release_tick;
       t < config.horizon && t - release_tick < kFlightTickCap && !out.hit && !expired; ++t) {
    if (y > 0.0) {
      const double vy0 = vy;
      vy = vy + (-ph.gravity) * dt;
      y = y + vy0 * dt;
      x = x + vx * dt;
    }
    events_phase();
    if (trajectory) trajectory->push_back({x, y});
  }
  return out;
}

std::vector<double> release_angles(const Physics& ph, const OracleConfig& config) {
  // accumulated exactly the way the angle process evolves
  std::vector<double> angles(config.horizon + 1);
  double acc = 0;
  for (int t = 0; t <= config.horizon; ++t) {
    angles[t] = acc;
    if (acc < ph.max_angle) acc += ph.angle_rate * config.dt;
  }
  return angles;
}

void check_oracle_inputs(const Level& level, int pig_index) {
  level.validate();
  if (!level.blocks.empty()) throw DomainError("oracle_hit requires a block-free level");
  if (pig_index < 0 || pig_index >= static_cast<int>(level.pigs.size())) {
    throw DomainError("oracle_hit: pig index out of range");
  }
}

}  // namespace

OracleResult oracle_hit(const Level& level, int pig_index, const OracleConfig& config) {
  check_oracle_inputs(level, pig_index);
  const std::vector<double> angles = release_angles(level.physics, config);
  OracleResult res;
  res.closest_miss = std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.horizon; ++k) {
    FlightOutcome out = run_flight(level, pig_index, angles[k], k, config, nullptr);
    if (out.hit) res.hit_ticks.push_back(k);
    if (out.closest < res.closest_miss) res.closest_miss = out.closest;
  }
  return res;
}

std::vector<Vec2> oracle_trajectory(const Level& level, int release_tick,
                                    const OracleConfig& config) {
  check_oracle_inputs(level, 0);
  if (release_tick < 0 || release_tick >= config.horizon) {
    throw DomainError("oracle_trajectory: release tick out of range");
  }
  const std::vector<double> angles = release_angles(level.physics, config);
  std::vector<Vec2> traj;
  run_flight(level, 0, angles[release_tick], release_tick, config, &traj);
  return traj;
}

}  // namespace abplan
