#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abplan/domain.hpp"
#include "abplan/planner.hpp"

namespace abplan {

// Hard cap on post-release episode length, in ticks.
inline constexpr int kFlightTickCap = 3000;

struct Trace {
  std::vector<TickRecord> ticks;
  bool all_pigs_dead = false;
  bool birds_exhausted = false;
  bool horizon_reached = false;

  std::string text() const;  // stable dump, one block per tick
};

struct ScoreConfig {
  double pig_points = 5000;
  double block_points = 500;
  double bird_points = 10000;
};

struct ScoreReport {
  int pigs_killed = 0;
  int blocks_destroyed = 0;
  int unused_birds = 0;  // counted only when the level is solved
  double pig_score = 0;
  double block_score = 0;
  double bird_score = 0;
  double total = 0;
};

ScoreReport make_score(int pigs, int blocks, int unused, const ScoreConfig& cfg);

struct ExecOptions {
  MaterialTable materials;
  ScoreConfig score;
  double dt = 0.05;
  int horizon_per_bird = 1200;
  bool record_trace = true;
};

struct ExecResult {
  Trace trace;
  ScoreReport score;
  State final_state;
  bool solved = false;
};

// Replay one shot decision per bird, in order, through the grounded model.
// The environment IS the model: the same translate() output drives both.
ExecResult execute(const Level& level, const std::vector<ShotDecision>& shots,
                   const ExecOptions& options = {});

struct AgentConfig {
  CascadeConfig cascade;
  MaterialTable materials;
  ScoreConfig score;
  double level_budget_seconds = 60;  // shrinks the stage timeouts as it drains
  int horizon_per_bird = 1200;
  bool record_trace = true;
};

struct ShotRecord {
  StageTag stage = StageTag::DefaultAction;
  std::vector<PlanStep> steps;
  double plan_seconds = 0;
  int pigs_killed = 0;  // by this shot
};

struct AgentResult {
  ScoreReport score;
  std::vector<ShotRecord> shots;
  bool solved = false;
  Trace trace;
};

// Closed loop: plan a shot for the current residual level, execute it, rebuild
// the residual from the survivors, repeat until the pigs or the birds run out.
AgentResult agent_loop(const Level& level, const AgentConfig& config = {});

// Residual scene after a shot: surviving objects at their final positions,
// launched bird removed, support relations recomputed on the next translate.
Level rebuild_residual(const Level& level, const State& final_state);

struct OracleConfig {
  double dt = 0.05;
  int horizon = 1200;
  MaterialTable materials;
};

struct OracleResult {
  std::vector<int> hit_ticks;  // release ticks whose flight touches the pig
  double closest_miss = 0;     // min over all ticks of center distance - contact distance
};

// Independent analytic ballistic oracle: integrates the identical discrete
// flight (same Euler step, same trig approximations, same ground/platform/
// expiry rules) with plain arithmetic, no search and no grounded model.
// Non-target pigs are ignored (they are ghosts for the flight).
// DomainError if the level contains blocks.
OracleResult oracle_hit(const Level& level, int pig_index, const OracleConfig& config = {});

// The oracle's flight path for one release tick: bird center after every tick
// from the release tick until expiry or the horizon.
std::vector<Vec2> oracle_trajectory(const Level& level, int release_tick,
                                    const OracleConfig& config = {});

}  // namespace abplan
