#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abplan/domain.hpp"
#include "abplan/model.hpp"

namespace abplan {

enum class StageTag : uint8_t { Full, SingleShot, SingleShotNoBlocks, DefaultAction };

std::string_view to_string(StageTag tag);
StageTag stage_from_string(std::string_view s);  // InputError on unknown

struct PlanStep {
  int tick = 0;
  std::string action;
};

struct Plan {
  std::vector<PlanStep> steps;  // tick indices strictly increasing
  StageTag stage = StageTag::SingleShot;
  double planning_seconds = 0;
};

struct SearchConfig {
  double dt = 0.05;            // must match the problem's dt
  int horizon = 1200;
  double timeout_seconds = 30;
  double position_grid = 0.1;  // duplicate-detection grids per unit class
  double velocity_grid = 0.1;
  double angle_grid = 0.25;
  bool macro_suffix = true;    // walk action-free suffixes eagerly (same results)

  void validate() const;  // ConfigError on nonpositive grids/timeout/horizon
};

enum class SolveOutcome : uint8_t { Found, FrontierExhausted, HorizonExhausted, Timeout };

std::string_view to_string(SolveOutcome o);

struct SolveResult {
  std::optional<Plan> plan;
  SolveOutcome outcome = SolveOutcome::FrontierExhausted;
  long expanded = 0;
  double elapsed_seconds = 0;
};

// Duplicate-detection key: every numeric fluent snapped to its unit-class
// grid, booleans verbatim, concatenated in schema order.
struct QuantKey {
  std::vector<int64_t> words;
  bool operator==(const QuantKey&) const = default;
};

struct QuantKeyHash {
  size_t operator()(const QuantKey& k) const;
};

QuantKey quantize(const State& state, const SearchConfig& config);

// Breadth-first search over {wait} + applicable actions per tick. The returned
// plan is re-validated by replay before it is handed out.
SolveResult solve(const HybridProblem& problem, const SearchConfig& config);

struct ReplayOutcome {
  State final_state;
  bool goal_reached = false;
  int ticks = 0;
};

// Replay a decision list through tick(); pads with waits and stops at the
// goal or the problem horizon, whichever first.
ReplayOutcome replay_plan(const HybridProblem& problem, const std::vector<PlanStep>& steps);

struct CascadeConfig {
  SearchConfig search;
  double stage1_timeout = 30;  // single-shot
  double stage2_timeout = 30;  // single-shot-no-blocks
  double default_angle = 45;   // degrees; fallback release
};

// One shot decision: a validated plan from stage 1 or 2, or the default
// release. steps are ticks of the active bird's episode.
struct ShotDecision {
  StageTag stage = StageTag::DefaultAction;
  std::vector<PlanStep> steps;
  double planning_seconds = 0;
  std::optional<SolveOutcome> stage1_outcome;
  std::optional<SolveOutcome> stage2_outcome;
};

// The simplification cascade: single-shot, then single-shot-no-blocks, then
// the default action at the configured angle.
ShotDecision cascade(const Level& level, const CascadeConfig& config,
                     const MaterialTable& table = {});

// Release tick whose accumulated angle is closest to `angle_deg`.
int default_release_tick(const Physics& physics, double dt, double angle_deg);

}  // namespace abplan
