#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "abplan/sim.hpp"

namespace abplan {

// JSON document <-> Level. Unknown keys are rejected; diagnostics name the
// first offending path (e.g. "blocks[0].material").
Level parse_level(const std::string& json_text);
Level parse_level_file(const std::filesystem::path& path);
std::string serialize_level(const Level& level);
void write_level_file(const std::filesystem::path& path, const Level& level);

// Plan file: "stage=<tag> dt=<dt>" header, then "tick=<k> action=<name>" lines.
std::string serialize_plan(const ShotDecision& shot, double dt);
ShotDecision parse_plan(const std::string& text, double* dt_out = nullptr);
void write_plan_file(const std::filesystem::path& path, const ShotDecision& shot, double dt);
ShotDecision parse_plan_file(const std::filesystem::path& path, double* dt_out = nullptr);

struct GenParams {
  int n_pigs = 2;
  int n_blocks = 3;
  int n_platforms = 1;
  int n_birds = 2;
  double structure_probability = 0.5;  // per pig: sheltered by / atop a structure
};

// Deterministic function of (seed, params). GenerationError on out-of-bounds
// parameters.
Level generate_level(uint64_t seed, const GenParams& params = {});

struct LevelEntry {
  std::string id;
  Level level;
};

struct BenchmarkRow {
  std::string level_id;
  bool solved = false;
  double score = 0;
  int shots = 0;
  std::vector<StageTag> stage_tags;
  std::vector<double> plan_ms;
  std::vector<int> pigs_killed_per_shot;
  std::string error;  // nonempty if the level failed; never aborts the batch
};

struct StageHistogram {
  int full = 0;
  int single_shot = 0;
  int single_shot_no_blocks = 0;
  int default_action = 0;
};

struct BenchmarkSummary {
  int levels = 0;
  int solved = 0;
  double mean_score = 0;
  StageHistogram histogram;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  BenchmarkSummary summary;
};

// Runs agent_loop per level under the per-level budget; rows come back in
// input order. InputError on an empty level set.
BenchmarkResult run_benchmark(const std::vector<LevelEntry>& levels,
                              const AgentConfig& config = {});

// Recompute the summary from rows (tests cross-check the reported one).
BenchmarkSummary summarize(const std::vector<BenchmarkRow>& rows);

inline constexpr const char* kCsvHeader = "level_id,solved,score,shots,stage_tags,plan_ms";

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);
std::vector<BenchmarkRow> parse_benchmark_csv(const std::string& csv);

}  // namespace abplan
