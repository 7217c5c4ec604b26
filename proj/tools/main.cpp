#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abplan/level_io.hpp"
#include "abplan/planner.hpp"
#include "abplan/sim.hpp"

namespace fs = std::filesystem;
using namespace abplan;

namespace {

constexpr int kExitUnsolved = 1;
constexpr int kExitInputError = 2;

void print_score(const ScoreReport& s) {
  std::cout << "pigs_killed=" << s.pigs_killed << " (" << format_number(s.pig_score) << ")"
            << " blocks_destroyed=" << s.blocks_destroyed << " (" << format_number(s.block_score)
            << ")"
            << " unused_birds=" << s.unused_birds << " (" << format_number(s.bird_score) << ")"
            << " total=" << format_number(s.total) << "\n";
}

int cmd_plan(const std::string& level_path, const std::string& stage, double timeout, double dt,
             int horizon, const std::string& out_path) {
  const Level level = parse_level_file(level_path);
  HybridProblem problem = translate(level, {}, dt, horizon);
  StageTag tag = StageTag::Full;
  if (stage == "single") {
    problem = single_shot(problem);
    tag = StageTag::SingleShot;
  } else if (stage == "noblocks") {
    problem = strip_blocks(single_shot(problem));
    tag = StageTag::SingleShotNoBlocks;
  } else if (stage != "full") {
    throw InputError("unknown stage '" + stage + "' (full|single|noblocks)");
  }

  SearchConfig config;
  config.dt = dt;
  config.horizon = horizon;
  config.timeout_seconds = timeout;
  SolveResult result = solve(problem, config);

  std::cout << "outcome=" << to_string(result.outcome) << " expanded=" << result.expanded
            << " elapsed=" << format_number(result.elapsed_seconds) << "s\n";
  if (!result.plan) return kExitUnsolved;

  ShotDecision shot;
  shot.stage = tag;
  shot.steps = result.plan->steps;
  shot.planning_seconds = result.plan->planning_seconds;
  const std::string text = serialize_plan(shot, dt);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_plan_file(out_path, shot, dt);
    std::cout << "plan written to " << out_path << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& level_path, const std::string& plan_path,
                 const std::string& trace_path) {
  const Level level = parse_level_file(level_path);
  double dt = 0.05;
  const ShotDecision shot = parse_plan_file(plan_path, &dt);

  if (shot.stage == StageTag::Full) {
    // full plans run on the global timeline through the grounded model
    HybridProblem problem = translate(level, {}, dt);
    ReplayOutcome replay = replay_plan(problem, shot.steps);
    std::cout << "goal_reached=" << (replay.goal_reached ? "true" : "false")
              << " ticks=" << replay.ticks << "\n";
    return 0;
  }

  ExecOptions options;
  options.dt = dt;
  options.record_trace = !trace_path.empty();
  ExecResult result = execute(level, {shot}, options);
  print_score(result.score);
  std::cout << "solved=" << (result.solved ? "true" : "false") << "\n";
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw InputError("cannot write trace file " + trace_path);
    out << result.trace.text();
    std::cout << "trace written to " << trace_path << "\n";
  }
  return 0;
}

int cmd_agent(const std::string& level_path, double budget, const std::string& trace_path) {
  const Level level = parse_level_file(level_path);
  AgentConfig config;
  config.level_budget_seconds = budget;
  config.record_trace = !trace_path.empty();
  AgentResult result = agent_loop(level, config);

  for (size_t i = 0; i < result.shots.size(); ++i) {
    const ShotRecord& s = result.shots[i];
    std::cout << "shot " << i << ": stage=" << to_string(s.stage)
              << " plan_ms=" << std::llround(s.plan_seconds * 1000.0)
              << " pigs_killed=" << s.pigs_killed << "\n";
  }
  print_score(result.score);
  std::cout << "solved=" << (result.solved ? "true" : "false") << "\n";
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw InputError("cannot write trace file " + trace_path);
    out << result.trace.text();
  }
  return result.solved ? 0 : kExitUnsolved;
}

int cmd_bench(const std::string& dir, int generate_n, uint64_t seed, const std::string& csv_path,
              double budget) {
  std::vector<LevelEntry> levels;
  if (generate_n > 0) {
    for (int i = 0; i < generate_n; ++i) {
      const uint64_t s = seed + static_cast<uint64_t>(i);
      levels.push_back({"gen-" + std::to_string(s), generate_level(s)});
    }
  } else if (!dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) levels.push_back({f.stem().string(), parse_level_file(f)});
  }
  if (levels.empty()) {
    throw InputError("bench: no levels (pass a directory of .json levels or --generate N)");
  }

  AgentConfig config;
  config.level_budget_seconds = budget;
  config.record_trace = false;
  BenchmarkResult result = run_benchmark(levels, config);

  const std::string csv = benchmark_csv(result.rows);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw InputError("cannot write csv file " + csv_path);
    out << csv;
  } else {
    std::cout << csv;
  }

  const BenchmarkSummary& s = result.summary;
  std::cout << "levels=" << s.levels << " solved=" << s.solved
            << " mean_score=" << format_number(s.mean_score) << "\n";
  std::cout << "stage_histogram: full=" << s.histogram.full
            << " single-shot=" << s.histogram.single_shot
            << " single-shot-no-blocks=" << s.histogram.single_shot_no_blocks
            << " default-action=" << s.histogram.default_action << "\n";
  for (const BenchmarkRow& r : result.rows) {
    if (!r.error.empty()) std::cerr << "level " << r.level_id << " failed: " << r.error << "\n";
  }
  return 0;
}

int cmd_gen(uint64_t seed, const GenParams& params, const std::string& out_path) {
  const Level level = generate_level(seed, params);
  const std::string text = serialize_level(level);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_level_file(out_path, level);
    std::cout << "level written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid-planning agent for Angry Birds style levels"};
  app.require_subcommand(1);

  // plan
  std::string plan_level, plan_stage = "single", plan_out;
  double plan_timeout = 30, plan_dt = 0.05;
  int plan_horizon = 1200;
  CLI::App* plan = app.add_subcommand("plan", "solve one planning stage for a level");
  plan->add_option("level", plan_level, "level JSON file")->required();
  plan->add_option("--stage", plan_stage, "full|single|noblocks (default single)");
  plan->add_option("--timeout", plan_timeout, "search timeout in seconds");
  plan->add_option("--dt", plan_dt, "discretization step in seconds");
  plan->add_option("--horizon", plan_horizon, "search horizon in ticks");
  plan->add_option("--out", plan_out, "write the plan file here");

  // simulate
  std::string sim_level, sim_plan, sim_trace;
  CLI::App* simulate = app.add_subcommand("simulate", "replay a plan file against a level");
  simulate->add_option("level", sim_level, "level JSON file")->required();
  simulate->add_option("plan", sim_plan, "plan file")->required();
  simulate->add_option("--trace", sim_trace, "write the replay trace here");

  // agent
  std::string agent_level, agent_trace;
  double agent_budget = 60;
  CLI::App* agent = app.add_subcommand("agent", "closed-loop agent on one level");
  agent->add_option("level", agent_level, "level JSON file")->required();
  agent->add_option("--budget", agent_budget, "planning budget per level in seconds");
  agent->add_option("--trace", agent_trace, "write the full trace here");

  // bench
  std::string bench_dir, bench_csv;
  int bench_generate = 0;
  uint64_t bench_seed = 0;
  double bench_budget = 60;
  CLI::App* bench = app.add_subcommand("bench", "run the agent over a level set");
  bench->add_option("dir", bench_dir, "directory of level JSON files");
  bench->add_option("--generate", bench_generate, "generate N levels instead");
  bench->add_option("--seed", bench_seed, "base seed for generated levels");
  bench->add_option("--csv", bench_csv, "write rows to this CSV file");
  bench->add_option("--budget", bench_budget, "planning budget per level in seconds");

  // gen
  uint64_t gen_seed = 0;
  GenParams gen_params;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a level");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--pigs", gen_params.n_pigs, "number of pigs");
  gen->add_option("--blocks", gen_params.n_blocks, "number of blocks");
  gen->add_option("--platforms", gen_params.n_platforms, "number of platforms");
  gen->add_option("--birds", gen_params.n_birds, "number of birds");
  gen->add_option("--prob", gen_params.structure_probability, "structure probability per pig");
  gen->add_option("--out", gen_out, "write the level here");

  try {
    app.parse(argc, argv);
    if (plan->parsed()) {
      return cmd_plan(plan_level, plan_stage, plan_timeout, plan_dt, plan_horizon, plan_out);
    }
    if (simulate->parsed()) return cmd_simulate(sim_level, sim_plan, sim_trace);
    if (agent->parsed()) return cmd_agent(agent_level, agent_budget, agent_trace);
    if (bench->parsed()) {
      return cmd_bench(bench_dir, bench_generate, bench_seed, bench_csv, bench_budget);
    }
    if (gen->parsed()) return cmd_gen(gen_seed, gen_params, gen_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
