#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abplan/level_io.hpp"
#include "abplan/planner.hpp"
#include "abplan/sim.hpp"

namespace py = pybind11;
using namespace abplan;

namespace {

std::vector<std::pair<int, std::string>> steps_out(const std::vector<PlanStep>& steps) {
  std::vector<std::pair<int, std::string>> out;
  out.reserve(steps.size());
  for (const PlanStep& s : steps) out.emplace_back(s.tick, s.action);
  return out;
}

std::vector<PlanStep> steps_in(const std::vector<std::pair<int, std::string>>& steps) {
  std::vector<PlanStep> out;
  out.reserve(steps.size());
  for (const auto& [tick, action] : steps) out.push_back({tick, action});
  return out;
}

SearchConfig make_search_config(double dt, int horizon, double timeout) {
  SearchConfig c;
  c.dt = dt;
  c.horizon = horizon;
  c.timeout_seconds = timeout;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hybrid planner and simulator for Angry Birds style levels";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<Error>(m, "EngineError", PyExc_RuntimeError);

  m.def("approx_sin", &approx_sin_deg, py::arg("theta_deg"),
        "Bhaskara sine approximation, argument in degrees on [0, 180]");
  m.def("approx_cos", &approx_cos_rad, py::arg("theta_rad"),
        "small-angle cosine approximation, argument in radians");

  m.def(
      "elastic_bird_velocity",
      [](std::pair<double, double> vb, std::pair<double, double> vp,
         std::pair<double, double> xb, std::pair<double, double> xp, double mb, double mp) {
        Vec2 v = elastic_bird_velocity({vb.first, vb.second}, {vp.first, vp.second},
                                       {xb.first, xb.second}, {xp.first, xp.second}, mb, mp);
        return std::make_pair(v.x, v.y);
      },
      py::arg("vb"), py::arg("vp"), py::arg("xb"), py::arg("xp"), py::arg("mb"), py::arg("mp"),
      "post-collision bird velocity for an elastic two-body impact");

  py::class_<Level>(m, "Level")
      .def_property_readonly("num_birds", [](const Level& l) { return l.birds.size(); })
      .def_property_readonly("num_pigs", [](const Level& l) { return l.pigs.size(); })
      .def_property_readonly("num_blocks", [](const Level& l) { return l.blocks.size(); })
      .def_property_readonly("num_platforms", [](const Level& l) { return l.platforms.size(); })
      .def("__repr__", [](const Level& l) {
        return "<Level birds=" + std::to_string(l.birds.size()) +
               " pigs=" + std::to_string(l.pigs.size()) +
               " blocks=" + std::to_string(l.blocks.size()) +
               " platforms=" + std::to_string(l.platforms.size()) + ">";
      });

  m.def("parse_level", &parse_level, py::arg("json_text"));
  m.def("serialize_level", &serialize_level, py::arg("level"));
  m.def(
      "generate_level",
      [](uint64_t seed, int pigs, int blocks, int platforms, int birds, double prob) {
        GenParams p;
        p.n_pigs = pigs;
        p.n_blocks = blocks;
        p.n_platforms = platforms;
        p.n_birds = birds;
        p.structure_probability = prob;
        return generate_level(seed, p);
      },
      py::arg("seed"), py::arg("pigs") = 2, py::arg("blocks") = 3, py::arg("platforms") = 1,
      py::arg("birds") = 2, py::arg("prob") = 0.5);

  py::class_<HybridProblem>(m, "HybridProblem")
      .def_property_readonly("num_actions",
                             [](const HybridProblem& p) { return p.actions.size(); })
      .def_property_readonly("num_events", [](const HybridProblem& p) { return p.events.size(); })
      .def_property_readonly("num_processes",
                             [](const HybridProblem& p) { return p.processes.size(); })
      .def_property_readonly("num_fluents", [](const HybridProblem& p) { return p.schema->size(); })
      .def_property_readonly("goal", [](const HybridProblem& p) { return p.goal.str(); })
      .def_property_readonly("dt", [](const HybridProblem& p) { return p.dt; });

  py::class_<MaterialTable>(m, "MaterialTable").def(py::init<>());

  m.def("translate", &translate, py::arg("level"), py::arg("materials") = MaterialTable{},
        py::arg("dt") = 0.05, py::arg("horizon") = 1200);
  m.def("single_shot", &single_shot, py::arg("problem"));
  m.def("strip_blocks", &strip_blocks, py::arg("problem"));

  m.def(
      "solve",
      [](const HybridProblem& problem, double timeout, int horizon) {
        SolveResult r = solve(problem, make_search_config(problem.dt, horizon, timeout));
        py::dict out;
        out["outcome"] = std::string(to_string(r.outcome));
        out["expanded"] = r.expanded;
        out["elapsed_seconds"] = r.elapsed_seconds;
        if (r.plan) {
          out["steps"] = steps_out(r.plan->steps);
        } else {
          out["steps"] = py::none();
        }
        return out;
      },
      py::arg("problem"), py::arg("timeout") = 30.0, py::arg("horizon") = 1200);

  m.def(
      "cascade",
      [](const Level& level, double stage1_timeout, double stage2_timeout, double dt,
         int horizon) {
        CascadeConfig c;
        c.search = make_search_config(dt, horizon, stage1_timeout);
        c.stage1_timeout = stage1_timeout;
        c.stage2_timeout = stage2_timeout;
        ShotDecision d = cascade(level, c);
        py::dict out;
        out["stage"] = std::string(to_string(d.stage));
        out["steps"] = steps_out(d.steps);
        out["planning_seconds"] = d.planning_seconds;
        return out;
      },
      py::arg("level"), py::arg("stage1_timeout") = 30.0, py::arg("stage2_timeout") = 30.0,
      py::arg("dt") = 0.05, py::arg("horizon") = 1200);

  m.def(
      "execute",
      [](const Level& level,
         const std::vector<std::pair<std::string, std::vector<std::pair<int, std::string>>>>&
             shots,
         double dt, int horizon, bool record_trace) {
        std::vector<ShotDecision> decisions;
        for (const auto& [stage, steps] : shots) {
          ShotDecision d;
          d.stage = stage_from_string(stage);
          d.steps = steps_in(steps);
          decisions.push_back(std::move(d));
        }
        ExecOptions options;
        options.dt = dt;
        options.horizon_per_bird = horizon;
        options.record_trace = record_trace;
        ExecResult r = execute(level, decisions, options);
        py::dict out;
        out["solved"] = r.solved;
        out["pigs_killed"] = r.score.pigs_killed;
        out["blocks_destroyed"] = r.score.blocks_destroyed;
        out["unused_birds"] = r.score.unused_birds;
        out["total_score"] = r.score.total;
        out["trace"] = record_trace ? py::cast(r.trace.text()) : py::none();
        return out;
      },
      py::arg("level"), py::arg("shots"), py::arg("dt") = 0.05, py::arg("horizon") = 1200,
      py::arg("record_trace") = false);

  m.def(
      "agent",
      [](const Level& level, double budget, double stage1_timeout, double stage2_timeout,
         bool record_trace) {
        AgentConfig c;
        c.level_budget_seconds = budget;
        c.cascade.stage1_timeout = stage1_timeout;
        c.cascade.stage2_timeout = stage2_timeout;
        c.record_trace = record_trace;
        AgentResult r = agent_loop(level, c);
        py::dict out;
        out["solved"] = r.solved;
        out["total_score"] = r.score.total;
        out["pigs_killed"] = r.score.pigs_killed;
        py::list shots;
        for (const ShotRecord& s : r.shots) {
          py::dict shot;
          shot["stage"] = std::string(to_string(s.stage));
          shot["steps"] = steps_out(s.steps);
          shot["plan_seconds"] = s.plan_seconds;
          shot["pigs_killed"] = s.pigs_killed;
          shots.append(shot);
        }
        out["shots"] = shots;
        out["trace"] = record_trace ? py::cast(r.trace.text()) : py::none();
        return out;
      },
      py::arg("level"), py::arg("budget") = 60.0, py::arg("stage1_timeout") = 30.0,
      py::arg("stage2_timeout") = 30.0, py::arg("record_trace") = false);

  m.def(
      "oracle_hit",
      [](const Level& level, int pig_index, double dt, int horizon) {
        OracleConfig c;
        c.dt = dt;
        c.horizon = horizon;
        OracleResult r = oracle_hit(level, pig_index, c);
        return std::make_pair(r.hit_ticks, r.closest_miss);
      },
      py::arg("level"), py::arg("pig_index"), py::arg("dt") = 0.05, py::arg("horizon") = 1200);

  m.def(
      "run_benchmark",
      [](const std::vector<std::pair<std::string, Level>>& levels, double budget) {
        std::vector<LevelEntry> entries;
        for (const auto& [id, level] : levels) entries.push_back({id, level});
        AgentConfig c;
        c.level_budget_seconds = budget;
        c.record_trace = false;
        BenchmarkResult r = run_benchmark(entries, c);
        py::dict out;
        out["csv"] = benchmark_csv(r.rows);
        out["levels"] = r.summary.levels;
        out["solved"] = r.summary.solved;
        out["mean_score"] = r.summary.mean_score;
        py::dict hist;
        hist["full"] = r.summary.histogram.full;
        hist["single-shot"] = r.summary.histogram.single_shot;
        hist["single-shot-no-blocks"] = r.summary.histogram.single_shot_no_blocks;
        hist["default-action"] = r.summary.histogram.default_action;
        out["histogram"] = hist;
        return out;
      },
      py::arg("levels"), py::arg("budget") = 60.0);

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
