#include <cmath>
#include <numbers>

#include <doctest.h>

#include "abplan/model.hpp"
#include "helpers.hpp"

using namespace abplan;

TEST_SUITE_BEGIN("model");

namespace {

// a one-bird flight scene in miniature: pa-twang, angle sweep, flight, ground
HybridProblem toy_problem(double v = 70.0, double start_angle = 0.0) {
  auto schema = std::make_shared<const FluentSchema>(std::vector<FluentDecl>{
      {"gravity", ValueKind::Numeric, Unit::Dimensionless},
      {"angle", ValueKind::Numeric, Unit::Degrees},
      {"angle_rate", ValueKind::Numeric, Unit::Dimensionless},
      {"max_angle", ValueKind::Numeric, Unit::Degrees},
      {"ground_damper", ValueKind::Numeric, Unit::Dimensionless},
      {"angle_adjusted", ValueKind::Boolean, Unit::Dimensionless},
      {"x", ValueKind::Numeric, Unit::Meters},
      {"y", ValueKind::Numeric, Unit::Meters},
      {"vx", ValueKind::Numeric, Unit::MetersPerSecond},
      {"vy", ValueKind::Numeric, Unit::MetersPerSecond},
      {"v", ValueKind::Numeric, Unit::MetersPerSecond},
      {"bounce_count", ValueKind::Numeric, Unit::Count},
      {"released", ValueKind::Boolean, Unit::Dimensionless},
  });
  std::vector<double> init = {9.8, start_angle, 10.0, 80.0, 0.4, 0, 0, 1, 0, 0, v, 0, 0};

  ActionDef twang;
  twang.name = "pa-twang";
  twang.precondition = Expr::conj(Expr::negation(Expr::bool_fluent("angle_adjusted")),
                                  Expr::negation(Expr::bool_fluent("released")));
  twang.effects = {
      {"vy", -1, Expr::mul(Expr::fluent("v"), Expr::approx_sin(Expr::fluent("angle")))},
      {"vx", -1,
       Expr::mul(Expr::fluent("v"),
                 Expr::approx_cos(Expr::mul(Expr::fluent("angle"), Expr::num(kDeg2Rad))))},
      {"released", -1, Expr::boolean(true)},
      {"angle_adjusted", -1, Expr::boolean(true)},
  };

  ProcessDef inc;
  inc.name = "increasing_angle";
  inc.condition = Expr::conj(
      Expr::conj(Expr::negation(Expr::bool_fluent("angle_adjusted")),
                 Expr::negation(Expr::bool_fluent("released"))),
      Expr::conj(Expr::lt(Expr::fluent("angle"), Expr::fluent("max_angle")),
                 Expr::ge(Expr::fluent("angle"), Expr::num(0))));
  inc.rates = {{"angle", -1, Expr::fluent("angle_rate")}};

  ProcessDef fly;
  fly.name = "flying";
  fly.condition = Expr::conj(Expr::bool_fluent("released"),
                             Expr::gt(Expr::fluent("y"), Expr::num(0)));
  fly.rates = {
      {"vy", -1, Expr::neg(Expr::fluent("gravity"))},
      {"y", -1, Expr::fluent("vy")},
      {"x", -1, Expr::fluent("vx")},
  };

  EventDef ground;
  ground.name = "collision_ground";
  ground.precondition = Expr::conj(Expr::bool_fluent("released"),
                                   Expr::le(Expr::fluent("y"), Expr::num(0)));
  ground.effects = {
      {"y", -1, Expr::num(1)},
      {"vy", -1,
       Expr::mul(Expr::mul(Expr::fluent("vy"), Expr::num(-1)), Expr::fluent("ground_damper"))},
      {"bounce_count", -1, Expr::add(Expr::fluent("bounce_count"), Expr::num(1))},
  };

  return HybridProblem::create(schema, std::move(init), {twang}, {ground}, {inc, fly},
                               Expr::ge(Expr::fluent("bounce_count"), Expr::num(3)), 0.05, 1200);
}

}  // namespace

TEST_CASE("fire_events: quiescent state is returned unchanged") {
  HybridProblem p = toy_problem();
  EventResult r = fire_events(p.initial, p.events);
  CHECK(r.fired.empty());
  CHECK(bit_equal(r.state, p.initial));
}

TEST_CASE("fire_events: ground bounce flips and damps vertical velocity") {
  HybridProblem p = toy_problem();
  State s = p.initial;
  s.set("released", true);
  s.set("y", -0.3);
  s.set("vy", -8.0);
  EventResult r = fire_events(std::move(s), p.events);
  REQUIRE(r.fired == std::vector<std::string>{"collision_ground"});
  CHECK(r.state.numeric("y") == 1.0);
  CHECK(r.state.numeric("vy") == doctest::Approx(3.2).epsilon(1e-15));
  CHECK(r.state.numeric("bounce_count") == 1.0);
}

TEST_CASE("fire_events: mutually enabling events diverge at the cascade cap") {
  auto schema = std::make_shared<const FluentSchema>(
      std::vector<FluentDecl>{{"x", ValueKind::Numeric, Unit::Dimensionless}});
  EventDef a{"ping", Expr::ge(Expr::fluent("x"), Expr::num(0)), {{"x", -1, Expr::num(-1)}}};
  EventDef b{"pong", Expr::le(Expr::fluent("x"), Expr::num(-1)), {{"x", -1, Expr::num(0)}}};
  HybridProblem p = HybridProblem::create(schema, {0.0}, {}, {a, b}, {},
                                          Expr::boolean(false), 0.05, 10);
  try {
    fire_events(p.initial, p.events);
    FAIL("expected cascade divergence");
  } catch (const CascadeDivergenceError& e) {
    CHECK(e.log_tail.size() == 20);
    CHECK(e.log_tail.back() == "pong");
  }
}

TEST_CASE("events that cannot falsify their own precondition are rejected") {
  auto schema = std::make_shared<const FluentSchema>(
      std::vector<FluentDecl>{{"x", ValueKind::Numeric, Unit::Dimensionless},
                              {"y", ValueKind::Numeric, Unit::Dimensionless}});
  EventDef bad{"runaway", Expr::ge(Expr::fluent("x"), Expr::num(0)), {{"y", -1, Expr::num(1)}}};
  CHECK_THROWS_AS(HybridProblem::create(schema, {0.0, 0.0}, {}, {bad}, {},
                                        Expr::boolean(false), 0.05, 10),
                  ModelError);
}

TEST_CASE("duplicate assignment targets are rejected") {
  auto schema = std::make_shared<const FluentSchema>(
      std::vector<FluentDecl>{{"x", ValueKind::Numeric, Unit::Dimensionless}});
  EventDef dup{"twice",
               Expr::ge(Expr::fluent("x"), Expr::num(0)),
               {{"x", -1, Expr::num(-1)}, {"x", -1, Expr::num(-2)}}};
  CHECK_THROWS_AS(HybridProblem::create(schema, {0.0}, {}, {dup}, {},
                                        Expr::boolean(false), 0.05, 10),
                  ModelError);
}

TEST_CASE("advance: linear flow moves tracked fluents by rate*dt") {
  HybridProblem p = toy_problem();
  State s = p.initial;
  s.set("released", true);
  s.set("vx", 10.0);
  State r = advance(s, p.processes, 0.05);
  CHECK(r.numeric("x") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.numeric("vy") == doctest::Approx(-0.49).epsilon(1e-12));
  CHECK(r.time == 0.05);
}

TEST_CASE("advance: no active process only advances time") {
  HybridProblem p = toy_problem();
  State s = p.initial;
  s.set("angle_adjusted", true);  // disables the angle sweep; not released either
  State r = advance(s, p.processes, 0.05);
  CHECK(r.time == 0.05);
  s.time = r.time;
  CHECK(bit_equal(r, s));
}

TEST_CASE("advance: one fluent driven by two active processes is a model error") {
  auto schema = std::make_shared<const FluentSchema>(
      std::vector<FluentDecl>{{"x", ValueKind::Numeric, Unit::Dimensionless}});
  ProcessDef p1{"p1", Expr::boolean(true), {{"x", -1, Expr::num(1)}}};
  ProcessDef p2{"p2", Expr::boolean(true), {{"x", -1, Expr::num(2)}}};
  HybridProblem p = HybridProblem::create(schema, {0.0}, {}, {}, {p1, p2},
                                          Expr::boolean(false), 0.05, 10);
  CHECK_THROWS_AS(advance(p.initial, p.processes, 0.05), ModelError);
}

TEST_CASE("apply_action: launch assigns velocities from the approximations") {
  HybridProblem p = toy_problem(70.0, 30.0);
  State s = apply_action(p.initial, p.actions[0]);
  // 70 * approx_sin(30 deg) = 70 * 0.5
  CHECK(s.numeric("vy") == 35.0);
  // 70 * (1 - (30 deg in radians)^2 / 2), evaluated independently
  const double rad = 30.0 * std::numbers::pi / 180.0;
  CHECK(s.numeric("vx") == doctest::Approx(70.0 * (1.0 - rad * rad / 2.0)).epsilon(1e-15));
  CHECK(s.numeric("vx") == doctest::Approx(60.404).epsilon(1e-4));
  CHECK(s.boolean("released"));
  CHECK(s.boolean("angle_adjusted"));
}

TEST_CASE("apply_action: false precondition raises inapplicable-action") {
  HybridProblem p = toy_problem();
  State released = p.initial;
  released.set("released", true);
  CHECK_THROWS_AS(apply_action(released, p.actions[0]), InapplicableActionError);
  State adjusted = p.initial;
  adjusted.set("angle_adjusted", true);
  CHECK_THROWS_AS(apply_action(adjusted, p.actions[0]), InapplicableActionError);
}

TEST_CASE("effects use simultaneous-assignment semantics") {
  // swap via x <- y, y <- x; both read the pre-action state
  auto schema = std::make_shared<const FluentSchema>(
      std::vector<FluentDecl>{{"x", ValueKind::Numeric, Unit::Dimensionless},
                              {"y", ValueKind::Numeric, Unit::Dimensionless}});
  ActionDef swap{"swap",
                 Expr::boolean(true),
                 {{"x", -1, Expr::fluent("y")}, {"y", -1, Expr::fluent("x")}}};
  HybridProblem p = HybridProblem::create(schema, {1.0, 2.0}, {swap}, {}, {},
                                          Expr::boolean(false), 0.05, 10);
  State s = apply_action(p.initial, p.actions[0]);
  CHECK(s.numeric("x") == 2.0);
  CHECK(s.numeric("y") == 1.0);
}

TEST_CASE("tick: waiting advances the angle sweep") {
  HybridProblem p = toy_problem();
  TickResult r = tick(p.initial, p, std::nullopt);
  CHECK(r.state.numeric("angle") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.state.time == 0.05);
  CHECK(r.fired.empty());
}

TEST_CASE("tick: release applies effects before the first flight step") {
  HybridProblem p = toy_problem(70.0, 45.0);
  TickResult r = tick(p.initial, p, std::optional<std::string>("pa-twang"));

  // hand-applied action effects followed by one Euler step
  State expect = apply_action(p.initial, p.actions[0]);
  expect = advance(std::move(expect), p.processes, p.dt);
  CHECK(bit_equal(r.state, expect));
  CHECK(r.state.numeric("x") > 0.0);
}

TEST_CASE("tick: goal satisfaction does not suppress events") {
  HybridProblem p = toy_problem();
  State s = p.initial;
  s.set("released", true);
  s.set("bounce_count", 5.0);  // goal (>= bounce_count 3) already holds
  s.set("y", -0.2);
  HybridProblem q = p;
  q.initial = s;
  TickResult r = tick(s, q, std::nullopt);
  CHECK(r.fired == std::vector<std::string>{"collision_ground"});
}

TEST_CASE("tick is deterministic and strictly advances time by dt") {
  HybridProblem p = toy_problem();
  TickResult a = tick(p.initial, p, std::optional<std::string>("pa-twang"));
  TickResult b = tick(p.initial, p, std::optional<std::string>("pa-twang"));
  CHECK(bit_equal(a.state, b.state));
  CHECK(a.fired == b.fired);

  State s = p.initial;
  for (int i = 1; i <= 40; ++i) {
    s = tick(std::move(s), p, i == 1 ? std::optional<std::string>("pa-twang") : std::nullopt).state;
    CHECK(s.time == doctest::Approx(i * 0.05).epsilon(1e-12));
  }
}

TEST_CASE("after tick returns, no event precondition holds") {
  HybridProblem p = toy_problem(70.0, 20.0);
  State s = p.initial;
  std::optional<std::string> decision("pa-twang");
  for (int i = 0; i < 400; ++i) {
    s = tick(std::move(s), p, decision).state;
    decision.reset();
    for (const EventDef& e : p.events) CHECK_FALSE(e.precondition.eval_boolean(s));
  }
}

TEST_CASE("trace dump format is stable") {
  HybridProblem p = toy_problem();
  State before = p.initial;
  TickResult r = tick(before, p, std::nullopt);
  TickRecord rec = diff_tick(before, r.state, std::nullopt, r.fired);
  std::string text;
  append_trace_text(text, rec);
  CHECK(text == "t=0 decision=wait fired=[]\n  angle 0 -> 0.5\n");

  // falling bird: one flight step drives y to 0.2 - 4*0.05 = 0, the ground
  // event flips vy = -(-4 - 0.49)*0.4 = 1.796 and lifts y to the clearance
  State dropping = p.initial;
  dropping.set("released", true);
  dropping.set("angle_adjusted", true);
  dropping.set("y", 0.2);
  dropping.set("vy", -4.0);
  dropping.time = 0.05;
  TickResult r2 = tick(dropping, p, std::nullopt);
  TickRecord rec2 = diff_tick(dropping, r2.state, std::nullopt, r2.fired);
  CHECK(r2.state.numeric("vy") == doctest::Approx(1.796).epsilon(1e-12));
  std::string text2;
  append_trace_text(text2, rec2);
  CHECK(text2 ==
        "t=0.05 decision=wait fired=[collision_ground]\n"
        "  y 0.2 -> 1\n"
        "  vy -4 -> 1.7960000000000003\n"
        "  bounce_count 0 -> 1\n");
}

TEST_SUITE_END();
