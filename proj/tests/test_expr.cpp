#include <cmath>
#include <cstring>
#include <numbers>

#include <doctest.h>

#include "abplan/expr.hpp"
#include "abplan/model.hpp"
#include "helpers.hpp"

using namespace abplan;
using abplan::test::make_state;

TEST_SUITE_BEGIN("expr");

TEST_CASE("literals evaluate to themselves") {
  State s = make_state({});
  CHECK(Expr::num(3).eval_numeric(s) == 3.0);
  CHECK(Expr::boolean(true).eval_boolean(s));
  CHECK_FALSE(Expr::boolean(false).eval_boolean(s));
}

TEST_CASE("arithmetic over fluents") {
  State s = make_state({{"x", 4.0}});
  CHECK(Expr::mul(Expr::num(2), Expr::fluent("x")).eval_numeric(s) == 8.0);
  CHECK(Expr::add(Expr::fluent("x"), Expr::num(1)).eval_numeric(s) == 5.0);
  CHECK(Expr::neg(Expr::fluent("x")).eval_numeric(s) == -4.0);
  CHECK(Expr::sqrt(Expr::num(9)).eval_numeric(s) == 3.0);
}

TEST_CASE("division by zero names the offending subexpression") {
  State s = make_state({{"y", 0.0}});
  const Expr e = Expr::div(Expr::num(1), Expr::fluent("y"));
  CHECK_THROWS_WITH_AS(e.eval_numeric(s), "division by zero in (/ 1 y)", EvalError);
}

TEST_CASE("unknown fluent is a model error") {
  State s = make_state({{"x", 1.0}});
  CHECK_THROWS_AS(Expr::fluent("nope").eval_numeric(s), ModelError);
  FluentSchema schema({{"x", ValueKind::Numeric, Unit::Dimensionless}});
  CHECK_THROWS_AS(Expr::fluent("nope").resolved(schema), ModelError);
}

TEST_CASE("well-typedness is enforced at construction") {
  CHECK_THROWS_AS(Expr::conj(Expr::num(1), Expr::boolean(true)), ModelError);
  CHECK_THROWS_AS(Expr::le(Expr::boolean(true), Expr::num(1)), ModelError);
  CHECK_THROWS_AS(Expr::negation(Expr::num(1)), ModelError);
  CHECK_THROWS_AS(Expr::add(Expr::boolean(true), Expr::num(1)), ModelError);
  CHECK_THROWS_AS(Expr::approx_sin(Expr::boolean(true)), ModelError);
}

TEST_CASE("declared fluent kind is checked on resolve") {
  FluentSchema schema({{"flag", ValueKind::Boolean, Unit::Dimensionless}});
  CHECK_THROWS_AS(Expr::fluent("flag", ValueKind::Numeric).resolved(schema), ModelError);
  CHECK_NOTHROW(Expr::bool_fluent("flag").resolved(schema));
}

TEST_CASE("approx_sin hand-evaluated anchors") {
  // 4*90*90 / (40500 - 8100) = 32400/32400
  CHECK(approx_sin_deg(90.0) == 1.0);
  // 4*30*150 / (40500 - 4500) = 18000/36000
  CHECK(approx_sin_deg(30.0) == 0.5);
  CHECK(approx_sin_deg(0.0) == 0.0);
  CHECK(approx_sin_deg(180.0) == 0.0);
  CHECK_THROWS_AS(approx_sin_deg(-0.5), DomainError);
  CHECK_THROWS_AS(approx_sin_deg(180.5), DomainError);
}

TEST_CASE("approx_cos hand-evaluated anchors") {
  CHECK(approx_cos_rad(0.0) == 1.0);
  CHECK(approx_cos_rad(0.1) == doctest::Approx(0.995).epsilon(1e-12));
  // 1 - 1.0472^2/2 = 1 - 1.09662784/2
  CHECK(approx_cos_rad(1.0472) == doctest::Approx(0.45168608).epsilon(1e-9));
  CHECK_THROWS_AS(approx_cos_rad(1.6), DomainError);
  CHECK_THROWS_AS(approx_cos_rad(-1.6), DomainError);
}

TEST_CASE("approx_sin symmetry is exact on representable pairs") {
  // theta = k/8 keeps both theta and 180-theta exactly representable
  for (int k = 0; k <= 1440; ++k) {
    const double theta = k * 0.125;
    const double a = approx_sin_deg(theta);
    const double b = approx_sin_deg(180.0 - theta);
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
  }
}

TEST_CASE("approx_sin stays within the known error bound") {
  double worst = 0;
  for (int k = 0; k <= 1800; ++k) {
    const double theta = k * 0.1;
    const double err = std::abs(approx_sin_deg(theta) - std::sin(theta * std::numbers::pi / 180.0));
    worst = std::max(worst, err);
  }
  CHECK(worst < 0.002);
}

TEST_CASE("approx_cos decreases monotonically on [0, pi/2]") {
  double prev = approx_cos_rad(0.0);
  for (int k = 1; k <= 1570; ++k) {
    const double cur = approx_cos_rad(k * 0.001);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("evaluation is pure and repeatable") {
  State s = make_state({{"x", 0.1}, {"y", -3.5}}, {{"p", true}});
  const State copy = s;
  const Expr e = Expr::conj(Expr::gt(Expr::add(Expr::fluent("x"), Expr::fluent("y")), Expr::num(-4)),
                            Expr::bool_fluent("p"));
  const bool r1 = e.eval_boolean(s);
  const bool r2 = e.eval_boolean(s);
  CHECK(r1 == r2);
  CHECK(bit_equal(s, copy));

  const Expr n = Expr::approx_sin(Expr::mul(Expr::fluent("x"), Expr::num(100)));
  const double v1 = n.eval_numeric(s);
  const double v2 = n.eval_numeric(s);
  CHECK(std::memcmp(&v1, &v2, sizeof(double)) == 0);
  CHECK(bit_equal(s, copy));
}

TEST_CASE("debug form prints s-expressions") {
  const Expr e = Expr::ge(Expr::fluent("pigs_killed"), Expr::num(1));
  CHECK(e.str() == "(>= pigs_killed 1)");
  const Expr f = Expr::negation(Expr::bool_fluent("angle_adjusted"));
  CHECK(f.str() == "(not angle_adjusted)");
  CHECK(Expr::num(0.5).str() == "0.5");
}

TEST_SUITE_END();
