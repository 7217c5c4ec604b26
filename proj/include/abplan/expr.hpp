#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "abplan/errors.hpp"

namespace abplan {

class FluentSchema;
struct State;

enum class ValueKind : uint8_t { Numeric, Boolean };

using Value = std::variant<double, bool>;

// Shortest round-trip decimal form of a double ("1", "0.5", "3.2000000000000002").
std::string format_number(double v);

// Bhaskara's rational approximation of sine; argument in degrees, valid on [0, 180].
double approx_sin_deg(double theta_deg);

// Small-angle approximation of cosine (1 - theta^2/2); argument in radians,
// valid on [-pi/2, pi/2].
double approx_cos_rad(double theta_rad);

// Immutable, side-effect-free expression tree over the fluents of a State.
//
// Well-typedness (arithmetic and comparisons over numeric children, connectives
// over boolean children) is enforced by the factory functions at construction.
// Fluent references are by name; resolved() binds them to schema indices for
// fast evaluation. Unresolved references are looked up by name at eval time
// through the State's schema.
class Expr {
 public:
  enum class Op : uint8_t {
    Num, Bool, Fluent,
    Neg, Add, Sub, Mul, Div, Sqrt,
    Lt, Le, Eq, Ge, Gt,
    And, Or, Not,
    ApproxSin, ApproxCos,
  };

  Expr() = default;

  static Expr num(double v);
  static Expr boolean(bool v);
  static Expr fluent(std::string name, ValueKind kind = ValueKind::Numeric);
  static Expr bool_fluent(std::string name) { return fluent(std::move(name), ValueKind::Boolean); }

  static Expr neg(Expr x);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr sqrt(Expr x);

  static Expr lt(Expr a, Expr b);
  static Expr le(Expr a, Expr b);
  static Expr eq(Expr a, Expr b);
  static Expr ge(Expr a, Expr b);
  static Expr gt(Expr a, Expr b);

  static Expr conj(Expr a, Expr b);
  static Expr disj(Expr a, Expr b);
  static Expr negation(Expr a);

  static Expr approx_sin(Expr theta_deg);
  static Expr approx_cos(Expr theta_rad);

  bool empty() const { return nodes_.empty(); }
  ValueKind kind() const;

  // Copy with every fluent reference bound to its schema index.
  // ModelError on unknown names or declared-kind mismatches.
  Expr resolved(const FluentSchema& schema) const;

  Value eval(const State& state) const;
  double eval_numeric(const State& state) const;
  bool eval_boolean(const State& state) const;

  // S-expression debug form, e.g. "(>= pigs_killed 1)".
  std::string str() const;

  // Names of all referenced fluents (with duplicates).
  void collect_fluents(std::vector<std::string>& out) const;

 private:
  struct Node {
    Op op;
    ValueKind kind;
    int32_t a = -1;  // left child, or name-table index for Fluent
    int32_t b = -1;  // right child, or resolved schema index for Fluent
    double value = 0;
  };

  int32_t append(const Expr& child);  // merge child nodes, return new root index
  int32_t root() const { return static_cast<int32_t>(nodes_.size()) - 1; }

  static Expr unary(Op op, ValueKind child_kind, ValueKind result, Expr x, const char* what);
  static Expr binary(Op op, ValueKind child_kind, ValueKind result, Expr a, Expr b,
                     const char* what);

  double eval_num(int32_t idx, const State& state) const;
  bool eval_bool(int32_t idx, const State& state) const;
  double fluent_value(const Node& n, const State& state) const;
  std::string str(int32_t idx) const;

  std::vector<Node> nodes_;
  std::vector<std::string> names_;
};

}  // namespace abplan
