#include "abplan/expr.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "abplan/model.hpp"

namespace abplan {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double approx_sin_deg(double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw DomainError("approx_sin argument " + format_number(theta_deg) +
                      " outside [0, 180] degrees");
  }
  const double p = theta_deg * (180.0 - theta_deg);
  return 4.0 * p / (40500.0 - p);
}

double approx_cos_rad(double theta_rad) {
  constexpr double half_pi = 1.5707963267948966;
  if (!(theta_rad >= -half_pi && theta_rad <= half_pi)) {
    throw DomainError("approx_cos argument " + format_number(theta_rad) +
                      " outside [-pi/2, pi/2] radians");
  }
  return 1.0 - theta_rad * theta_rad / 2.0;
}

Expr Expr::num(double v) {
  Expr e;
  e.nodes_.push_back({Op::Num, ValueKind::Numeric, -1, -1, v});
  return e;
}

Expr Expr::boolean(bool v) {
  Expr e;
  e.nodes_.push_back({Op::Bool, ValueKind::Boolean, -1, -1, v ? 1.0 : 0.0});
  return e;
}

Expr Expr::fluent(std::string name, ValueKind kind) {
  Expr e;
  e.names_.push_back(std::move(name));
  e.nodes_.push_back({Op::Fluent, kind, 0, -1, 0});
  return e;
}

int32_t Expr::append(const Expr& child) {
  const int32_t node_offset = static_cast<int32_t>(nodes_.size());
  const int32_t name_offset = static_cast<int32_t>(names_.size());
  names_.insert(names_.end(), child.names_.begin(), child.names_.end());
  for (Node n : child.nodes_) {
    if (n.op == Op::Fluent) {
      n.a += name_offset;
    } else {
      if (n.a >= 0) n.a += node_offset;
      if (n.b >= 0) n.b += node_offset;
    }
    nodes_.push_back(n);
  }
  return root();
}

ValueKind Expr::kind() const {
  if (nodes_.empty()) throw ModelError("empty expression");
  return nodes_.back().kind;
}

Expr Expr::unary(Op op, ValueKind child_kind, ValueKind result, Expr x, const char* what) {
  if (x.empty() || x.kind() != child_kind) {
    throw ModelError(std::string(what) + " over ill-typed operand" +
                     (x.empty() ? "" : ": " + x.str()));
  }
  Expr e;
  const int32_t a = e.append(x);
  e.nodes_.push_back({op, result, a, -1, 0});
  return e;
}

Expr Expr::binary(Op op, ValueKind child_kind, ValueKind result, Expr a, Expr b,
                  const char* what) {
  if (a.empty() || b.empty() || a.kind() != child_kind || b.kind() != child_kind) {
    throw ModelError(std::string(what) + " over ill-typed operands");
  }
  Expr e;
  const int32_t l = e.append(a);
  const int32_t r = e.append(b);
  e.nodes_.push_back({op, result, l, r, 0});
  return e;
}

Expr Expr::neg(Expr x) {
  return unary(Op::Neg, ValueKind::Numeric, ValueKind::Numeric, std::move(x), "negation");
}
Expr Expr::sqrt(Expr x) {
  return unary(Op::Sqrt, ValueKind::Numeric, ValueKind::Numeric, std::move(x), "sqrt");
}
Expr Expr::add(Expr a, Expr b) {
  return binary(Op::Add, ValueKind::Numeric, ValueKind::Numeric, std::move(a), std::move(b), "+");
}
Expr Expr::sub(Expr a, Expr b) {
  return binary(Op::Sub, ValueKind::Numeric, ValueKind::Numeric, std::move(a), std::move(b), "-");
}
Expr Expr::mul(Expr a, Expr b) {
  return binary(Op::Mul, ValueKind::Numeric, ValueKind::Numeric, std::move(a), std::move(b), "*");
}
Expr Expr::div(Expr a, Expr b) {
  return binary(Op::Div, ValueKind::Numeric, ValueKind::Numeric, std::move(a), std::move(b), "/");
}
Expr Expr::lt(Expr a, Expr b) {
  return binary(Op::Lt, ValueKind::Numeric, ValueKind::Boolean, std::move(a), std::move(b), "<");
}
Expr Expr::le(Expr a, Expr b) {
  return binary(Op::Le, ValueKind::Numeric, ValueKind::Boolean, std::move(a), std::move(b), "<=");
}
Expr Expr::eq(Expr a, Expr b) {
  return binary(Op::Eq, ValueKind::Numeric, ValueKind::Boolean, std::move(a), std::move(b), "=");
}
Expr Expr::ge(Expr a, Expr b) {
  return binary(Op::Ge, ValueKind::Numeric, ValueKind::Boolean, std::move(a), std::move(b), ">=");
}
Expr Expr::gt(Expr a, Expr b) {
  return binary(Op::Gt, ValueKind::Numeric, ValueKind::Boolean, std::move(a), std::move(b), ">");
}
Expr Expr::conj(Expr a, Expr b) {
  return binary(Op::And, ValueKind::Boolean, ValueKind::Boolean, std::move(a), std::move(b), "and");
}
Expr Expr::disj(Expr a, Expr b) {
  return binary(Op::Or, ValueKind::Boolean, ValueKind::Boolean, std::move(a), std::move(b), "or");
}
Expr Expr::negation(Expr a) {
  return unary(Op::Not, ValueKind::Boolean, ValueKind::Boolean, std::move(a), "not");
}
Expr Expr::approx_sin(Expr theta_deg) {
  return unary(Op::ApproxSin, ValueKind::Numeric, ValueKind::Numeric, std::move(theta_deg),
               "approx_sin");
}
Expr Expr::approx_cos(Expr theta_rad) {
  return unary(Op::ApproxCos, ValueKind::Numeric, ValueKind::Numeric, std::move(theta_rad),
               "approx_cos");
}

Expr Expr::resolved(const FluentSchema& schema) const {
  Expr e = *this;
  for (Node& n : e.nodes_) {
    if (n.op != Op::Fluent) continue;
    const std::string& name = e.names_[n.a];
    const int idx = schema.index_of(name);
    if (idx < 0) throw ModelError("unknown fluent '" + name + "'");
    if (schema.decl(idx).kind != n.kind) {
      throw ModelError("fluent '" + name + "' referenced as " +
                       (n.kind == ValueKind::Numeric ? "numeric" : "boolean") +
                       " but declared otherwise");
    }
    n.b = idx;
  }
  return e;
}

double Expr::fluent_value(const Node& n, const State& state) const {
  if (n.b >= 0) return state.values[n.b];
  const std::string& name = names_[n.a];
  if (!state.schema) throw ModelError("state has no schema for fluent lookup");
  const int idx = state.schema->index_of(name);
  if (idx < 0) throw ModelError("unknown fluent '" + name + "'");
  return state.values[idx];
}

double Expr::eval_num(int32_t idx, const State& state) const {
  const Node& n = nodes_[idx];
  switch (n.op) {
    case Op::Num:
      return n.value;
    case Op::Fluent:
      return fluent_value(n, state);
    case Op::Neg:
      return -eval_num(n.a, state);
    case Op::Add:
      return eval_num(n.a, state) + eval_num(n.b, state);
    case Op::Sub:
      return eval_num(n.a, state) - eval_num(n.b, state);
    case Op::Mul:
      return eval_num(n.a, state) * eval_num(n.b, state);
    case Op::Div: {
      const double num = eval_num(n.a, state);
      const double den = eval_num(n.b, state);
      if (den == 0.0) throw EvalError("division by zero in " + str(idx));
      return num / den;
    }
    case Op::Sqrt: {
      const double v = eval_num(n.a, state);
      if (v < 0.0) throw DomainError("sqrt of negative value in " + str(idx));
      return std::sqrt(v);
    }
    case Op::ApproxSin:
      return approx_sin_deg(eval_num(n.a, state));
    case Op::ApproxCos:
      return approx_cos_rad(eval_num(n.a, state));
    default:
      throw ModelError("boolean node evaluated as numeric: " + str(idx));
  }
}

bool Expr::eval_bool(int32_t idx, const State& state) const {
  const Node& n = nodes_[idx];
  switch (n.op) {
    case Op::Bool:
      return n.value != 0.0;
    case Op::Fluent:
      return fluent_value(n, state) != 0.0;
    case Op::Lt:
      return eval_num(n.a, state) < eval_num(n.b, state);
    case Op::Le:
      return eval_num(n.a, state) <= eval_num(n.b, state);
    case Op::Eq:
      return eval_num(n.a, state) == eval_num(n.b, state);
    case Op::Ge:
      return eval_num(n.a, state) >= eval_num(n.b, state);
    case Op::Gt:
      return eval_num(n.a, state) > eval_num(n.b, state);
    case Op::And:
      return eval_bool(n.a, state) && eval_bool(n.b, state);
    case Op::Or:
      return eval_bool(n.a, state) || eval_bool(n.b, state);
    case Op::Not:
      return !eval_bool(n.a, state);
    default:
      throw ModelError("numeric node evaluated as boolean: " + str(idx));
  }
}

Value Expr::eval(const State& state) const {
  if (nodes_.empty()) throw ModelError("empty expression");
  if (kind() == ValueKind::Numeric) return eval_num(root(), state);
  return eval_bool(root(), state);
}

double Expr::eval_numeric(const State& state) const {
  if (empty() || kind() != ValueKind::Numeric) {
    throw ModelError("expression is not numeric");
  }
  return eval_num(root(), state);
}

bool Expr::eval_boolean(const State& state) const {
  if (empty() || kind() != ValueKind::Boolean) {
    throw ModelError("expression is not boolean");
  }
  return eval_bool(root(), state);
}

std::string Expr::str(int32_t idx) const {
  const Node& n = nodes_[idx];
  auto bin = [&](const char* sym) {
    return "(" + std::string(sym) + " " + str(n.a) + " " + str(n.b) + ")";
  };
  auto un = [&](const char* sym) { return "(" + std::string(sym) + " " + str(n.a) + ")"; };
  switch (n.op) {
    case Op::Num:
      return format_number(n.value);
    case Op::Bool:
      return n.value != 0.0 ? "true" : "false";
    case Op::Fluent:
      return names_[n.a];
    case Op::Neg:
      return un("-");
    case Op::Add:
      return bin("+");
    case Op::Sub:
      return bin("-");
    case Op::Mul:
      return bin("*");
    case Op::Div:
      return bin("/");
    case Op::Sqrt:
      return un("sqrt");
    case Op::Lt:
      return bin("<");
    case Op::Le:
      return bin("<=");
    case Op::Eq:
      return bin("=");
    case Op::Ge:
      return bin(">=");
    case Op::Gt:
      return bin(">");
    case Op::And:
      return bin("and");
    case Op::Or:
      return bin("or");
    case Op::Not:
      return un("not");
    case Op::ApproxSin:
      return un("approx_sin");
    case Op::ApproxCos:
      return un("approx_cos");
  }
  return "?";
}

std::string Expr::str() const {
  if (nodes_.empty()) return "()";
  return str(root());
}

void Expr::collect_fluents(std::vector<std::string>& out) const {
  for (const Node& n : nodes_) {
    if (n.op == Op::Fluent) out.push_back(names_[n.a]);
  }
}

}  // namespace abplan
