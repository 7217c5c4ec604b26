#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abplan/expr.hpp"

namespace abplan {

// Firing-log length at which an event fixpoint is declared divergent.
inline constexpr int kCascadeCap = 1000;

enum class Unit : uint8_t { Meters, MetersPerSecond, Degrees, Count, Dimensionless };

struct FluentDecl {
  std::string name;
  ValueKind kind = ValueKind::Numeric;
  Unit unit = Unit::Dimensionless;
};

// Ordered fluent declarations; the order fixes state layout, evaluation and
// hashing for the lifetime of the grounded problem.
class FluentSchema {
 public:
  FluentSchema() = default;
  explicit FluentSchema(std::vector<FluentDecl> decls);  // ModelError on duplicates

  int index_of(std::string_view name) const;  // -1 if absent
  const FluentDecl& decl(size_t i) const { return decls_[i]; }
  size_t size() const { return decls_.size(); }
  const std::vector<FluentDecl>& decls() const { return decls_; }

 private:
  std::vector<FluentDecl> decls_;
  std::unordered_map<std::string, int> index_;
};

// Dense assignment of values to every fluent at a time instant. Booleans are
// stored as 0/1 doubles; the schema knows the declared kind.
struct State {
  std::shared_ptr<const FluentSchema> schema;
  std::vector<double> values;
  double time = 0;

  double numeric(std::string_view name) const;
  bool boolean(std::string_view name) const;
  void set(std::string_view name, double v);
  void set(std::string_view name, bool v);
};

// Bitwise equality over values and time (exactness matters for determinism tests).
bool bit_equal(const State& a, const State& b);

struct Assignment {
  std::string fluent;
  int index = -1;  // resolved against the schema by HybridProblem::create
  Expr value;
};

struct ActionDef {
  std::string name;
  Expr precondition;                   // boolean
  std::vector<Assignment> effects;     // simultaneous: RHS read the pre-action state
};

struct EventDef {
  std::string name;
  Expr precondition;
  std::vector<Assignment> effects;
};

struct ProcessDef {
  std::string name;
  Expr condition;
  std::vector<Assignment> rates;       // d(fluent)/dt = rate while condition holds
};

// Grounded hybrid automaton: instantaneous actions, must-fire events applied to
// fixpoint in declaration order, continuous flows advanced by explicit Euler.
struct HybridProblem {
  std::shared_ptr<const FluentSchema> schema;
  State initial;
  std::vector<ActionDef> actions;
  std::vector<EventDef> events;     // declaration order = firing priority
  std::vector<ProcessDef> processes;
  Expr goal;                        // boolean
  double dt = 0.05;
  int horizon = 1200;

  // Validating constructor: resolves every expression against the schema,
  // type-checks effects, rejects duplicate assignment targets and events whose
  // effects cannot falsify their own precondition (syntactic guard).
  static HybridProblem create(std::shared_ptr<const FluentSchema> schema,
                              std::vector<double> initial_values,
                              std::vector<ActionDef> actions,
                              std::vector<EventDef> events,
                              std::vector<ProcessDef> processes,
                              Expr goal, double dt, int horizon);

  const ActionDef* find_action(std::string_view name) const;
};

struct EventResult {
  State state;
  std::vector<std::string> fired;
};

// Scan events in declaration order, fire the first enabled one, restart the
// scan; stop when quiescent. CascadeDivergenceError past kCascadeCap firings.
EventResult fire_events(State state, std::span<const EventDef> events);

// One explicit Euler step over every active process; rates are evaluated
// against the pre-step state. ModelError if two active processes drive the
// same fluent. Advances time by dt.
State advance(State state, std::span<const ProcessDef> processes, double dt);

// InapplicableActionError if the precondition is false.
State apply_action(State state, const ActionDef& action);

struct TickResult {
  State state;
  std::vector<std::string> fired;  // both event phases, in firing order
};

// Canonical happening order for one tick: optional action, events to
// quiescence, flow by dt, events to quiescence.
TickResult tick(State state, const HybridProblem& problem,
                const std::optional<std::string>& action);

// One replayed tick for trace dumps.
struct TickRecord {
  double time = 0;                  // time at the start of the tick
  std::string decision;             // "wait" or the action name
  std::vector<std::string> fired;
  struct Change {
    std::string fluent;
    double before = 0, after = 0;
    bool boolean = false;
  };
  std::vector<Change> changes;
};

TickRecord diff_tick(const State& before, const State& after,
                     const std::optional<std::string>& action,
                     std::vector<std::string> fired);

// Stable line-oriented dump: "t=<time> decision=<wait|name> fired=[...]"
// followed by one indented line per changed fluent.
void append_trace_text(std::string& out, const TickRecord& rec);

}  // namespace abplan
