#include "abplan/model.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>
#include <utility>

namespace abplan {

FluentSchema::FluentSchema(std::vector<FluentDecl> decls) : decls_(std::move(decls)) {
  index_.reserve(decls_.size());
  for (size_t i = 0; i < decls_.size(); ++i) {
    auto [it, inserted] = index_.emplace(decls_[i].name, static_cast<int>(i));
    if (!inserted) throw ModelError("duplicate fluent '" + decls_[i].name + "'");
  }
}

int FluentSchema::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

static int require_index(const State& s, std::string_view name) {
  if (!s.schema) throw ModelError("state has no schema");
  const int idx = s.schema->index_of(name);
  if (idx < 0) throw ModelError("unknown fluent '" + std::string(name) + "'");
  return idx;
}

double State::numeric(std::string_view name) const { return values[require_index(*this, name)]; }

bool State::boolean(std::string_view name) const {
  return values[require_index(*this, name)] != 0.0;
}

void State::set(std::string_view name, double v) { values[require_index(*this, name)] = v; }

void State::set(std::string_view name, bool v) {
  values[require_index(*this, name)] = v ? 1.0 : 0.0;
}

bool bit_equal(const State& a, const State& b) {
  if (a.values.size() != b.values.size()) return false;
  if (std::memcmp(&a.time, &b.time, sizeof(double)) != 0) return false;
  return a.values.empty() ||
         std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

namespace {

void resolve_assignments(std::vector<Assignment>& effects, const FluentSchema& schema,
                         const std::string& owner) {
  std::unordered_set<int> targets;
  for (Assignment& a : effects) {
    const int idx = schema.index_of(a.fluent);
    if (idx < 0) {
      throw ModelError(owner + ": assignment to unknown fluent '" + a.fluent + "'");
    }
    if (!targets.insert(idx).second) {
      throw ModelError(owner + ": duplicate assignment to '" + a.fluent + "'");
    }
    a.index = idx;
    a.value = a.value.resolved(schema);
    if ((a.value.kind() == ValueKind::Boolean) !=
        (schema.decl(idx).kind == ValueKind::Boolean)) {
      throw ModelError(owner + ": kind mismatch assigning to '" + a.fluent + "'");
    }
  }
}

// Simultaneous semantics: every RHS is evaluated against `from`, then written.
void apply_assignments(const std::vector<Assignment>& effects, const State& from, State& to) {
  // effects are small; evaluate into a scratch, then commit
  double scratch[16];
  std::vector<double> big;
  double* vals = scratch;
  if (effects.size() > 16) {
    big.resize(effects.size());
    vals = big.data();
  }
  for (size_t i = 0; i < effects.size(); ++i) {
    const Expr& rhs = effects[i].value;
    vals[i] = rhs.kind() == ValueKind::Boolean ? (rhs.eval_boolean(from) ? 1.0 : 0.0)
                                               : rhs.eval_numeric(from);
  }
  for (size_t i = 0; i < effects.size(); ++i) {
    to.values[effects[i].index] = vals[i];
  }
}

}  // namespace

HybridProblem HybridProblem::create(std::shared_ptr<const FluentSchema> schema,
                                    std::vector<double> initial_values,
                                    std::vector<ActionDef> actions, std::vector<EventDef> events,
                                    std::vector<ProcessDef> processes, Expr goal, double dt,
                                    int horizon) {
  if (!schema) throw ModelError("null schema");
  if (!(dt > 0)) throw ModelError("dt must be positive");
  if (horizon < 1) throw ModelError("horizon must be at least 1");
  if (initial_values.size() != schema->size()) {
    throw ModelError("initial state is not dense over the schema");
  }

  HybridProblem p;
  p.schema = schema;
  p.initial = State{schema, std::move(initial_values), 0.0};
  p.dt = dt;
  p.horizon = horizon;

  if (goal.empty() || goal.kind() != ValueKind::Boolean) {
    throw ModelError("goal must be a boolean expression");
  }
  p.goal = goal.resolved(*schema);

  for (ActionDef& a : actions) {
    if (a.precondition.empty() || a.precondition.kind() != ValueKind::Boolean) {
      throw ModelError("action " + a.name + ": precondition must be boolean");
    }
    a.precondition = a.precondition.resolved(*schema);
    resolve_assignments(a.effects, *schema, "action " + a.name);
  }
  p.actions = std::move(actions);

  for (EventDef& e : events) {
    if (e.precondition.empty() || e.precondition.kind() != ValueKind::Boolean) {
      throw ModelError("event " + e.name + ": precondition must be boolean");
    }
    e.precondition = e.precondition.resolved(*schema);
    resolve_assignments(e.effects, *schema, "event " + e.name);
    // Self-retriggering guard (syntactic): the effects must write at least one
    // fluent the precondition reads, otherwise the event can never disable
    // itself and any firing diverges.
    std::vector<std::string> reads;
    e.precondition.collect_fluents(reads);
    const bool touches = std::any_of(e.effects.begin(), e.effects.end(), [&](const Assignment& a) {
      return std::find(reads.begin(), reads.end(), a.fluent) != reads.end();
    });
    if (!touches) {
      throw ModelError("event " + e.name +
                       " cannot falsify its own precondition (no precondition fluent written)");
    }
  }
  p.events = std::move(events);

  for (ProcessDef& pr : processes) {
    if (pr.condition.empty() || pr.condition.kind() != ValueKind::Boolean) {
      throw ModelError("process " + pr.name + ": condition must be boolean");
    }
    pr.condition = pr.condition.resolved(*schema);
    std::unordered_set<int> targets;
    for (Assignment& r : pr.rates) {
      const int idx = schema->index_of(r.fluent);
      if (idx < 0) throw ModelError("process " + pr.name + ": unknown fluent '" + r.fluent + "'");
      if (schema->decl(idx).kind != ValueKind::Numeric) {
        throw ModelError("process " + pr.name + ": flow on boolean fluent '" + r.fluent + "'");
      }
      if (!targets.insert(idx).second) {
        throw ModelError("process " + pr.name + ": duplicate flow on '" + r.fluent + "'");
      }
      if (r.value.empty() || r.value.kind() != ValueKind::Numeric) {
        throw ModelError("process " + pr.name + ": rate must be numeric");
      }
      r.index = idx;
      r.value = r.value.resolved(*schema);
    }
  }
  p.processes = std::move(processes);
  return p;
}

const ActionDef* HybridProblem::find_action(std::string_view name) const {
  for (const ActionDef& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

EventResult fire_events(State state, std::span<const EventDef> events) {
  std::vector<std::string> fired;
  bool any = true;
  while (any) {
    any = false;
    for (const EventDef& e : events) {
      if (!e.precondition.eval_boolean(state)) continue;
      if (static_cast<int>(fired.size()) >= kCascadeCap) {
        const size_t tail_len = std::min<size_t>(fired.size(), 20);
        std::vector<std::string> tail(fired.end() - tail_len, fired.end());
        throw CascadeDivergenceError(
            "event cascade divergence: " + std::to_string(kCascadeCap) +
                " firings without quiescence (last fired: " + e.name + ")",
            std::move(tail));
      }
      apply_assignments(e.effects, state, state);
      fired.push_back(e.name);
      any = true;
      break;  // restart the scan from the first event
    }
  }
  return {std::move(state), std::move(fired)};
}

State advance(State state, std::span<const ProcessDef> processes, double dt) {
  // rates read the pre-step state; deltas are committed afterwards
  std::vector<std::pair<int, double>> deltas;
  std::unordered_set<int> flows;
  for (const ProcessDef& pr : processes) {
    if (!pr.condition.eval_boolean(state)) continue;
    for (const Assignment& r : pr.rates) {
      if (!flows.insert(r.index).second) {
        throw ModelError("fluent '" + r.fluent + "' driven by two active processes (" + pr.name +
                         ")");
      }
      deltas.emplace_back(r.index, r.value.eval_numeric(state) * dt);
    }
  }
  for (auto [idx, d] : deltas) state.values[idx] += d;
  state.time += dt;
  return state;
}

State apply_action(State state, const ActionDef& action) {
  if (!action.precondition.eval_boolean(state)) {
    throw InapplicableActionError("inapplicable action " + action.name);
  }
  apply_assignments(action.effects, state, state);
  return state;
}

TickResult tick(State state, const HybridProblem& problem,
                const std::optional<std::string>& action) {
  std::vector<std::string> fired;
  if (action) {
    const ActionDef* def = problem.find_action(*action);
    if (!def) throw ModelError("unknown action '" + *action + "'");
    state = apply_action(std::move(state), *def);
  }
  EventResult pre = fire_events(std::move(state), problem.events);
  fired = std::move(pre.fired);
  state = advance(std::move(pre.state), problem.processes, problem.dt);
  EventResult post = fire_events(std::move(state), problem.events);
  fired.insert(fired.end(), post.fired.begin(), post.fired.end());
  return {std::move(post.state), std::move(fired)};
}

TickRecord diff_tick(const State& before, const State& after,
                     const std::optional<std::string>& action, std::vector<std::string> fired) {
  TickRecord rec;
  rec.time = before.time;
  rec.decision = action ? *action : "wait";
  rec.fired = std::move(fired);
  const FluentSchema& schema = *before.schema;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (std::memcmp(&before.values[i], &after.values[i], sizeof(double)) == 0) continue;
    rec.changes.push_back({schema.decl(i).name, before.values[i], after.values[i],
                           schema.decl(i).kind == ValueKind::Boolean});
  }
  return rec;
}

static void append_value(std::string& out, double v, bool boolean) {
  if (boolean) {
    out += v != 0.0 ? "true" : "false";
  } else {
    out += format_number(v);
  }
}

void append_trace_text(std::string& out, const TickRecord& rec) {
  out += "t=";
  out += format_number(rec.time);
  out += " decision=";
  out += rec.decision;
  out += " fired=[";
  for (size_t i = 0; i < rec.fired.size(); ++i) {
    if (i) out += ",";
    out += rec.fired[i];
  }
  out += "]\n";
  for (const TickRecord::Change& c : rec.changes) {
    out += "  ";
    out += c.fluent;
    out += " ";
    append_value(out, c.before, c.boolean);
    out += " -> ";
    append_value(out, c.after, c.boolean);
    out += "\n";
  }
}

}  // namespace abplan
