#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace abplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed model: unknown fluents, type violations, broken invariants.
struct ModelError : Error {
  using Error::Error;
};

// Runtime expression failure (e.g. division by zero).
struct EvalError : Error {
  using Error::Error;
};

// Argument outside a function's supported range.
struct DomainError : Error {
  using Error::Error;
};

// Action applied in a state where its precondition is false.
struct InapplicableActionError : Error {
  using Error::Error;
};

// Event fixpoint exceeded the cascade cap; carries the tail of the firing log.
struct CascadeDivergenceError : Error {
  CascadeDivergenceError(const std::string& msg, std::vector<std::string> tail)
      : Error(msg), log_tail(std::move(tail)) {}
  std::vector<std::string> log_tail;
};

struct ConfigError : Error {
  using Error::Error;
};

// Bad user input: level documents, plan files, CLI arguments.
struct InputError : Error {
  using Error::Error;
};

struct GenerationError : Error {
  using Error::Error;
};

}  // namespace abplan
