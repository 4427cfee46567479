#pragma once

#include <stdexcept>

namespace cascade_pricer {

/** Malformed input text (edge lists, model configs, CLI values). */
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Violated precondition or type invariant. */
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** Instance too large for an exhaustive routine. */
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cascade_pricer
