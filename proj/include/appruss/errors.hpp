#pragma once

#include <stdexcept>
#include <string>

namespace appruss {

/// Base class for all appruss-specific failures.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Planner gave up: iteration budget exhausted or workspace clamp prevents escape.
struct PlanningFailed : Error {
  explicit PlanningFailed(const std::string& msg) : Error(msg) {}
};

/// Path endpoints violate planner preconditions (coincident or inside clearance).
struct InvalidEndpoints : Error {
  explicit InvalidEndpoints(const std::string& msg) : Error(msg) {}
};

/// Iterative IK ran out of iterations without meeting tolerances.
struct NotConverged : Error {
  explicit NotConverged(const std::string& msg) : Error(msg) {}
};

/// IK target lies beyond the arm's workspace radius.
struct Unreachable : Error {
  explicit Unreachable(const std::string& msg) : Error(msg) {}
};

/// No observation matched the requested marker id.
struct TargetNotFound : Error {
  explicit TargetNotFound(const std::string& msg) : Error(msg) {}
};

/// Scenario file could not be parsed.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Scenario file parsed but violates an invariant; message names the field.
struct ValidationError : Error {
  ValidationError(const std::string& field, const std::string& msg)
      : Error(field + ": " + msg), field(field) {}
  std::string field;
};

}  // namespace appruss
