#pragma once

#include <stdexcept>
#include <string>

namespace estgraph {

// Base for everything this library throws on purpose. what() carries context.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// graph construction / parsing
struct EmptyGraphError : Error {
  explicit EmptyGraphError(const std::string& msg = "graph has no edges") : Error(msg) {}
};
struct ParseError : Error {
  ParseError(size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  size_t line_number;
};
struct SpecError : Error {
  explicit SpecError(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// budgeted access
struct BudgetExhaustedError : Error {
  explicit BudgetExhaustedError(const std::string& msg = "query budget exhausted") : Error(msg) {}
};

// walkers
struct IsolatedNodeError : Error {
  explicit IsolatedNodeError(const std::string& msg = "walk reached a degree-0 node") : Error(msg) {}
};
struct DMaxTooSmallError : Error {
  explicit DMaxTooSmallError(const std::string& msg = "d_max below an encountered degree") : Error(msg) {}
};
struct NonReturningError : Error {
  explicit NonReturningError(const std::string& msg = "walk exceeded the return-step cap") : Error(msg) {}
};

// estimators
struct CollisionFreeError : Error {
  explicit CollisionFreeError(const std::string& msg = "samples share no node") : Error(msg) {}
};
struct EmptySampleError : Error {
  explicit EmptySampleError(const std::string& msg = "empty sample") : Error(msg) {}
};

// iterative solvers
struct NonConvergenceError : Error {
  explicit NonConvergenceError(const std::string& msg = "iteration did not converge") : Error(msg) {}
};

// prompt generation / answer parsing
struct EmptyWalkError : Error {
  explicit EmptyWalkError(const std::string& msg = "walk has no steps") : Error(msg) {}
};
struct EmptyStatsError : Error {
  explicit EmptyStatsError(const std::string& msg = "no walk statistics given") : Error(msg) {}
};
struct UnknownTaskError : Error {
  explicit UnknownTaskError(const std::string& msg = "unknown task") : Error(msg) {}
};
struct UnparsableError : Error {
  explicit UnparsableError(const std::string& msg = "response has no parsable answer") : Error(msg) {}
};

// external agent processes
struct ProcessError : Error {
  explicit ProcessError(const std::string& msg) : Error(msg) {}
};
struct TimeoutError : Error {
  explicit TimeoutError(const std::string& msg = "agent timed out") : Error(msg) {}
};

}  // namespace estgraph
