#pragma once

#include <stdexcept>
#include <string>

namespace cyclesampler {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller passed an argument that violates a documented precondition
/// (out-of-range vertex id, duplicate edge, malformed constraint, ...).
class argument_error : public error {
 public:
  explicit argument_error(const std::string& what) : error(what) {}
};

/// A file could not be read, written, or parsed.  The message carries the
/// path and, for parse failures, the 1-based line number.
class io_error : public error {
 public:
  explicit io_error(const std::string& what) : error(what) {}
};

/// The constraint system admits no assignment: the observed weights violate
/// a bound, or a slack interval excludes its required starting value.  The
/// message names the offending edge or vertex.
class infeasible_error : public error {
 public:
  explicit infeasible_error(const std::string& what) : error(what) {}
};

/// An internal consistency check failed.  Seeing this means a bug in the
/// library (or memory corruption), never bad user input.
class invariant_error : public error {
 public:
  explicit invariant_error(const std::string& what) : error(what) {}
};

/// A request was refused because it would exceed an explicit resource
/// guard (dense-solver size limit, generator enumeration budget,
/// rejection-sampler acceptance floor).  The message states the limit and
/// the observed value so the caller can decide how to proceed.
class refusal_error : public error {
 public:
  explicit refusal_error(const std::string& what) : error(what) {}
};

}  // namespace cyclesampler
