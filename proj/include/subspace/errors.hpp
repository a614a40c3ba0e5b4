#pragma once

#include <stdexcept>
#include <string>

namespace subspace {

/// Base type for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input: dimension mismatch, non-finite
/// entries, infeasible parameter combinations.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// All input points were numerically zero; no span can be produced.
class DegenerateSpanError : public Error {
 public:
  using Error::Error;
};

/// An iteration budget ran out before the algorithm succeeded.  Carries the
/// number of iterations performed when the budget tripped.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& what, long long iterations)
      : Error(what), iterations_(iterations) {}
  long long iterations() const noexcept { return iterations_; }

 private:
  long long iterations_;
};

/// Without-replacement tuple sampling has seen every subset.
class SamplerExhaustedError : public Error {
 public:
  using Error::Error;
};

/// A precondition the caller promised does not hold (e.g. a "dependent"
/// tuple turned out to be full rank).
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial subset search exceeded its budget.
class SearchBudgetError : public Error {
 public:
  using Error::Error;
};

/// Too few points remain to continue a clustering run.
class InfeasibleSceneError : public Error {
 public:
  using Error::Error;
};

/// Spectral partitioning cannot produce K groups from the given affinity.
class InfeasiblePartitionError : public Error {
 public:
  using Error::Error;
};

/// A generated scene failed the general-position audit.
class DegenerateSceneError : public Error {
 public:
  using Error::Error;
};

/// File read/write failure; message carries the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Bad experiment configuration (unknown key, unparsable value, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace subspace
