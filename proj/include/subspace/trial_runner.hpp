#pragma once

#include <exception>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "subspace/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subspace {

/// Serial reference for run_trials: trial_fn(t) for t = 0..trials-1, results
/// in trial order.
template <typename Fn>
auto run_trials_serial(int trials, Fn&& trial_fn)
    -> std::vector<std::invoke_result_t<Fn&, int>> {
  using T = std::invoke_result_t<Fn&, int>;
  if (trials < 0) throw InvalidInputError("run_trials: negative trial count");
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) out.push_back(trial_fn(t));
  return out;
}

/// Runs independent trials, possibly across OpenMP threads, and returns the
/// results ordered by trial index.  Each trial must derive all randomness
/// from its own index (e.g. one RngStream per trial), which makes the output
/// identical to run_trials_serial for every worker count.  If trials throw,
/// the exception from the lowest-indexed failing trial is rethrown.
template <typename Fn>
auto run_trials(int trials, int workers, Fn&& trial_fn)
    -> std::vector<std::invoke_result_t<Fn&, int>> {
  using T = std::invoke_result_t<Fn&, int>;
  if (trials < 0) throw InvalidInputError("run_trials: negative trial count");
  if (workers < 1) throw InvalidInputError("run_trials: workers must be >= 1");

#ifdef _OPENMP
  if (workers > 1 && trials > 1) {
    std::vector<std::optional<T>> slots(static_cast<std::size_t>(trials));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int t = 0; t < trials; ++t) {
      try {
        slots[static_cast<std::size_t>(t)].emplace(trial_fn(t));
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
    for (int t = 0; t < trials; ++t)
      if (errors[static_cast<std::size_t>(t)])
        std::rethrow_exception(errors[static_cast<std::size_t>(t)]);
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t)
      out.push_back(std::move(*slots[static_cast<std::size_t>(t)]));
    return out;
  }
#else
  (void)workers;
#endif
  return run_trials_serial(trials, std::forward<Fn>(trial_fn));
}

}  // namespace subspace
