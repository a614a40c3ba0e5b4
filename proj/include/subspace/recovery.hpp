#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "subspace/linalg.hpp"
#include "subspace/rng.hpp"
#include "subspace/sampling.hpp"

namespace subspace {

struct RansacConfig {
  double rel_tol = kDefaultRelTol;
  double membership_tol = kDefaultMembershipTol;
  /// Hard iteration cap; unset means unbounded for with-replacement
  /// sampling and "every subset once" for without-replacement sampling.
  std::optional<long long> max_iterations;
  ReplacementMode replacement = ReplacementMode::with_replacement;
};

struct RecoveryResult {
  Subspace subspace;
  std::vector<int> inlier_indices;  // sorted
  long long iterations = 0;
  double elapsed_s = 0.0;
};

/// Subspace recovery with known dimension: draw (d+1)-tuples until one is
/// linearly dependent, then return its span and every point within
/// membership_tol of it.  Points sit one per row of an n x p matrix.
RecoveryResult ransac_recover(const Eigen::MatrixXd& points, int d,
                              const RansacConfig& config, RngStream& rng);

/// Positions (within the tuple) of the columns that participate in the
/// rank deficiency: the union of supports of a null-space basis of the
/// p x q tuple matrix.  The tuple must be dependent.
std::vector<int> extract_dependent_subset(const Eigen::MatrixXd& tuple,
                                          double rel_tol = kDefaultRelTol);

/// Dimension-free recovery: draw full p-tuples until one is dependent, then
/// span the extracted dependent subset.  Requires n > p; never reads a
/// subspace dimension.
RecoveryResult hardt_moitra_recover(const Eigen::MatrixXd& points,
                                    const RansacConfig& config, RngStream& rng);

/// Recovery with unknown dimension: sweep candidate dimensions 1..p-1,
/// spending budget_per_dim draws of (d+1)-tuples on each, restarting the
/// sweep until something succeeds.  config.max_iterations caps the total
/// draw count across the whole escalation.
RecoveryResult ransac_recover_unknown_dimension(const Eigen::MatrixXd& points,
                                                long long budget_per_dim,
                                                const RansacConfig& config,
                                                RngStream& rng);

}  // namespace subspace
