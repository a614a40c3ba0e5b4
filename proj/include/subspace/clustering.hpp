#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "subspace/recovery.hpp"

namespace subspace {

struct ClusteringResult {
  std::vector<Subspace> subspaces;
  /// Per-point group label: 1..K in discovery order, 0 for points never
  /// claimed by a subspace.
  std::vector<int> labels;
  long long iterations = 0;
  /// Tuple draws spent per discovery: one entry per recovery stage (for the
  /// batch-producing variant, one entry per successful draw, which may emit
  /// several subspaces).
  std::vector<long long> stage_iterations;
  double elapsed_s = 0.0;
};

/// K-stage clustering with known dimension: recover one subspace from the
/// remaining points, remove its members, repeat.  config.max_iterations
/// caps the total tuple draws across all stages.
ClusteringResult ransac_cluster(const Eigen::MatrixXd& points, int d, int K,
                                const RansacConfig& config, RngStream& rng);

/// Smallest dependent subset of the tuple's columns, searched by cardinality
/// (2 upward) and lexicographic index order within each cardinality.
/// `budget` caps the number of subsets examined.
std::vector<int> minimum_dependent_subset(const Eigen::MatrixXd& tuple,
                                          double rel_tol = kDefaultRelTol,
                                          long long budget = 1LL << 20);

/// Dimension-free clustering: draw p-tuples from remaining points; from a
/// dependent tuple repeatedly strip the minimum dependent subset, emitting
/// its span as a recovered subspace, until the residue is independent.
/// Suited to scenes whose outlier count stays above p at every stage.
ClusteringResult hm_cluster(const Eigen::MatrixXd& points, int K,
                            const RansacConfig& config, RngStream& rng,
                            long long subset_search_budget = 1LL << 20);

struct AffinityMatrix {
  Eigen::MatrixXi w;                     // n x n, symmetric, zero diagonal
  int c = 0;                             // number of tuples drawn
  std::vector<std::vector<int>> tuples;  // the c drawn d-subsets
};

/// Co-dependence affinity: draw c random d-tuples; w(i, j) counts tuples s
/// containing neither i nor j such that both (x_i, s) and (x_j, s) are
/// linearly dependent.  workers > 1 accumulates tuple contributions in
/// parallel; counts are integers, so the result is identical to the serial
/// reference for any worker count.
AffinityMatrix scc_affinity(const Eigen::MatrixXd& points, int d, int c,
                            double rel_tol, RngStream& rng, int workers = 1);

/// Serial reference for scc_affinity (same draws, same counts).
AffinityMatrix scc_affinity_serial(const Eigen::MatrixXd& points, int d, int c,
                                   double rel_tol, RngStream& rng);

/// Normalized spectral partitioning of an affinity matrix into K groups:
/// rows with zero degree are labeled outlier (0) and excluded; the rest are
/// embedded via the top-K eigenvectors of D^{-1/2} W D^{-1/2}, row
/// normalized, and k-means clustered (10 seeded restarts).  Returns labels
/// in {0, 1..K}.
std::vector<int> spectral_partition(const AffinityMatrix& affinity, int K,
                                    std::uint64_t seed = 0);

}  // namespace subspace
