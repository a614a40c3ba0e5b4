#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subspace/linalg.hpp"
#include "subspace/params.hpp"
#include "subspace/rng.hpp"

namespace subspace {

/// A synthetic point set: n = K*m + m0 unit vectors in R^p, stored one per
/// row in a shuffled order.  labels[i] is 1..K for inliers of subspace k and
/// 0 for outliers; subspaces holds the K ground-truth spans.
struct Scene {
  TheoryParams params;
  Eigen::MatrixXd points;          // n x p
  std::vector<int> labels;         // size n
  std::vector<Subspace> subspaces; // size K
};

struct SceneOptions {
  /// Tuples sampled by the built-in general-position audit after
  /// generation; 0 disables the audit.
  int audit_samples = 64;
  double rel_tol = kDefaultRelTol;
};

/// Uniformly random (rotation invariant) d-dimensional subspace of R^p,
/// from the QR factorization of a Gaussian matrix.
Subspace random_subspace(int p, int d, RngStream& rng);

/// `count` points uniform on the unit sphere of R^p, one per row.
Eigen::MatrixXd sample_on_sphere(int p, int count, RngStream& rng);

/// `count` points uniform on the unit sphere intersected with s, one per row.
Eigen::MatrixXd sample_on_subspace_sphere(const Subspace& s, int count,
                                          RngStream& rng);

/// Checks the general-position assumptions on a scene: a q-tuple
/// (2 <= q <= p) of points is linearly dependent exactly when some subspace
/// contributes at least d+1 of its members.  With sample_tuples == 0 every
/// subset is checked (exhaustive; only sensible for small n), otherwise that
/// many random tuples with q drawn uniformly from {2, ..., min(p, n)}.
/// Returns false on the first violation.
bool audit_general_position(const Scene& scene, double rel_tol,
                            long long sample_tuples, RngStream& rng);

/// Generates a scene: K random subspaces, m inliers on each, m0 sphere
/// outliers, shuffled point order, then the sampled audit from
/// SceneOptions.  Throws DegenerateSceneError if the audit fires.
Scene make_scene(const TheoryParams& params, RngStream& rng,
                 const SceneOptions& options = {});

}  // namespace subspace
