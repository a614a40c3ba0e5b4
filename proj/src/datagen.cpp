#include "subspace/datagen.hpp"

#include <Eigen/QR>
#include <algorithm>

#include "subspace/errors.hpp"
#include "subspace/sampling.hpp"

namespace subspace {
namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, RngStream& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

// Dependence is expected exactly when some subspace owns >= d+1 members of
// the tuple; this is what the sampling theory relies on.
bool tuple_matches_assumptions(const Scene& scene,
                               const std::vector<int>& indices,
                               double rel_tol) {
  int counts_static[64];
  std::vector<int> counts_dyn;
  int* counts = counts_static;
  if (scene.params.K + 1 > 64) {
    counts_dyn.assign(static_cast<std::size_t>(scene.params.K) + 1, 0);
    counts = counts_dyn.data();
  } else {
    std::fill(counts_static, counts_static + scene.params.K + 1, 0);
  }
  for (int i : indices) ++counts[scene.labels[static_cast<std::size_t>(i)]];
  bool expect_dependent = false;
  for (int k = 1; k <= scene.params.K; ++k)
    expect_dependent = expect_dependent || (counts[k] >= scene.params.d + 1);
  const bool dependent =
      is_linearly_dependent(gather_columns(scene.points, indices), rel_tol);
  return dependent == expect_dependent;
}

}  // namespace

Subspace random_subspace(int p, int d, RngStream& rng) {
  if (d < 1 || d >= p)
    throw InvalidInputError("random_subspace: need 1 <= d < p");
  const Eigen::MatrixXd g = gaussian_matrix(p, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, d);
  return Subspace(std::move(q));
}

Eigen::MatrixXd sample_on_sphere(int p, int count, RngStream& rng) {
  if (p < 1) throw InvalidInputError("sample_on_sphere: p must be >= 1");
  if (count < 0) throw InvalidInputError("sample_on_sphere: negative count");
  Eigen::MatrixXd out(count, p);
  Eigen::VectorXd v(p);
  for (int i = 0; i < count; ++i) {
    double norm;
    do {
      for (int j = 0; j < p; ++j) v(j) = rng.normal();
      norm = v.norm();
    } while (norm < 1e-12);
    out.row(i) = (v / norm).transpose();
  }
  return out;
}

Eigen::MatrixXd sample_on_subspace_sphere(const Subspace& s, int count,
                                          RngStream& rng) {
  if (count < 0)
    throw InvalidInputError("sample_on_subspace_sphere: negative count");
  Eigen::MatrixXd out(count, s.ambient_dim());
  Eigen::VectorXd coef(s.dim());
  for (int i = 0; i < count; ++i) {
    double norm;
    Eigen::VectorXd v;
    do {
      for (int j = 0; j < s.dim(); ++j) coef(j) = rng.normal();
      v = s.basis() * coef;
      norm = v.norm();
    } while (norm < 1e-12);
    out.row(i) = (v / norm).transpose();
  }
  return out;
}

bool audit_general_position(const Scene& scene, double rel_tol,
                            long long sample_tuples, RngStream& rng) {
  const int n = scene.params.n();
  const int qmax = std::min(scene.params.p, n);
  if (qmax < 2) return true;
  if (sample_tuples == 0) {
    for (int q = 2; q <= qmax; ++q) {
      // Lexicographic walk over all q-subsets of {0..n-1}.
      std::vector<int> idx(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) idx[static_cast<std::size_t>(i)] = i;
      for (;;) {
        if (!tuple_matches_assumptions(scene, idx, rel_tol)) return false;
        int i = q - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - q + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < q; ++j)
          idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return true;
  }
  for (long long s = 0; s < sample_tuples; ++s) {
    const int q = 2 + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(qmax - 1)));
    const TupleDraw t = sample_tuple(n, q, rng);
    if (!tuple_matches_assumptions(scene, t.indices, rel_tol)) return false;
  }
  return true;
}

Scene make_scene(const TheoryParams& params, RngStream& rng,
                 const SceneOptions& options) {
  params.validate();
  if (options.audit_samples < 0)
    throw InvalidInputError("make_scene: negative audit_samples");

  Scene scene;
  scene.params = params;
  const int n = params.n();
  scene.points.resize(n, params.p);
  scene.labels.assign(static_cast<std::size_t>(n), 0);

  int row = 0;
  for (int k = 1; k <= params.K; ++k) {
    Subspace s = random_subspace(params.p, params.d, rng);
    scene.points.middleRows(row, params.m) =
        sample_on_subspace_sphere(s, params.m, rng);
    std::fill_n(scene.labels.begin() + row, params.m, k);
    scene.subspaces.push_back(std::move(s));
    row += params.m;
  }
  if (params.m0 > 0) {
    scene.points.middleRows(row, params.m0) =
        sample_on_sphere(params.p, params.m0, rng);
  }

  // Fisher-Yates shuffle so inliers and outliers are interleaved.
  for (int i = n - 1; i >= 1; --i) {
    const int j = static_cast<int>(rng.uniform_below(
        static_cast<std::uint64_t>(i) + 1));
    if (j != i) {
      scene.points.row(i).swap(scene.points.row(j));
      std::swap(scene.labels[static_cast<std::size_t>(i)],
                scene.labels[static_cast<std::size_t>(j)]);
    }
  }

  if (options.audit_samples > 0 &&
      !audit_general_position(scene, options.rel_tol, options.audit_samples,
                              rng))
    throw DegenerateSceneError(
        "make_scene: generated scene violates general-position assumptions");
  return scene;
}

}  // namespace subspace
