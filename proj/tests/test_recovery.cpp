#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "subspace/datagen.hpp"
#include "subspace/errors.hpp"
#include "subspace/metrics.hpp"
#include "subspace/recovery.hpp"
#include "subspace/theory.hpp"

using namespace subspace;

namespace {

TheoryParams make_params(int d, int p, int m, int m0) {
  TheoryParams out;
  out.d = d;
  out.p = p;
  out.m = m;
  out.m0 = m0;
  out.K = 1;
  return out;
}

std::vector<int> true_inliers(const Scene& scene) {
  std::vector<int> out;
  for (std::size_t i = 0; i < scene.labels.size(); ++i)
    if (scene.labels[i] == 1) out.push_back(static_cast<int>(i));
  return out;
}

Eigen::MatrixXd to_eigen(const oracles::IntMat& m) {
  Eigen::MatrixXd out(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(m[i][j]);
  return out;
}

// integer tuple columns with one column rewritten as a small integer
// combination of the others (possibly with zero coefficients), forcing a
// rank deficiency whose shape varies
oracles::IntMat planted_tuple(int rows, int cols, RngStream& rng) {
  oracles::IntMat m(static_cast<std::size_t>(rows),
                    std::vector<long long>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<long long>(rng.uniform_below(19)) - 9;
  const int target =
      static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(cols)));
  std::vector<long long> coef(static_cast<std::size_t>(cols), 0);
  for (int j = 0; j < cols; ++j)
    if (j != target)
      coef[static_cast<std::size_t>(j)] =
          static_cast<long long>(rng.uniform_below(7)) - 3;
  for (int i = 0; i < rows; ++i) {
    long long acc = 0;
    for (int j = 0; j < cols; ++j)
      acc += coef[static_cast<std::size_t>(j)] *
             m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(target)] = acc;
  }
  return m;
}

}  // namespace

TEST_CASE("known-dimension recovery is exact on clean scenes") {
  const TheoryParams params = make_params(2, 5, 12, 6);
  for (std::uint64_t t = 0; t < 25; ++t) {
    RngStream rng(1001, t);
    const Scene scene = make_scene(params, rng);
    const RecoveryResult r = ransac_recover(scene.points, 2, {}, rng);
    CHECK(recovery_angle(r.subspace, scene.subspaces[0]) <= 1e-8);
    CHECK(r.inlier_indices == true_inliers(scene));
    CHECK(r.iterations >= 1);
    CHECK(r.elapsed_s >= 0.0);
    CHECK(r.subspace.dim() == 2);
  }
}

TEST_CASE("recovery is reproducible for a fixed stream") {
  const TheoryParams params = make_params(1, 4, 8, 4);
  RngStream ra(7, 3), rb(7, 3);
  const Scene sa = make_scene(params, ra);
  const Scene sb = make_scene(params, rb);
  const RecoveryResult a = ransac_recover(sa.points, 1, {}, ra);
  const RecoveryResult b = ransac_recover(sb.points, 1, {}, rb);
  CHECK(a.iterations == b.iterations);
  CHECK(a.inlier_indices == b.inlier_indices);
  CHECK((a.subspace.basis().array() == b.subspace.basis().array()).all());
}

TEST_CASE("single-draw success frequency matches the tuple probability") {
  // fixed audited scene with 5 inliers on a line among 10 points: an
  // all-inlier pair turns up with probability C(5,2)/C(10,2) = 2/9
  const TheoryParams params = make_params(1, 3, 5, 5);
  RngStream rng(404, 0);
  SceneOptions opts;
  opts.audit_samples = 0;
  const Scene scene = make_scene(params, rng, opts);
  RngStream audit_rng(405, 0);
  REQUIRE(audit_general_position(scene, kDefaultRelTol, 0, audit_rng));

  const int draws = 100000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const TupleDraw t = sample_tuple(10, 2, rng);
    if (is_linearly_dependent(gather_columns(scene.points, t.indices))) ++hits;
  }
  const double theta = theta1(10, 5, 1);
  const double freq = static_cast<double>(hits) / draws;
  const double sigma = std::sqrt(theta * (1 - theta) / draws);
  CHECK(std::fabs(freq - theta) < 3 * sigma);
}

TEST_CASE("iteration counts follow the geometric law") {
  const TheoryParams params = make_params(1, 3, 5, 5);
  std::vector<long long> iters;
  iters.reserve(2000);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    RngStream rng(2222, t);
    const Scene scene = make_scene(params, rng);
    iters.push_back(ransac_recover(scene.points, 1, {}, rng).iterations);
  }
  CHECK(geometric_fit_test(iters, theta1(10, 5, 1)).pass);
}

TEST_CASE("success on the final allowed iteration is not a budget error") {
  // every pair of 5 collinear points is dependent: first draw always wins
  const TheoryParams params = make_params(1, 3, 5, 0);
  RngStream rng(31, 0);
  const Scene scene = make_scene(params, rng);
  RansacConfig config;
  config.max_iterations = 1;
  const RecoveryResult r = ransac_recover(scene.points, 1, config, rng);
  CHECK(r.iterations == 1);
}

TEST_CASE("budget exhaustion reports the spent iteration count") {
  // pure sphere scatter: no dependent pair exists
  RngStream rng(77, 0);
  const Eigen::MatrixXd points = sample_on_sphere(5, 20, rng);
  RansacConfig config;
  config.max_iterations = 100;
  try {
    ransac_recover(points, 1, config, rng);
    FAIL("expected BudgetExhaustedError");
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.iterations() == 100);
  }
}

TEST_CASE("without-replacement recovery: bound, mean, and termination") {
  const TheoryParams params = make_params(1, 3, 5, 5);
  RansacConfig config;
  config.replacement = ReplacementMode::without_replacement;
  const int runs = 2000;
  double total = 0.0, totalsq = 0.0;
  for (std::uint64_t t = 0; t < runs; ++t) {
    RngStream rng(888, t);
    const Scene scene = make_scene(params, rng);
    const RecoveryResult r = ransac_recover(scene.points, 1, config, rng);
    CHECK(recovery_angle(r.subspace, scene.subspaces[0]) <= 1e-8);
    // no run can outlast the all-subsets-minus-good-ones pigeonhole bound
    REQUIRE(r.iterations <= 45 - 10 + 1);
    total += static_cast<double>(r.iterations);
    totalsq += static_cast<double>(r.iterations) * r.iterations;
  }
  const double mean = total / runs;
  const double var = totalsq / runs - mean * mean;
  const double se = std::sqrt(var / runs);
  const double want = mean_iterations_without_replacement(10, 5, 1);
  CHECK(std::fabs(mean - want) < 3 * se);
  CHECK(want <= expected_iterations_recovery(10, 5, 1));
}

TEST_CASE("extract_dependent_subset hand cases") {
  Eigen::MatrixXd tuple(4, 4);
  // columns: a, b, a+b, c (c independent of a, b)
  tuple << 1, 0, 1, 0,
           0, 1, 1, 0,
           0, 0, 0, 1,
           1, 2, 3, 5;
  CHECK(extract_dependent_subset(tuple) == std::vector<int>{0, 1, 2});

  Eigen::MatrixXd doubled(4, 4);  // col1 = 2 col0
  doubled << 1, 2, 0, 3,
             2, 4, 1, 1,
             0, 0, 5, 2,
             1, 2, 0, 0;
  CHECK(extract_dependent_subset(doubled) == std::vector<int>{0, 1});

  CHECK_THROWS_AS(extract_dependent_subset(Eigen::MatrixXd::Identity(3, 3)),
                  ContractViolationError);
}

TEST_CASE("extracted subsets equal the union of minimal dependent sets") {
  RngStream rng(3030, 0);
  for (int rep = 0; rep < 3000; ++rep) {
    const int rows = 2 + static_cast<int>(rng.uniform_below(5));
    const int cols = 2 + static_cast<int>(rng.uniform_below(
                             static_cast<std::uint64_t>(rows - 1)));
    const oracles::IntMat m = planted_tuple(rows, cols, rng);
    REQUIRE(oracles::exact_rank(m) < cols);
    CAPTURE(rep);
    REQUIRE(extract_dependent_subset(to_eigen(m)) ==
            oracles::circuit_union(m));
  }
}

TEST_CASE("dimension-free recovery is exact and reports its draws") {
  const TheoryParams params = make_params(2, 4, 20, 10);
  for (std::uint64_t t = 0; t < 25; ++t) {
    RngStream rng(5005, t);
    const Scene scene = make_scene(params, rng);
    const RecoveryResult r = hardt_moitra_recover(scene.points, {}, rng);
    CHECK(recovery_angle(r.subspace, scene.subspaces[0]) <= 1e-8);
    CHECK(r.inlier_indices == true_inliers(scene));
    CHECK(r.subspace.dim() == 2);
    CHECK(r.iterations >= 1);
  }
}

TEST_CASE("dimension-free recovery hits at the hypergeometric tail rate") {
  const TheoryParams params = make_params(1, 3, 5, 5);
  const double theta = theta2(10, 5, 1, 3);
  REQUIRE(theta == doctest::Approx(0.5).epsilon(1e-12));

  const int runs = 2000;
  double total = 0.0, totalsq = 0.0;
  for (std::uint64_t t = 0; t < runs; ++t) {
    RngStream rng(6006, t);
    const Scene scene = make_scene(params, rng);
    const RecoveryResult r = hardt_moitra_recover(scene.points, {}, rng);
    total += static_cast<double>(r.iterations);
    totalsq += static_cast<double>(r.iterations) * r.iterations;
  }
  const double mean = total / runs;
  const double var = totalsq / runs - mean * mean;
  const double se = std::sqrt(var / runs);
  CHECK(std::fabs(mean - 1.0 / theta) < 3 * se);
}

TEST_CASE("dimension-free recovery needs more points than dimensions") {
  RngStream rng(1, 1);
  const Eigen::MatrixXd square = sample_on_sphere(4, 4, rng);
  CHECK_THROWS_AS(hardt_moitra_recover(square, {}, rng), InvalidInputError);
}

TEST_CASE("unknown-dimension recovery finds the right dimension") {
  const TheoryParams params = make_params(2, 6, 20, 10);
  RngStream rng(9009, 0);
  const Scene scene = make_scene(params, rng);
  const RecoveryResult r =
      ransac_recover_unknown_dimension(scene.points, 200, {}, rng);
  CHECK(r.subspace.dim() == 2);
  CHECK(recovery_angle(r.subspace, scene.subspaces[0]) <= 1e-8);
  CHECK(r.inlier_indices == true_inliers(scene));
  // the failed d=1 budget window is part of the reported count
  CHECK(r.iterations > 200);
}

TEST_CASE("unknown-dimension recovery respects the total cap") {
  RngStream rng(2, 2);
  const Eigen::MatrixXd points = sample_on_sphere(5, 20, rng);
  RansacConfig config;
  config.max_iterations = 500;
  try {
    ransac_recover_unknown_dimension(points, 50, config, rng);
    FAIL("expected BudgetExhaustedError");
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.iterations() == 500);
  }
}

TEST_CASE("recovery input validation") {
  RngStream rng(3, 3);
  const Eigen::MatrixXd pts = sample_on_sphere(3, 6, rng);
  CHECK_THROWS_AS(ransac_recover(pts, 0, {}, rng), InvalidInputError);
  CHECK_THROWS_AS(ransac_recover(pts, 3, {}, rng), InvalidInputError);
  CHECK_THROWS_AS(ransac_recover(Eigen::MatrixXd(0, 3), 1, {}, rng),
                  InvalidInputError);
  Eigen::MatrixXd nan = pts;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(ransac_recover(nan, 1, {}, rng), InvalidInputError);
  RansacConfig bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(ransac_recover(pts, 1, bad, rng), InvalidInputError);
  CHECK_THROWS_AS(ransac_recover_unknown_dimension(pts, 0, {}, rng),
                  InvalidInputError);
}
