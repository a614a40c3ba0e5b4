#include "subspace/recovery.hpp"

#include <Eigen/SVD>
#include <chrono>

#include "subspace/errors.hpp"

namespace subspace {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_points(const Eigen::MatrixXd& points) {
  if (points.rows() < 1 || points.cols() < 1)
    throw InvalidInputError("recovery: empty point set");
  if (!points.allFinite())
    throw InvalidInputError("recovery: non-finite point entries");
}

std::vector<int> members_within(const Eigen::MatrixXd& points,
                                const Subspace& s, double membership_tol) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (residual_distance(points.row(i).transpose(), s) <= membership_tol)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

// Shared sampling loop: draws q-subsets of [0, n) until `accept` returns a
// result, honoring the replacement mode and iteration cap.
template <typename Accept>
RecoveryResult sample_until(const Eigen::MatrixXd& points, int q,
                            const RansacConfig& config, RngStream& rng,
                            Accept&& accept) {
  const auto start = Clock::now();
  const int n = static_cast<int>(points.rows());
  const bool without =
      config.replacement == ReplacementMode::without_replacement;
  std::optional<long long> cap = config.max_iterations;
  if (cap && *cap < 1)
    throw InvalidInputError("recovery: max_iterations must be >= 1");
  if (without && !cap) cap = subset_count_capped(n, q, (1LL << 62));

  SeenTuples seen;
  Eigen::MatrixXd tuple(points.cols(), q);
  long long iterations = 0;
  for (;;) {
    if (cap && iterations >= *cap)
      throw BudgetExhaustedError("recovery: iteration budget exhausted",
                                 iterations);
    TupleDraw draw = without
                         ? sample_tuple_without_replacement(n, q, seen, rng)
                         : sample_tuple(n, q, rng);
    if (without) seen.insert(draw);
    ++iterations;
    for (int j = 0; j < q; ++j)
      tuple.col(j) = points.row(draw.indices[static_cast<std::size_t>(j)])
                         .transpose();
    std::optional<RecoveryResult> hit = accept(tuple, draw);
    if (hit) {
      hit->iterations = iterations;
      hit->elapsed_s = seconds_since(start);
      return std::move(*hit);
    }
  }
}

}  // namespace

RecoveryResult ransac_recover(const Eigen::MatrixXd& points, int d,
                              const RansacConfig& config, RngStream& rng) {
  check_points(points);
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (d < 1 || d >= p)
    throw InvalidInputError("ransac_recover: need 1 <= d < p");
  if (n < d + 1)
    throw InvalidInputError("ransac_recover: fewer than d + 1 points");

  return sample_until(
      points, d + 1, config, rng,
      [&](const Eigen::MatrixXd& tuple,
          const TupleDraw&) -> std::optional<RecoveryResult> {
        if (!is_linearly_dependent(tuple, config.rel_tol)) return std::nullopt;
        RecoveryResult r{orthonormal_basis(tuple, config.rel_tol), {}, 0, 0.0};
        r.inlier_indices = members_within(points, r.subspace,
                                          config.membership_tol);
        return r;
      });
}

std::vector<int> extract_dependent_subset(const Eigen::MatrixXd& tuple,
                                          double rel_tol) {
  const Eigen::Index q = tuple.cols();
  if (q < 1 || q > tuple.rows())
    throw InvalidInputError("extract_dependent_subset: need 1 <= cols <= rows");
  if (!tuple.allFinite())
    throw InvalidInputError("extract_dependent_subset: non-finite entries");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(tuple, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > rel_tol * largest) ++rank;
  if (largest <= 0.0) rank = 0;
  if (rank == q)
    throw ContractViolationError(
        "extract_dependent_subset: tuple is linearly independent");

  // Union of null-vector supports; thresholded against each vector's own
  // largest entry so exact zeros and rounding noise are told apart.
  std::vector<char> in_support(static_cast<std::size_t>(q), 0);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index c = rank; c < q; ++c) {
    const double vmax = v.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < q; ++i)
      if (std::abs(v(i, c)) > rel_tol * vmax)
        in_support[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<int> out;
  for (Eigen::Index i = 0; i < q; ++i)
    if (in_support[static_cast<std::size_t>(i)]) out.push_back(static_cast<int>(i));
  return out;
}

RecoveryResult hardt_moitra_recover(const Eigen::MatrixXd& points,
                                    const RansacConfig& config,
                                    RngStream& rng) {
  check_points(points);
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (n <= p)
    throw InvalidInputError("hardt_moitra_recover: need more points than dimensions");

  return sample_until(
      points, p, config, rng,
      [&](const Eigen::MatrixXd& tuple,
          const TupleDraw&) -> std::optional<RecoveryResult> {
        if (!is_linearly_dependent(tuple, config.rel_tol)) return std::nullopt;
        const std::vector<int> subset =
            extract_dependent_subset(tuple, config.rel_tol);
        Eigen::MatrixXd sub(tuple.rows(),
                            static_cast<Eigen::Index>(subset.size()));
        for (std::size_t j = 0; j < subset.size(); ++j)
          sub.col(static_cast<Eigen::Index>(j)) = tuple.col(subset[j]);
        RecoveryResult r{orthonormal_basis(sub, config.rel_tol), {}, 0, 0.0};
        r.inlier_indices = members_within(points, r.subspace,
                                          config.membership_tol);
        return r;
      });
}

RecoveryResult ransac_recover_unknown_dimension(const Eigen::MatrixXd& points,
                                                long long budget_per_dim,
                                                const RansacConfig& config,
                                                RngStream& rng) {
  check_points(points);
  if (budget_per_dim < 1)
    throw InvalidInputError("ransac_recover_unknown_dimension: budget must be >= 1");
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (p < 2)
    throw InvalidInputError("ransac_recover_unknown_dimension: ambient dimension < 2");
  if (n < 2)
    throw InvalidInputError("ransac_recover_unknown_dimension: need at least 2 points");

  const auto start = Clock::now();
  const bool without =
      config.replacement == ReplacementMode::without_replacement;
  long long total = 0;
  Eigen::MatrixXd tuple;
  for (;;) {  // restart the dimension sweep until something is found
    for (int d = 1; d < p && d < n; ++d) {
      const int q = d + 1;
      tuple.resize(p, q);
      SeenTuples seen;
      const long long all = subset_count_capped(n, q, (1LL << 62));
      for (long long b = 0; b < budget_per_dim; ++b) {
        if (without && static_cast<long long>(seen.size()) >= all) break;
        if (config.max_iterations && total >= *config.max_iterations)
          throw BudgetExhaustedError(
              "ransac_recover_unknown_dimension: iteration budget exhausted",
              total);
        TupleDraw draw = without
                             ? sample_tuple_without_replacement(n, q, seen, rng)
                             : sample_tuple(n, q, rng);
        if (without) seen.insert(draw);
        ++total;
        for (int j = 0; j < q; ++j)
          tuple.col(j) = points.row(draw.indices[static_cast<std::size_t>(j)])
                             .transpose();
        if (!is_linearly_dependent(tuple, config.rel_tol)) continue;
        RecoveryResult r{orthonormal_basis(tuple, config.rel_tol), {}, 0, 0.0};
        r.inlier_indices = members_within(points, r.subspace,
                                          config.membership_tol);
        r.iterations = total;
        r.elapsed_s = seconds_since(start);
        return r;
      }
    }
  }
}

}  // namespace subspace
