#include "subspace/clustering.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "subspace/errors.hpp"

namespace subspace {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_points(const Eigen::MatrixXd& points) {
  if (points.rows() < 1 || points.cols() < 1)
    throw InvalidInputError("clustering: empty point set");
  if (!points.allFinite())
    throw InvalidInputError("clustering: non-finite point entries");
}

std::vector<int> erase_members(const std::vector<int>& pool,
                               const std::vector<char>& claimed) {
  std::vector<int> out;
  out.reserve(pool.size());
  for (int i : pool)
    if (!claimed[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

// ------------------------------------------------------------------ k-means

struct KmeansOutcome {
  std::vector<int> assign;
  double objective = std::numeric_limits<double>::infinity();
};

KmeansOutcome kmeans_once(const Eigen::MatrixXd& x, int k, RngStream& rng) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd centers(k, x.cols());

  // k-means++ seeding.
  centers.row(0) = x.row(static_cast<Eigen::Index>(
      rng.uniform_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd dist2 =
      (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int t = 1; t < k; ++t) {
    const double total = dist2.sum();
    int pick = 0;
    if (total > 0.0) {
      double r = rng.uniform_double() * total;
      for (; pick < n - 1; ++pick) {
        r -= dist2(pick);
        if (r <= 0.0) break;
      }
    } else {
      pick = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    }
    centers.row(t) = x.row(pick);
    dist2 = dist2.cwiseMin(
        (x.rowwise() - centers.row(t)).rowwise().squaredNorm());
  }

  KmeansOutcome out;
  out.assign.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int round = 0; round < 200; ++round) {
    bool changed = false;
    std::vector<double> nearest(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = (x.row(i) - centers.row(0)).squaredNorm();
      for (int t = 1; t < k; ++t) {
        const double d = (x.row(i) - centers.row(t)).squaredNorm();
        if (d < bd) {
          bd = d;
          best = t;
        }
      }
      nearest[static_cast<std::size_t>(i)] = bd;
      if (out.assign[static_cast<std::size_t>(i)] != best) {
        out.assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(out.assign[static_cast<std::size_t>(i)])];
    // An empty cluster adopts the point lying farthest from its center.
    for (int t = 0; t < k; ++t) {
      if (counts[static_cast<std::size_t>(t)] > 0) continue;
      int far = 0;
      for (int i = 1; i < n; ++i)
        if (nearest[static_cast<std::size_t>(i)] > nearest[static_cast<std::size_t>(far)]) far = i;
      --counts[static_cast<std::size_t>(out.assign[static_cast<std::size_t>(far)])];
      out.assign[static_cast<std::size_t>(far)] = t;
      counts[static_cast<std::size_t>(t)] = 1;
      nearest[static_cast<std::size_t>(far)] = 0.0;
      changed = true;
    }
    centers.setZero();
    for (int i = 0; i < n; ++i)
      centers.row(out.assign[static_cast<std::size_t>(i)]) += x.row(i);
    for (int t = 0; t < k; ++t)
      centers.row(t) /= static_cast<double>(counts[static_cast<std::size_t>(t)]);
    if (!changed && round > 0) break;
  }

  out.objective = 0.0;
  for (int i = 0; i < n; ++i)
    out.objective +=
        (x.row(i) - centers.row(out.assign[static_cast<std::size_t>(i)])).squaredNorm();
  return out;
}

constexpr int kKmeansRestarts = 10;

std::vector<int> kmeans(const Eigen::MatrixXd& x, int k, RngStream& rng) {
  KmeansOutcome best;
  for (int r = 0; r < kKmeansRestarts; ++r) {
    KmeansOutcome cur = kmeans_once(x, k, rng);
    if (cur.objective < best.objective) best = std::move(cur);
  }
  return best.assign;
}

// ---------------------------------------------------------------- affinity

void check_affinity_args(const Eigen::MatrixXd& points, int d, int c) {
  check_points(points);
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (d < 1 || d >= p) throw InvalidInputError("scc_affinity: need 1 <= d < p");
  if (d > n) throw InvalidInputError("scc_affinity: d exceeds point count");
  if (c < 1) throw InvalidInputError("scc_affinity: need c >= 1");
}

// Marks, for one drawn tuple, which points form a dependent (d+1)-tuple with
// it, then bumps the pair counts.  Shared verbatim by the serial and
// parallel drivers so their outputs match exactly.
void accumulate_tuple(const Eigen::MatrixXd& points,
                      const std::vector<int>& tuple_idx, double rel_tol,
                      Eigen::MatrixXi& w) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(tuple_idx.size());
  Eigen::MatrixXd aug(points.cols(), d + 1);
  for (int j = 0; j < d; ++j)
    aug.col(j) = points.row(tuple_idx[static_cast<std::size_t>(j)]).transpose();
  std::vector<int> hits;
  for (int i = 0; i < n; ++i) {
    if (std::find(tuple_idx.begin(), tuple_idx.end(), i) != tuple_idx.end())
      continue;
    aug.col(d) = points.row(i).transpose();
    if (is_linearly_dependent(aug, rel_tol)) hits.push_back(i);
  }
  for (std::size_t a = 0; a < hits.size(); ++a) {
    for (std::size_t b = a + 1; b < hits.size(); ++b) {
      w(hits[a], hits[b]) += 1;
      w(hits[b], hits[a]) += 1;
    }
  }
}

std::vector<std::vector<int>> draw_affinity_tuples(int n, int d, int c,
                                                   RngStream& rng) {
  std::vector<std::vector<int>> tuples;
  tuples.reserve(static_cast<std::size_t>(c));
  for (int s = 0; s < c; ++s)
    tuples.push_back(sample_tuple(n, d, rng).indices);
  return tuples;
}

}  // namespace

ClusteringResult ransac_cluster(const Eigen::MatrixXd& points, int d, int K,
                                const RansacConfig& config, RngStream& rng) {
  check_points(points);
  const auto start = Clock::now();
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (d < 1 || d >= p)
    throw InvalidInputError("ransac_cluster: need 1 <= d < p");
  if (K < 1) throw InvalidInputError("ransac_cluster: K must be >= 1");
  if (config.max_iterations && *config.max_iterations < 1)
    throw InvalidInputError("ransac_cluster: max_iterations must be >= 1");

  const bool without =
      config.replacement == ReplacementMode::without_replacement;
  const int q = d + 1;
  ClusteringResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> remaining(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;

  Eigen::MatrixXd tuple(p, q);
  long long total = 0;
  for (int k = 1; k <= K; ++k) {
    const int pool = static_cast<int>(remaining.size());
    if (pool < q)
      throw InfeasibleSceneError(
          "ransac_cluster: fewer than d + 1 points remain");
    SeenTuples seen;
    long long stage_draws = 0;
    for (;;) {
      if (config.max_iterations && total >= *config.max_iterations)
        throw BudgetExhaustedError("ransac_cluster: iteration budget exhausted",
                                   total);
      TupleDraw draw =
          without ? sample_tuple_without_replacement(pool, q, seen, rng)
                  : sample_tuple(pool, q, rng);
      if (without) seen.insert(draw);
      ++total;
      ++stage_draws;
      for (int j = 0; j < q; ++j)
        tuple.col(j) =
            points.row(remaining[static_cast<std::size_t>(
                           draw.indices[static_cast<std::size_t>(j)])])
                .transpose();
      if (!is_linearly_dependent(tuple, config.rel_tol)) continue;

      Subspace s = orthonormal_basis(tuple, config.rel_tol);
      std::vector<char> claimed(static_cast<std::size_t>(n), 0);
      for (int i : remaining) {
        if (residual_distance(points.row(i).transpose(), s) <=
            config.membership_tol) {
          claimed[static_cast<std::size_t>(i)] = 1;
          result.labels[static_cast<std::size_t>(i)] = k;
        }
      }
      remaining = erase_members(remaining, claimed);
      result.subspaces.push_back(std::move(s));
      result.stage_iterations.push_back(stage_draws);
      break;
    }
  }
  result.iterations = total;
  result.elapsed_s = seconds_since(start);
  return result;
}

std::vector<int> minimum_dependent_subset(const Eigen::MatrixXd& tuple,
                                          double rel_tol, long long budget) {
  const int q = static_cast<int>(tuple.cols());
  if (q < 1 || q > tuple.rows())
    throw InvalidInputError("minimum_dependent_subset: need 1 <= cols <= rows");
  if (budget < 1)
    throw InvalidInputError("minimum_dependent_subset: budget must be >= 1");

  long long examined = 0;
  for (int size = 2; size <= q; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd sub(tuple.rows(), size);
    for (;;) {
      if (++examined > budget)
        throw SearchBudgetError(
            "minimum_dependent_subset: subset budget exhausted");
      for (int j = 0; j < size; ++j)
        sub.col(j) = tuple.col(idx[static_cast<std::size_t>(j)]);
      if (numerical_rank(sub, rel_tol) < size) return idx;
      int i = size - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == q - size + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  throw ContractViolationError(
      "minimum_dependent_subset: columns are linearly independent");
}

ClusteringResult hm_cluster(const Eigen::MatrixXd& points, int K,
                            const RansacConfig& config, RngStream& rng,
                            long long subset_search_budget) {
  check_points(points);
  const auto start = Clock::now();
  const int p = static_cast<int>(points.cols());
  const int n = static_cast<int>(points.rows());
  if (K < 1) throw InvalidInputError("hm_cluster: K must be >= 1");
  if (n <= p)
    throw InvalidInputError("hm_cluster: need more points than dimensions");

  const bool without =
      config.replacement == ReplacementMode::without_replacement;
  ClusteringResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> remaining(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;

  Eigen::MatrixXd tuple(p, p);
  long long total = 0;
  int found = 0;
  while (found < K) {
    const int pool = static_cast<int>(remaining.size());
    if (pool <= p)
      throw InfeasibleSceneError("hm_cluster: too few points remain to draw "
                                 "an informative p-tuple");
    SeenTuples seen;
    long long stage_draws = 0;
    bool emitted = false;
    while (!emitted) {
      if (config.max_iterations && total >= *config.max_iterations)
        throw BudgetExhaustedError("hm_cluster: iteration budget exhausted",
                                   total);
      TupleDraw draw =
          without ? sample_tuple_without_replacement(pool, p, seen, rng)
                  : sample_tuple(pool, p, rng);
      if (without) seen.insert(draw);
      ++total;
      ++stage_draws;
      std::vector<int> live(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) {
        live[static_cast<std::size_t>(j)] =
            remaining[static_cast<std::size_t>(
                draw.indices[static_cast<std::size_t>(j)])];
        tuple.col(j) = points.row(live[static_cast<std::size_t>(j)]).transpose();
      }
      if (!is_linearly_dependent(tuple, config.rel_tol)) continue;

      // A dependent draw may hide several subspaces; strip minimum
      // dependent subsets until the residue is independent.
      while (found < K && live.size() >= 2) {
        const Eigen::MatrixXd sub = gather_columns(points, live);
        if (!is_linearly_dependent(sub, config.rel_tol)) break;
        const std::vector<int> local =
            minimum_dependent_subset(sub, config.rel_tol, subset_search_budget);
        Eigen::MatrixXd span_pts(points.cols(),
                                 static_cast<Eigen::Index>(local.size()));
        for (std::size_t j = 0; j < local.size(); ++j)
          span_pts.col(static_cast<Eigen::Index>(j)) = sub.col(local[j]);
        Subspace s = orthonormal_basis(span_pts, config.rel_tol);
        ++found;
        std::vector<char> claimed(static_cast<std::size_t>(n), 0);
        for (int i : remaining) {
          if (residual_distance(points.row(i).transpose(), s) <=
              config.membership_tol) {
            claimed[static_cast<std::size_t>(i)] = 1;
            result.labels[static_cast<std::size_t>(i)] = found;
          }
        }
        remaining = erase_members(remaining, claimed);
        live = erase_members(live, claimed);
        result.subspaces.push_back(std::move(s));
        emitted = true;
      }
      if (emitted) result.stage_iterations.push_back(stage_draws);
    }
  }
  result.iterations = total;
  result.elapsed_s = seconds_since(start);
  return result;
}

AffinityMatrix scc_affinity_serial(const Eigen::MatrixXd& points, int d, int c,
                                   double rel_tol, RngStream& rng) {
  check_affinity_args(points, d, c);
  const int n = static_cast<int>(points.rows());
  AffinityMatrix aff;
  aff.c = c;
  aff.tuples = draw_affinity_tuples(n, d, c, rng);
  aff.w = Eigen::MatrixXi::Zero(n, n);
  for (const auto& t : aff.tuples) accumulate_tuple(points, t, rel_tol, aff.w);
  return aff;
}

AffinityMatrix scc_affinity(const Eigen::MatrixXd& points, int d, int c,
                            double rel_tol, RngStream& rng, int workers) {
  if (workers < 1) throw InvalidInputError("scc_affinity: workers must be >= 1");
  check_affinity_args(points, d, c);
  const int n = static_cast<int>(points.rows());
  AffinityMatrix aff;
  aff.c = c;
  aff.tuples = draw_affinity_tuples(n, d, c, rng);
  aff.w = Eigen::MatrixXi::Zero(n, n);
#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel num_threads(workers)
    {
      Eigen::MatrixXi local = Eigen::MatrixXi::Zero(n, n);
#pragma omp for schedule(dynamic, 8)
      for (int s = 0; s < c; ++s)
        accumulate_tuple(points, aff.tuples[static_cast<std::size_t>(s)],
                         rel_tol, local);
#pragma omp critical
      aff.w += local;
    }
    return aff;
  }
#endif
  for (const auto& t : aff.tuples) accumulate_tuple(points, t, rel_tol, aff.w);
  return aff;
}

std::vector<int> spectral_partition(const AffinityMatrix& affinity, int K,
                                    std::uint64_t seed) {
  const Eigen::MatrixXi& w = affinity.w;
  const int n = static_cast<int>(w.rows());
  if (n < 1 || w.cols() != n)
    throw InvalidInputError("spectral_partition: affinity must be square");
  if (K < 1) throw InvalidInputError("spectral_partition: K must be >= 1");
  if ((w.diagonal().array() != 0).any())
    throw InvalidInputError("spectral_partition: nonzero diagonal");
  if ((w - Eigen::MatrixXi(w.transpose())).cwiseAbs().sum() != 0 ||
      (w.array() < 0).any())
    throw InvalidInputError("spectral_partition: affinity asymmetric or negative");

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::vector<int> active;
  for (int i = 0; i < n; ++i)
    if (w.row(i).sum() > 0) active.push_back(i);
  const int na = static_cast<int>(active.size());
  if (na < K)
    throw InfeasiblePartitionError(
        "spectral_partition: fewer connected points than groups");

  Eigen::MatrixXd a(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      a(i, j) = static_cast<double>(
          w(active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(j)]));
  const Eigen::VectorXd dinv = a.rowwise().sum().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m = dinv.asDiagonal() * a * dinv.asDiagonal();
  m = 0.5 * (m + m.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw InfeasiblePartitionError("spectral_partition: eigensolver failed");
  Eigen::MatrixXd v = es.eigenvectors().rightCols(K);
  for (int i = 0; i < na; ++i) {
    const double norm = v.row(i).norm();
    if (norm > 0.0) v.row(i) /= norm;
  }

  RngStream km_rng(seed, 0x5CCULL);
  const std::vector<int> assign = kmeans(v, K, km_rng);
  for (int i = 0; i < na; ++i)
    labels[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])] =
        assign[static_cast<std::size_t>(i)] + 1;
  return labels;
}

}  // namespace subspace
