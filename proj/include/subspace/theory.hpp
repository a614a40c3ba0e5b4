#pragma once

#include <vector>

#include "subspace/params.hpp"

namespace subspace {

/// log C(n, k), computed from log-gamma differences in extended precision.
/// Returns -inf when k < 0 or k > n.
double log_binomial(long long n, long long k);

/// Success probability of a single (d+1)-tuple draw in subspace recovery:
/// the chance that all d+1 of n points land among the m inliers,
/// C(m, d+1) / C(n, d+1).  Zero when m < d + 1 (recovery can never succeed).
double theta1(long long n, long long m, int d);

/// Success probability of a single p-tuple draw in dimension-free recovery:
/// the chance that at least d+1 of the p drawn points are inliers, a
/// hypergeometric upper tail.  Requires n > p >= d + 1.
double theta2(long long n, long long m, int d, long long p);

/// Expected iterations of subspace recovery with replacement, 1 / theta1.
/// +infinity when theta1 is zero.
double expected_iterations_recovery(long long n, long long m, int d);

/// Exact expected draw count for without-replacement tuple sampling,
/// (C(n, d+1) + 1) / (C(m, d+1) + 1).  Always <= 1/theta1; the 1/theta1
/// figure remains the quotable upper bound for the without-replacement
/// variant.
double mean_iterations_without_replacement(long long n, long long m, int d);

struct ClusteringIterations {
  double expected;                  // sum over stages of 1 / theta_stage
  double negative_binomial_bound;   // K / theta1(n, m, d)
};

/// Expected iteration count of K-stage clustering: at stage j the remaining
/// pool holds n - (j-1)m points of which (K-j+1)m are still-unrecovered
/// inliers, so a tuple succeeds with probability
/// (K-j+1) C(m, d+1) / C(n-(j-1)m, d+1).  The total is bounded by the
/// negative-binomial figure K / theta1.
ClusteringIterations expected_iterations_clustering(const TheoryParams& params);

struct GeometricFitReport {
  double mean_z = 0.0;
  double var_z = 0.0;
  bool pass = false;
};

/// Two-moment z-test of iteration counts against Geometric(theta) on
/// {1, 2, ...}.  Standard errors use the theoretical variance and fourth
/// central moment; pass means both |z| <= 3.  Needs at least 100 samples.
/// theta == 1 degenerates to "every sample equals 1".
GeometricFitReport geometric_fit_test(const std::vector<long long>& samples,
                                      double theta);

}  // namespace subspace
