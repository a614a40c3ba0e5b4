#include "subspace/theory.hpp"

#include <cmath>
#include <limits>

#include "subspace/errors.hpp"

namespace subspace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended precision keeps the exp(log-difference) round trip well inside
// 1e-12 relative error for the n <= a-few-hundred range used here.
long double log_binomial_l(long long n, long long k) {
  if (k < 0 || k > n) return -std::numeric_limits<long double>::infinity();
  if (k == 0 || k == n) return 0.0L;
  return std::lgammal(static_cast<long double>(n) + 1.0L) -
         std::lgammal(static_cast<long double>(k) + 1.0L) -
         std::lgammal(static_cast<long double>(n - k) + 1.0L);
}

void check_theta1_args(long long n, long long m, int d) {
  if (d < 1) throw InvalidInputError("theta1: d must be >= 1");
  if (n < d + 1) throw InvalidInputError("theta1: need n >= d + 1");
  if (m < 0 || m > n) throw InvalidInputError("theta1: need 0 <= m <= n");
}

}  // namespace

double log_binomial(long long n, long long k) {
  if (n < 0) throw InvalidInputError("log_binomial: n must be >= 0");
  return static_cast<double>(log_binomial_l(n, k));
}

double theta1(long long n, long long m, int d) {
  check_theta1_args(n, m, d);
  if (m < d + 1) return 0.0;
  return static_cast<double>(
      std::exp(log_binomial_l(m, d + 1) - log_binomial_l(n, d + 1)));
}

double theta2(long long n, long long m, int d, long long p) {
  if (d < 1) throw InvalidInputError("theta2: d must be >= 1");
  if (p < d + 1) throw InvalidInputError("theta2: need p >= d + 1");
  if (n <= p) throw InvalidInputError("theta2: need n > p");
  if (m < 0 || m > n) throw InvalidInputError("theta2: need 0 <= m <= n");
  const long long lo = std::max<long long>(d + 1, p - (n - m));
  const long long hi = std::min<long long>(p, m);
  const long double log_total = log_binomial_l(n, p);
  long double sum = 0.0L;
  for (long long k = lo; k <= hi; ++k) {
    sum += std::exp(log_binomial_l(m, k) + log_binomial_l(n - m, p - k) -
                    log_total);
  }
  return static_cast<double>(std::min(sum, 1.0L));
}

double expected_iterations_recovery(long long n, long long m, int d) {
  const double t = theta1(n, m, d);
  return t > 0.0 ? 1.0 / t : kInf;
}

double mean_iterations_without_replacement(long long n, long long m, int d) {
  check_theta1_args(n, m, d);
  const long long cap = (1LL << 60);
  // C(n,q) computed exactly when it fits; otherwise the +1 terms are
  // negligible against 2^60 and the log-space ratio suffices.
  auto count = [&](long long nn) -> long long {
    unsigned __int128 c = 1;
    const long long q = d + 1;
    if (q > nn) return 0;
    for (long long i = 1; i <= q; ++i) {
      c = c * static_cast<unsigned long long>(nn - q + i) /
          static_cast<unsigned long long>(i);
      if (c > static_cast<unsigned __int128>(cap)) return cap;
    }
    return static_cast<long long>(c);
  };
  const long long total = count(n);
  const long long good = count(m);
  if (good == 0) return kInf;
  if (total < cap && good < cap)
    return static_cast<double>(total + 1) / static_cast<double>(good + 1);
  return static_cast<double>(
      std::exp(log_binomial_l(n, d + 1) - log_binomial_l(m, d + 1)));
}

ClusteringIterations expected_iterations_clustering(const TheoryParams& params) {
  params.validate();
  const long long n = params.n();
  long double expected = 0.0L;
  for (int j = 1; j <= params.K; ++j) {
    const long long pool = n - static_cast<long long>(j - 1) * params.m;
    const long double log_theta =
        std::log(static_cast<long double>(params.K - j + 1)) +
        log_binomial_l(params.m, params.d + 1) -
        log_binomial_l(pool, params.d + 1);
    const long double theta = std::min(std::exp(log_theta), 1.0L);
    expected += 1.0L / theta;
  }
  const double t1 = theta1(n, params.m, params.d);
  const double bound = t1 > 0.0 ? params.K / t1 : kInf;
  const double exp_d = static_cast<double>(expected);
  if (exp_d > bound * (1.0 + 1e-9))
    throw ContractViolationError(
        "expected_iterations_clustering: stage sum exceeds K/theta1 bound");
  return {exp_d, bound};
}

GeometricFitReport geometric_fit_test(const std::vector<long long>& samples,
                                      double theta) {
  if (samples.empty()) throw InvalidInputError("geometric_fit_test: no samples");
  if (samples.size() < 100)
    throw InvalidInputError("geometric_fit_test: need at least 100 samples");
  if (!(theta > 0.0) || theta > 1.0)
    throw InvalidInputError("geometric_fit_test: theta must lie in (0, 1]");
  for (long long s : samples)
    if (s < 1) throw InvalidInputError("geometric_fit_test: samples must be >= 1");

  const double nd = static_cast<double>(samples.size());
  if (theta == 1.0) {
    // Degenerate law: every draw succeeds immediately.
    GeometricFitReport r;
    bool all_one = true;
    for (long long s : samples) all_one = all_one && (s == 1);
    r.pass = all_one;
    r.mean_z = all_one ? 0.0 : kInf;
    r.var_z = all_one ? 0.0 : kInf;
    return r;
  }

  long double sum = 0.0L;
  for (long long s : samples) sum += static_cast<long double>(s);
  const double mean = static_cast<double>(sum / nd);
  long double ss = 0.0L;
  for (long long s : samples) {
    const long double c = static_cast<long double>(s) - mean;
    ss += c * c;
  }
  const double s2 = static_cast<double>(ss / (nd - 1.0));

  const double q = 1.0 - theta;
  const double mu = 1.0 / theta;
  const double var = q / (theta * theta);
  // Fourth central moment of the geometric law on {1,2,...}:
  // mu4 = sigma^4 (9 + theta^2 / (1-theta)).
  const double mu4 = var * var * (9.0 + theta * theta / q);

  GeometricFitReport r;
  r.mean_z = (mean - mu) / std::sqrt(var / nd);
  r.var_z = (s2 - var) / std::sqrt((mu4 - var * var) / nd);
  r.pass = std::abs(r.mean_z) <= 3.0 && std::abs(r.var_z) <= 3.0;
  return r;
}

}  // namespace subspace
