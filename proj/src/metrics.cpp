#include "subspace/metrics.hpp"

#include "subspace/errors.hpp"

namespace subspace {

double recovery_angle(const Subspace& estimated, const Subspace& truth) {
  const std::vector<double> angles = principal_angles(estimated, truth);
  return angles.back();
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty()) throw InvalidInputError("rand_index: empty labeling");
  if (a.size() != b.size())
    throw InvalidInputError("rand_index: label vectors differ in length");
  const std::size_t n = a.size();
  if (n == 1) return 1.0;
  long long agree = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1 : 0;
  const long long pairs = static_cast<long long>(n) *
                          static_cast<long long>(n - 1) / 2;
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

}  // namespace subspace
