#pragma once

#include <Eigen/Dense>
#include <vector>

#include "subspace/errors.hpp"

namespace subspace {

/// Relative singular-value threshold separating genuine rank deficiency from
/// floating-point noise on unit-scale data.
inline constexpr double kDefaultRelTol = 1e-9;

/// Residual threshold for deciding that a point lies on a subspace.
inline constexpr double kDefaultMembershipTol = 1e-8;

/// A d-dimensional linear subspace of R^p, stored as an orthonormal basis in
/// the columns of a p x d matrix.  Construction validates orthonormality to
/// 1e-12.
class Subspace {
 public:
  explicit Subspace(Eigen::MatrixXd basis);

  int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

 private:
  Eigen::MatrixXd basis_;
};

/// A q-tuple of data points (as columns of a p x q matrix) together with the
/// indices those points carry in the originating point set.
struct PointTuple {
  Eigen::MatrixXd points;
  std::vector<int> source_indices;
};

/// Copies the rows of `row_points` named by `indices` into the columns of a
/// p x q matrix.  Point sets are stored row-major (one point per row);
/// tuple-level linear algebra wants points as columns.
Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& row_points,
                               const std::vector<int>& indices);

/// Number of singular values exceeding rel_tol times the largest one.
/// The all-zero matrix has rank 0.  Expects 1 <= cols <= rows.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kDefaultRelTol);

/// True when the columns fail to reach full column rank.
bool is_linearly_dependent(const Eigen::MatrixXd& points_as_columns,
                           double rel_tol = kDefaultRelTol);
bool is_linearly_dependent(const PointTuple& tuple,
                           double rel_tol = kDefaultRelTol);

/// Orthonormal basis of the span of the given points (as columns), computed
/// by SVD; the basis size equals the numerical rank under the same
/// threshold.  Throws DegenerateSpanError when the rank is zero.
Subspace orthonormal_basis(const Eigen::MatrixXd& points_as_columns,
                           double rel_tol = kDefaultRelTol);

/// Euclidean distance from a point to its orthogonal projection onto s.
double residual_distance(const Eigen::VectorXd& point, const Subspace& s);

/// Principal angles between two subspaces of the same ambient space, in
/// radians, ascending.  There are min(dim1, dim2) of them.
std::vector<double> principal_angles(const Subspace& s1, const Subspace& s2);

}  // namespace subspace
