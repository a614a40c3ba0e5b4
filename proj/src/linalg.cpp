#include "subspace/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace subspace {
namespace {

// Jacobi is the most accurate choice at tuple scale; divide-and-conquer
// takes over for larger blocks where Jacobi's O(q^3) sweeps start to hurt.
Eigen::VectorXd singular_values_of(const Eigen::MatrixXd& m) {
  if (std::min(m.rows(), m.cols()) <= 16) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  }
  return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
}

int rank_from_singular_values(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double largest = sv(0);
  if (!(largest > 0.0)) return 0;
  const double cut = rel_tol * largest;
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

}  // namespace

Subspace::Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  const Eigen::Index p = basis_.rows();
  const Eigen::Index d = basis_.cols();
  if (d < 1 || d > p)
    throw InvalidInputError("Subspace: dimension must satisfy 1 <= d <= p");
  if (!basis_.allFinite())
    throw InvalidInputError("Subspace: basis has non-finite entries");
  constexpr double tol = 1e-12;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(basis_.col(j).norm() - 1.0) > tol)
      throw InvalidInputError("Subspace: basis column is not unit length");
    for (Eigen::Index k = j + 1; k < d; ++k) {
      if (std::abs(basis_.col(j).dot(basis_.col(k))) > tol)
        throw InvalidInputError("Subspace: basis columns are not orthogonal");
    }
  }
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& row_points,
                               const std::vector<int>& indices) {
  const Eigen::Index n = row_points.rows();
  Eigen::MatrixXd out(row_points.cols(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int i = indices[j];
    if (i < 0 || i >= n)
      throw InvalidInputError("gather_columns: index out of range");
    out.col(static_cast<Eigen::Index>(j)) = row_points.row(i).transpose();
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.cols() < 1 || m.cols() > m.rows())
    throw InvalidInputError("numerical_rank: need 1 <= cols <= rows");
  if (!(rel_tol > 0.0))
    throw InvalidInputError("numerical_rank: rel_tol must be positive");
  if (!m.allFinite())
    throw InvalidInputError("numerical_rank: matrix has non-finite entries");
  return rank_from_singular_values(singular_values_of(m), rel_tol);
}

bool is_linearly_dependent(const Eigen::MatrixXd& points_as_columns,
                           double rel_tol) {
  return numerical_rank(points_as_columns, rel_tol) <
         static_cast<int>(points_as_columns.cols());
}

bool is_linearly_dependent(const PointTuple& tuple, double rel_tol) {
  if (tuple.source_indices.size() !=
      static_cast<std::size_t>(tuple.points.cols()))
    throw InvalidInputError("PointTuple: index count differs from point count");
  return is_linearly_dependent(tuple.points, rel_tol);
}

Subspace orthonormal_basis(const Eigen::MatrixXd& points_as_columns,
                           double rel_tol) {
  if (points_as_columns.cols() < 1)
    throw InvalidInputError("orthonormal_basis: empty point list");
  if (!(rel_tol > 0.0))
    throw InvalidInputError("orthonormal_basis: rel_tol must be positive");
  if (!points_as_columns.allFinite())
    throw InvalidInputError("orthonormal_basis: non-finite entries");

  const bool small = std::min(points_as_columns.rows(),
                              points_as_columns.cols()) <= 16;
  Eigen::MatrixXd u;
  Eigen::VectorXd sv;
  if (small) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(points_as_columns,
                                          Eigen::ComputeThinU);
    u = svd.matrixU();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(points_as_columns, Eigen::ComputeThinU);
    u = svd.matrixU();
    sv = svd.singularValues();
  }
  const int r = rank_from_singular_values(sv, rel_tol);
  if (r == 0)
    throw DegenerateSpanError("orthonormal_basis: all points numerically zero");
  return Subspace(u.leftCols(r));
}

double residual_distance(const Eigen::VectorXd& point, const Subspace& s) {
  if (point.size() != s.ambient_dim())
    throw InvalidInputError("residual_distance: ambient dimension mismatch");
  if (!point.allFinite())
    throw InvalidInputError("residual_distance: non-finite point");
  const Eigen::MatrixXd& b = s.basis();
  return (point - b * (b.transpose() * point)).norm();
}

std::vector<double> principal_angles(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient_dim() != s2.ambient_dim())
    throw InvalidInputError("principal_angles: ambient dimension mismatch");
  // Cosines alone cannot resolve small angles (acos is ill-conditioned at 1,
  // flooring results around 2e-8), so angles below pi/4 are recomputed from
  // the sines, i.e. the singular values of (I - P1) B2.
  const Eigen::MatrixXd m = s1.basis().transpose() * s2.basis();
  const Eigen::VectorXd sv_cos =
      Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const Eigen::MatrixXd residual = s2.basis() - s1.basis() * m;
  const Eigen::VectorXd sv_sin =
      Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues();

  const Eigen::Index count = sv_cos.size();
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    const double c = std::clamp(sv_cos(i), 0.0, 1.0);
    // Descending cosines pair with ascending sines (both orderings walk the
    // angles from smallest to largest; extra unit sines, present when
    // dim(s1) < dim(s2), sit at the top and are never reached).
    const double s = std::clamp(sv_sin(sv_sin.size() - 1 - i), 0.0, 1.0);
    angles[static_cast<std::size_t>(i)] =
        c * c > 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace subspace
