#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "subspace/datagen.hpp"

namespace subspace {

/// Matrix text format: a header line "rows cols" followed by `rows` lines of
/// `cols` space-separated reals written with 17 significant digits (the
/// round-trip-exact precision for doubles).
void write_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::string& path);

/// Scene files under a common prefix: <prefix>.points.txt (n x p matrix),
/// <prefix>.labels.txt (n lines of k or 0), <prefix>.basis<k>.txt (one d x p
/// matrix per subspace, basis vectors as rows, k = 1..K).
void write_scene(const std::string& prefix, const Scene& scene);

/// A scene read back from files; labels and bases are optional companions.
struct LoadedScene {
  Eigen::MatrixXd points;
  std::vector<int> labels;          // empty when no label file exists
  std::vector<Subspace> subspaces;  // empty when no basis files exist
};

LoadedScene read_scene(const std::string& prefix);

}  // namespace subspace
