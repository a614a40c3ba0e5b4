#include "subspace/scene_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subspace/errors.hpp"

namespace subspace {
namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << fmt17(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed", path);
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading", path);
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw IoError("bad matrix header", path);
  Eigen::MatrixXd m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw IoError("truncated matrix body", path);
  return m;
}

void write_scene(const std::string& prefix, const Scene& scene) {
  write_matrix(prefix + ".points.txt", scene.points);
  {
    const std::string path = prefix + ".labels.txt";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing", path);
    for (int v : scene.labels) out << v << '\n';
    if (!out) throw IoError("write failed", path);
  }
  for (std::size_t k = 0; k < scene.subspaces.size(); ++k) {
    // Basis vectors go out as rows to match the point-file orientation.
    write_matrix(prefix + ".basis" + std::to_string(k + 1) + ".txt",
                 scene.subspaces[k].basis().transpose());
  }
}

LoadedScene read_scene(const std::string& prefix) {
  LoadedScene scene;
  scene.points = read_matrix(prefix + ".points.txt");

  const std::string label_path = prefix + ".labels.txt";
  if (std::filesystem::exists(label_path)) {
    std::ifstream in(label_path);
    if (!in) throw IoError("cannot open for reading", label_path);
    int v = 0;
    while (in >> v) scene.labels.push_back(v);
    if (scene.labels.size() != static_cast<std::size_t>(scene.points.rows()))
      throw IoError("label count differs from point count", label_path);
  }

  for (int k = 1;; ++k) {
    const std::string path = prefix + ".basis" + std::to_string(k) + ".txt";
    if (!std::filesystem::exists(path)) break;
    scene.subspaces.emplace_back(read_matrix(path).transpose());
  }
  return scene;
}

}  // namespace subspace
