#pragma once

#include <vector>

#include "cpgnn/graph.hpp"
#include "cpgnn/rng.hpp"

namespace cpgnn::testing {

inline SparseGraph random_graph(std::size_t n, double density, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < density) edges.push_back({u, v});
    }
  }
  return SparseGraph::from_edges(edges, n);
}

inline LabelAssignment random_labels(std::size_t n, int classes, Rng& rng) {
  std::vector<ClassId> y(n);
  for (std::size_t v = 0; v < n; ++v) y[v] = static_cast<ClassId>(v % static_cast<std::size_t>(classes));
  rng.shuffle(std::span<ClassId>(y));
  return LabelAssignment(y, classes);
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

inline SparseGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return SparseGraph::from_edges(edges, n);
}

inline SparseGraph triangle() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  return SparseGraph::from_edges(edges, 3);
}

}  // namespace cpgnn::testing
