#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "cpgnn/types.hpp"

namespace cpgnn {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  auto operator<=>(const Edge&) const = default;
};

// Immutable simple undirected graph. Self-loops and duplicate edges are
// removed at construction; adjacency is kept both as raw CSR arrays and as
// an Eigen sparse matrix for products.
class SparseGraph {
 public:
  SparseGraph() = default;

  // Throws InputError if an endpoint is >= n.
  static SparseGraph from_edges(std::span<const Edge> edges, std::size_t n);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }

  // Canonical edge list: u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {col_idx_.data() + row_ptr_[v], row_ptr_[v + 1] - row_ptr_[v]};
  }
  std::size_t degree(NodeId v) const { return degree_[v]; }
  const std::vector<std::size_t>& degrees() const { return degree_; }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<NodeId>& col_idx() const { return col_idx_; }

  // Binary adjacency A (symmetric, zero diagonal).
  const SparseMatrix& adjacency() const { return adjacency_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_idx_;
  std::vector<std::size_t> degree_;
  SparseMatrix adjacency_;
};

inline SparseGraph build_graph(std::span<const Edge> edges, std::size_t n) {
  return SparseGraph::from_edges(edges, n);
}

class LabelAssignment {
 public:
  LabelAssignment() = default;

  // Throws InputError on a negative id or an id >= num_classes.
  LabelAssignment(std::vector<ClassId> y, int num_classes);

  // Infers num_classes as max(y) + 1.
  static LabelAssignment from_labels(std::vector<ClassId> y);

  std::size_t size() const { return y_.size(); }
  int num_classes() const { return num_classes_; }
  ClassId operator[](NodeId v) const { return y_[v]; }
  const std::vector<ClassId>& y() const { return y_; }
  std::vector<std::size_t> class_sizes() const;

  // n x |Y| one-hot matrix.
  Matrix onehot() const;

 private:
  std::vector<ClassId> y_;
  int num_classes_ = 0;
};

// C[i][j] counts ordered edge endpoints (u, v) with y_u = i and y_v = j;
// every undirected edge contributes in both directions.
struct ClassEdgeCounts {
  Matrix counts;
};

ClassEdgeCounts class_edge_counts(const SparseGraph& g, const LabelAssignment& labels);

// Fraction of edges joining same-class nodes. Throws NumericError on an
// edgeless graph.
double homophily_ratio(const SparseGraph& g, const LabelAssignment& labels);

// H = (Y^T A Y) ./ (Y^T A E). Row-stochastic. Throws NumericError naming
// the first class that has no edge endpoints.
Matrix empirical_compatibility(const SparseGraph& g, const LabelAssignment& labels);

// L~ = -D^{-1/2} A D^{-1/2}, with d^{-1/2} := 0 for isolated nodes.
SparseMatrix normalized_laplacian_tilde(const SparseGraph& g);

}  // namespace cpgnn
