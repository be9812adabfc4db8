#include "cpgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpgnn {

std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

SparseGraph SparseGraph::from_edges(std::span<const Edge> edges, std::size_t n) {
  SparseGraph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      std::ostringstream os;
      os << "edge (" << e.u << ", " << e.v << ") has an endpoint outside [0, " << n << ")";
      throw InputError(os.str());
    }
    if (e.u == e.v) continue;
    g.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.degree_.assign(n, 0);
  for (const Edge& e : g.edges_) {
    ++g.degree_[e.u];
    ++g.degree_[e.v];
  }
  g.row_ptr_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.row_ptr_[v + 1] = g.row_ptr_[v] + g.degree_[v];
  g.col_idx_.resize(g.row_ptr_[n]);
  std::vector<std::size_t> fill(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.col_idx_[fill[e.u]++] = e.v;
    g.col_idx_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.col_idx_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[v]),
              g.col_idx_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[v + 1]));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.col_idx_.size());
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) triplets.emplace_back(static_cast<int>(v), static_cast<int>(u), 1.0);
  }
  g.adjacency_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  g.adjacency_.setFromTriplets(triplets.begin(), triplets.end());
  g.adjacency_.makeCompressed();
  return g;
}

LabelAssignment::LabelAssignment(std::vector<ClassId> y, int num_classes)
    : y_(std::move(y)), num_classes_(num_classes) {
  if (num_classes_ <= 0) throw InputError("num_classes must be positive");
  for (std::size_t v = 0; v < y_.size(); ++v) {
    if (y_[v] < 0 || y_[v] >= num_classes_) {
      std::ostringstream os;
      os << "node " << v << " has class " << y_[v] << " outside [0, " << num_classes_ << ")";
      throw InputError(os.str());
    }
  }
}

LabelAssignment LabelAssignment::from_labels(std::vector<ClassId> y) {
  ClassId max_class = -1;
  for (ClassId c : y) max_class = std::max(max_class, c);
  return LabelAssignment(std::move(y), max_class + 1);
}

std::vector<std::size_t> LabelAssignment::class_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(num_classes_), 0);
  for (ClassId c : y_) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

Matrix LabelAssignment::onehot() const {
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(y_.size()), num_classes_);
  for (std::size_t v = 0; v < y_.size(); ++v) y(static_cast<Eigen::Index>(v), y_[v]) = 1.0;
  return y;
}

ClassEdgeCounts class_edge_counts(const SparseGraph& g, const LabelAssignment& labels) {
  if (labels.size() != g.num_nodes()) {
    throw InputError("label count " + std::to_string(labels.size()) + " != node count " +
                     std::to_string(g.num_nodes()));
  }
  const int k = labels.num_classes();
  Matrix c = Matrix::Zero(k, k);
  for (const Edge& e : g.edges()) {
    c(labels[e.u], labels[e.v]) += 1.0;
    c(labels[e.v], labels[e.u]) += 1.0;
  }
  return {std::move(c)};
}

double homophily_ratio(const SparseGraph& g, const LabelAssignment& labels) {
  if (g.num_edges() == 0) throw NumericError("homophily ratio is undefined on an edgeless graph");
  const Matrix c = class_edge_counts(g, labels).counts;
  return c.diagonal().sum() / c.sum();
}

Matrix empirical_compatibility(const SparseGraph& g, const LabelAssignment& labels) {
  Matrix c = class_edge_counts(g, labels).counts;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const double total = c.row(i).sum();
    if (total == 0.0) {
      throw NumericError("class " + std::to_string(i) +
                         " has no edge endpoints; its compatibility row is undefined");
    }
    c.row(i) /= total;
  }
  return c;
}

SparseMatrix normalized_laplacian_tilde(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.degree(v) > 0) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  SparseMatrix l = g.adjacency();
  for (Eigen::Index r = 0; r < l.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(l, r); it; ++it) {
      it.valueRef() = -inv_sqrt[static_cast<std::size_t>(it.row())] *
                      inv_sqrt[static_cast<std::size_t>(it.col())];
    }
  }
  return l;
}

}  // namespace cpgnn
