#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cpgnn/graph.hpp"
#include "cpgnn/types.hpp"

namespace cpgnn {

struct LabeledDataset {
  std::string name;
  SparseGraph graph;
  LabelAssignment labels;
  SparseMatrix features;         // n x F
  SparseMatrix laplacian_tilde;  // cached for Chebyshev estimators
  bool surrogate_features = false;

  std::size_t num_nodes() const { return graph.num_nodes(); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features.cols()); }
  int num_classes() const { return labels.num_classes(); }
};

// Throws InputError when labels or features disagree with the node count.
LabeledDataset make_dataset(std::string name, SparseGraph graph, LabelAssignment labels,
                            SparseMatrix features);

SparseMatrix identity_features(std::size_t n);

// Same graph and labels with X replaced by the n x n identity.
LabeledDataset featureless(const LabeledDataset& ds);

// Disjoint node sets, each sorted ascending.
struct Splits {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
};

struct SplitFractions {
  double train = 0.1;
  double val = 0.1;
};

// Per class: floor(fraction * size) nodes for train (at least 1) and val,
// the remainder for test. Throws InputError when a class cannot supply them.
Splits make_splits(const LabelAssignment& labels, SplitFractions fractions, std::uint64_t rng_seed);

// Fraction of `nodes` whose row argmax in `beliefs` matches the label.
double accuracy(const Matrix& beliefs, const LabelAssignment& labels, std::span<const NodeId> nodes);

}  // namespace cpgnn
