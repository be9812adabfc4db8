#include "cpgnn/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "cpgnn/rng.hpp"

namespace cpgnn {

LabeledDataset make_dataset(std::string name, SparseGraph graph, LabelAssignment labels,
                            SparseMatrix features) {
  const std::size_t n = graph.num_nodes();
  if (labels.size() != n) {
    throw InputError("dataset '" + name + "': " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(n) + " nodes");
  }
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw InputError("dataset '" + name + "': " + std::to_string(features.rows()) +
                     " feature rows for " + std::to_string(n) + " nodes");
  }
  LabeledDataset ds;
  ds.name = std::move(name);
  ds.laplacian_tilde = normalized_laplacian_tilde(graph);
  ds.graph = std::move(graph);
  ds.labels = std::move(labels);
  ds.features = std::move(features);
  ds.features.makeCompressed();
  return ds;
}

SparseMatrix identity_features(std::size_t n) {
  SparseMatrix eye(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  eye.setIdentity();
  eye.makeCompressed();
  return eye;
}

LabeledDataset featureless(const LabeledDataset& ds) {
  LabeledDataset out;
  out.name = ds.name;
  out.graph = ds.graph;
  out.labels = ds.labels;
  out.laplacian_tilde = ds.laplacian_tilde;
  out.features = identity_features(ds.num_nodes());
  return out;
}

Splits make_splits(const LabelAssignment& labels, SplitFractions fractions, std::uint64_t rng_seed) {
  if (fractions.train < 0.0 || fractions.val < 0.0 || fractions.train + fractions.val > 1.0) {
    throw InputError("split fractions must be nonnegative and sum to at most 1");
  }
  std::vector<std::vector<NodeId>> by_class(static_cast<std::size_t>(labels.num_classes()));
  for (NodeId v = 0; v < labels.size(); ++v) by_class[static_cast<std::size_t>(labels[v])].push_back(v);

  Rng rng(rng_seed);
  Splits s;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& nodes = by_class[c];
    const double size = static_cast<double>(nodes.size());
    const std::size_t n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fractions.train * size + 1e-9)));
    const auto n_val = static_cast<std::size_t>(std::floor(fractions.val * size + 1e-9));
    if (n_train + n_val > nodes.size()) {
      throw InputError("class " + std::to_string(c) + " has " + std::to_string(nodes.size()) +
                       " nodes, too few for the requested splits");
    }
    rng.shuffle(std::span<NodeId>(nodes));
    s.train.insert(s.train.end(), nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.insert(s.val.end(), nodes.begin() + static_cast<std::ptrdiff_t>(n_train),
                 nodes.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.insert(s.test.end(), nodes.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), nodes.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

double accuracy(const Matrix& beliefs, const LabelAssignment& labels, std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t hits = 0;
  for (NodeId v : nodes) {
    Eigen::Index best = 0;
    beliefs.row(static_cast<Eigen::Index>(v)).maxCoeff(&best);
    if (best == labels[v]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

}  // namespace cpgnn
