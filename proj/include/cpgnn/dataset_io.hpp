#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cpgnn/dataset.hpp"
#include "cpgnn/graph.hpp"

namespace cpgnn {

// File formats (UTF-8, '#' starts a comment, blank lines ignored):
//   edges     "u v" per line, 0-based ids
//   labels    "node class" per line; every node 0..n-1 exactly once
//   features  dense: one whitespace-separated row per node, in node order
//             sparse: header "sparse <n> <F>", then "node col value" lines
// Parse failures throw InputError citing file and line.

std::vector<Edge> read_edge_list(const std::filesystem::path& path);
LabelAssignment read_labels(const std::filesystem::path& path);
SparseMatrix read_features(const std::filesystem::path& path, std::size_t num_nodes);

void write_edge_list(const std::filesystem::path& path, const SparseGraph& g);
void write_labels(const std::filesystem::path& path, const LabelAssignment& labels);
void write_dense_features(const std::filesystem::path& path, const Matrix& x);

struct DatasetPaths {
  std::string name;
  std::filesystem::path edges;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> features;  // absent: X = I

  // <prefix>.edges, <prefix>.labels and <prefix>.features if it exists.
  static DatasetPaths from_prefix(const std::filesystem::path& prefix);
};

// With `featureless`, the feature file is never opened and X = I.
LabeledDataset load_dataset(const DatasetPaths& paths, bool featureless = false);

struct DatasetStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  int classes = 0;
  std::size_t features = 0;
  double homophily = 0.0;
};

DatasetStats dataset_stats(const LabeledDataset& ds);

// Shortest round-trip decimal form; identical input gives identical text.
std::string format_double(double x);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cpgnn
