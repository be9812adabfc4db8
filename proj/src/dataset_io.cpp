#include "cpgnn/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cpgnn {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail_at(const fs::path& path, std::size_t line, const std::string& what) {
  throw InputError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

// Strips comments and surrounding whitespace; empty result means skip.
std::string_view content_of(const std::string& raw) {
  std::string_view s(raw);
  if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<Edge> read_edge_list(const fs::path& path) {
  auto in = open_input(path);
  std::vector<Edge> edges;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto s = content_of(raw);
    if (s.empty()) continue;
    const auto tok = tokens(s);
    Edge e;
    if (tok.size() != 2 || !parse_number(tok[0], e.u) || !parse_number(tok[1], e.v)) {
      fail_at(path, line, "expected 'u v' with nonnegative integer ids");
    }
    edges.push_back(e);
  }
  return edges;
}

LabelAssignment read_labels(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::pair<NodeId, ClassId>> entries;
  std::vector<std::size_t> lines;
  std::string raw;
  NodeId max_node = 0;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto s = content_of(raw);
    if (s.empty()) continue;
    const auto tok = tokens(s);
    NodeId v = 0;
    ClassId c = 0;
    if (tok.size() != 2 || !parse_number(tok[0], v) || !parse_number(tok[1], c) || c < 0) {
      fail_at(path, line, "expected 'node class' with nonnegative integers");
    }
    entries.emplace_back(v, c);
    lines.push_back(line);
    max_node = std::max(max_node, v);
  }
  if (entries.empty()) throw InputError(path.string() + ": no labels");
  std::vector<ClassId> y(max_node + 1, -1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [v, c] = entries[i];
    if (y[v] != -1) fail_at(path, lines[i], "node " + std::to_string(v) + " labeled twice");
    y[v] = c;
  }
  for (NodeId v = 0; v < y.size(); ++v) {
    if (y[v] == -1) throw InputError(path.string() + ": node " + std::to_string(v) + " has no label");
  }
  return LabelAssignment::from_labels(std::move(y));
}

SparseMatrix read_features(const fs::path& path, std::size_t num_nodes) {
  auto in = open_input(path);
  std::string raw;
  std::size_t line = 0;
  std::vector<Eigen::Triplet<double>> triplets;
  std::optional<std::size_t> width;
  std::size_t row = 0;
  bool sparse = false;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = content_of(raw);
    if (s.empty()) continue;
    const auto tok = tokens(s);
    if (first) {
      first = false;
      if (tok.front() == "sparse") {
        std::size_t n = 0, f = 0;
        if (tok.size() != 3 || !parse_number(tok[1], n) || !parse_number(tok[2], f)) {
          fail_at(path, line, "expected header 'sparse <n> <F>'");
        }
        if (n != num_nodes) {
          fail_at(path, line, "header declares " + std::to_string(n) + " nodes, dataset has " +
                                  std::to_string(num_nodes));
        }
        sparse = true;
        width = f;
        continue;
      }
    }
    if (sparse) {
      std::size_t v = 0, c = 0;
      double value = 0.0;
      if (tok.size() != 3 || !parse_number(tok[0], v) || !parse_number(tok[1], c) ||
          !parse_number(tok[2], value)) {
        fail_at(path, line, "expected 'node col value'");
      }
      if (v >= num_nodes || c >= *width) fail_at(path, line, "entry outside the declared shape");
      if (!std::isfinite(value)) fail_at(path, line, "non-finite feature value");
      triplets.emplace_back(static_cast<int>(v), static_cast<int>(c), value);
      continue;
    }
    if (!width) width = tok.size();
    if (tok.size() != *width) {
      fail_at(path, line, "row has " + std::to_string(tok.size()) + " values, expected " +
                              std::to_string(*width));
    }
    if (row >= num_nodes) fail_at(path, line, "more feature rows than nodes");
    for (std::size_t j = 0; j < tok.size(); ++j) {
      double value = 0.0;
      if (!parse_number(tok[j], value) || !std::isfinite(value)) fail_at(path, line, "bad number");
      if (value != 0.0) triplets.emplace_back(static_cast<int>(row), static_cast<int>(j), value);
    }
    ++row;
  }
  if (!width) throw InputError(path.string() + ": no feature rows");
  if (!sparse && row != num_nodes) {
    throw InputError(path.string() + ": " + std::to_string(row) + " feature rows for " +
                     std::to_string(num_nodes) + " nodes");
  }
  SparseMatrix x(static_cast<Eigen::Index>(num_nodes), static_cast<Eigen::Index>(*width));
  // Duplicate sparse entries are summed.
  x.setFromTriplets(triplets.begin(), triplets.end());
  x.makeCompressed();
  return x;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_edge_list(const fs::path& path, const SparseGraph& g) {
  auto out = open_output(path);
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_labels(const fs::path& path, const LabelAssignment& labels) {
  auto out = open_output(path);
  for (NodeId v = 0; v < labels.size(); ++v) out << v << ' ' << labels[v] << '\n';
}

void write_dense_features(const fs::path& path, const Matrix& x) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto s = content_of(raw);
    if (s.empty()) continue;
    std::vector<double> row;
    for (auto tok : tokens(s)) {
      double v = 0.0;
      if (!parse_number(tok, v)) fail_at(path, line, "bad number");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) fail_at(path, line, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + ": empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

void write_text_file(const fs::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

DatasetPaths DatasetPaths::from_prefix(const fs::path& prefix) {
  DatasetPaths p;
  p.name = prefix.filename().string();
  p.edges = prefix.string() + ".edges";
  p.labels = prefix.string() + ".labels";
  const fs::path features = prefix.string() + ".features";
  if (fs::exists(features)) p.features = features;
  return p;
}

LabeledDataset load_dataset(const DatasetPaths& paths, bool featureless) {
  LabelAssignment labels = read_labels(paths.labels);
  const std::size_t n = labels.size();
  const auto edges = read_edge_list(paths.edges);
  // Re-scan for the offending line so the error can cite it.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u >= n || edges[i].v >= n) {
      auto in = open_input(paths.edges);
      std::string raw;
      std::size_t seen = 0;
      for (std::size_t line = 1; std::getline(in, raw); ++line) {
        if (content_of(raw).empty()) continue;
        if (seen++ == i) {
          fail_at(paths.edges, line, "endpoint outside the " + std::to_string(n) + " labeled nodes");
        }
      }
    }
  }
  SparseGraph g = build_graph(edges, n);
  SparseMatrix x = (featureless || !paths.features) ? identity_features(n) : read_features(*paths.features, n);
  return make_dataset(paths.name, std::move(g), std::move(labels), std::move(x));
}

DatasetStats dataset_stats(const LabeledDataset& ds) {
  DatasetStats s;
  s.nodes = ds.num_nodes();
  s.edges = ds.graph.num_edges();
  s.classes = ds.num_classes();
  s.features = ds.feature_dim();
  s.homophily = ds.graph.num_edges() > 0 ? homophily_ratio(ds.graph, ds.labels) : std::nan("");
  return s;
}

}  // namespace cpgnn
