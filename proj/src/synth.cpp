#include "cpgnn/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cpgnn/rng.hpp"

namespace cpgnn {

namespace {

// Integer Fenwick tree supporting weighted search.
class Fenwick {
 public:
  void push_back(std::int64_t w) {
    const std::size_t i = tree_.size() + 1;
    tree_.push_back(0);
    // Node i covers (i - lowbit(i), i]; gather the already-present part.
    std::int64_t acc = w;
    const std::size_t low = i & (~i + 1);
    for (std::size_t j = i - 1; j > i - low; j -= (j & (~j + 1))) acc += tree_[j - 1];
    tree_[i - 1] = acc;
    total_ += w;
  }

  void add(std::size_t idx, std::int64_t delta) {
    total_ += delta;
    for (std::size_t i = idx + 1; i <= tree_.size(); i += (i & (~i + 1))) tree_[i - 1] += delta;
  }

  std::int64_t total() const { return total_; }

  // Smallest idx with prefix_sum(idx + 1) > target, for 0 <= target < total().
  std::size_t find(std::int64_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(tree_.size()); step > 0; step >>= 1) {
      if (pos + step <= tree_.size() && tree_[pos + step - 1] <= target) {
        pos += step;
        target -= tree_[pos - 1];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::int64_t total_ = 0;
};

}  // namespace

std::size_t SynthConfig::total_nodes() const {
  return std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
}

void SynthConfig::validate() const {
  if (num_classes <= 0) throw InputError("synth: num_classes must be positive");
  if (class_sizes.size() != static_cast<std::size_t>(num_classes)) {
    throw InputError("synth: expected " + std::to_string(num_classes) + " class sizes, got " +
                     std::to_string(class_sizes.size()));
  }
  const std::size_t n = total_nodes();
  if (seed_nodes == 0 || seed_nodes >= n) {
    throw InputError("synth: need 0 < n0 < n (n0=" + std::to_string(seed_nodes) +
                     ", n=" + std::to_string(n) + ")");
  }
  if (edges_per_node < 1) throw InputError("synth: m must be >= 1");
  if (target_compat.rows() != num_classes || target_compat.cols() != num_classes) {
    throw InputError("synth: target compatibility must be " +
                     shape_string(num_classes, num_classes) + ", got " +
                     shape_string(target_compat.rows(), target_compat.cols()));
  }
  if ((target_compat.array() < 0.0).any() || !target_compat.allFinite()) {
    throw InputError("synth: target compatibility entries must be finite and >= 0");
  }
  for (Eigen::Index i = 0; i < target_compat.rows(); ++i) {
    const double s = target_compat.row(i).sum();
    if (std::abs(s - 1.0) > 1e-9) {
      throw InputError("synth: target compatibility row " + std::to_string(i) + " sums to " +
                       std::to_string(s));
    }
  }
}

Matrix make_target_compat(int num_classes, double h, double decay) {
  if (num_classes <= 0) throw InputError("make_target_compat: num_classes must be positive");
  if (!(h >= 0.0 && h <= 1.0)) {
    throw InputError("make_target_compat: h must lie in [0, 1], got " + std::to_string(h));
  }
  if (!(decay >= 0.0 && decay <= 1.0)) {
    throw InputError("make_target_compat: decay must lie in [0, 1], got " + std::to_string(decay));
  }
  if (num_classes == 1) {
    if (h != 1.0) throw InputError("make_target_compat: a single class forces h = 1");
    return Matrix::Ones(1, 1);
  }
  Matrix m = Matrix::Zero(num_classes, num_classes);
  for (int i = 0; i < num_classes; ++i) {
    double total = 0.0;
    for (int j = 0; j < num_classes; ++j) {
      if (j == i) continue;
      const int dist = std::min(std::abs(i - j), num_classes - std::abs(i - j));
      m(i, j) = std::pow(decay, dist - 1);
      total += m(i, j);
    }
    m.row(i) *= (1.0 - h) / total;
    m(i, i) = h;
  }
  return m;
}

SynthGraph generate(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.total_nodes();
  const std::size_t num_classes = static_cast<std::size_t>(cfg.num_classes);
  Rng rng(cfg.rng_seed);

  std::vector<ClassId> y;
  y.reserve(n);
  for (std::size_t c = 0; c < num_classes; ++c) y.insert(y.end(), cfg.class_sizes[c], static_cast<ClassId>(c));
  rng.shuffle(std::span<ClassId>(y));

  std::vector<Edge> edges;
  edges.reserve(cfg.seed_nodes - 1 + (n - cfg.seed_nodes) * cfg.edges_per_node);
  std::vector<std::int64_t> degree(n, 0);
  std::vector<Fenwick> weights(num_classes);
  std::vector<std::vector<NodeId>> members(num_classes);
  std::vector<std::size_t> slot(n, 0);

  auto add_node = [&](NodeId v) {
    const auto c = static_cast<std::size_t>(y[v]);
    slot[v] = members[c].size();
    members[c].push_back(v);
    weights[c].push_back(degree[v]);
  };
  auto bump = [&](NodeId v) {
    ++degree[v];
    weights[static_cast<std::size_t>(y[v])].add(slot[v], 1);
  };

  for (NodeId v = 0; v < cfg.seed_nodes; ++v) {
    add_node(v);
    if (v > 0) {
      edges.push_back({v - 1, v});
      bump(v - 1);
      bump(v);
    }
  }

  SynthGraph out;
  std::vector<NodeId> chosen;
  std::vector<double> class_weight(num_classes);
  for (NodeId v = cfg.seed_nodes; v < n; ++v) {
    const auto cv = static_cast<Eigen::Index>(y[v]);
    chosen.clear();
    for (std::size_t draw = 0; draw < cfg.edges_per_node; ++draw) {
      double total = 0.0;
      for (std::size_t c = 0; c < num_classes; ++c) {
        class_weight[c] = cfg.target_compat(cv, static_cast<Eigen::Index>(c)) *
                          static_cast<double>(weights[c].total());
        total += class_weight[c];
      }
      if (total <= 0.0) {
        if (draw == 0) {
          std::ostringstream os;
          os << "synth: every attachment weight is zero at step v=" << v << " (class " << y[v]
             << ")";
          throw GenerationError(os.str());
        }
        break;
      }
      double r = rng.uniform() * total;
      std::size_t c = 0;
      for (; c + 1 < num_classes; ++c) {
        if (class_weight[c] > 0.0 && r < class_weight[c]) break;
        r -= class_weight[c];
      }
      while (class_weight[c] <= 0.0) --c;  // rounding pushed r past the last positive class
      const double h = cfg.target_compat(cv, static_cast<Eigen::Index>(c));
      auto target = static_cast<std::int64_t>(std::floor(r / h));
      target = std::clamp<std::int64_t>(target, 0, weights[c].total() - 1);
      const NodeId u = members[c][weights[c].find(target)];
      chosen.push_back(u);
      weights[c].add(slot[u], -degree[u]);  // exclude from the remaining draws
    }
    out.missing_edges += cfg.edges_per_node - chosen.size();
    for (NodeId u : chosen) weights[static_cast<std::size_t>(y[u])].add(slot[u], degree[u]);
    add_node(v);
    for (NodeId u : chosen) {
      edges.push_back({u, v});
      bump(u);
      bump(v);
    }
  }

  out.graph = SparseGraph::from_edges(edges, n);
  out.labels = LabelAssignment(std::move(y), cfg.num_classes);
  return out;
}

ReferenceFeatures gaussian_reference_pools(const std::vector<std::size_t>& pool_sizes,
                                           std::size_t dim, double separation,
                                           std::uint64_t rng_seed) {
  if (dim == 0) throw InputError("feature dimension must be positive");
  Rng rng(rng_seed);
  ReferenceFeatures ref;
  ref.dim = dim;
  ref.surrogate = true;
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t size : pool_sizes) {
    Vector mean(d);
    for (Eigen::Index j = 0; j < d; ++j) mean(j) = rng.normal();
    mean *= separation / mean.norm();
    Matrix pool(static_cast<Eigen::Index>(size), d);
    for (Eigen::Index i = 0; i < pool.rows(); ++i) {
      for (Eigen::Index j = 0; j < d; ++j) pool(i, j) = mean(j) + rng.normal();
    }
    ref.pools.push_back(std::move(pool));
  }
  return ref;
}

Matrix transfer_features(const LabelAssignment& labels, const ReferenceFeatures& ref,
                         std::uint64_t rng_seed) {
  const auto sizes = labels.class_sizes();
  if (ref.pools.size() < sizes.size()) {
    throw GenerationError("feature transfer: " + std::to_string(sizes.size()) +
                          " classes but only " + std::to_string(ref.pools.size()) + " pools");
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (static_cast<std::size_t>(ref.pools[c].rows()) < sizes[c]) {
      throw GenerationError("feature transfer: class " + std::to_string(c) + " has " +
                            std::to_string(sizes[c]) + " nodes but its pool has only " +
                            std::to_string(ref.pools[c].rows()) + " vectors");
    }
  }
  Rng rng(rng_seed);
  std::vector<std::vector<Eigen::Index>> order(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    order[c].resize(static_cast<std::size_t>(ref.pools[c].rows()));
    std::iota(order[c].begin(), order[c].end(), Eigen::Index{0});
    rng.shuffle(std::span<Eigen::Index>(order[c]));
  }
  std::vector<std::size_t> next(sizes.size(), 0);
  Matrix x(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(ref.dim));
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const auto c = static_cast<std::size_t>(labels[v]);
    x.row(static_cast<Eigen::Index>(v)) = ref.pools[c].row(order[c][next[c]++]);
  }
  return x;
}

}  // namespace cpgnn
