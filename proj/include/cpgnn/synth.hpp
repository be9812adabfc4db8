#pragma once

#include <cstdint>
#include <vector>

#include "cpgnn/graph.hpp"
#include "cpgnn/types.hpp"

namespace cpgnn {

struct SynthConfig {
  int num_classes = 0;
  std::vector<std::size_t> class_sizes;  // N, one entry per class
  std::size_t seed_nodes = 0;            // n0, joined as a chain
  std::size_t edges_per_node = 1;        // m
  Matrix target_compat;                  // C x C, rows sum to 1
  std::uint64_t rng_seed = 0;

  std::size_t total_nodes() const;
  // Throws InputError when an invariant does not hold.
  void validate() const;
};

struct SynthGraph {
  SparseGraph graph;
  LabelAssignment labels;
  // Attachments that fell short of m because fewer than m existing nodes had
  // positive weight (happens early on for near-block-diagonal targets).
  std::size_t missing_edges = 0;
};

// Diagonal h; remaining mass (1 - h) spread over the off-diagonal entries
// with weight decay^(d - 1), d the cyclic distance |i - j| wrapped mod C.
// decay = 1 is uniform, decay = 0 keeps only the two adjacent classes.
// For C = 1 the only valid matrix is [[1]].
Matrix make_target_compat(int num_classes, double h, double decay = 1.0);

// Compatibility-weighted preferential attachment. Node v >= n0 attaches to m
// distinct earlier nodes drawn without replacement with weight
// H[y_v, y_u] * degree(u). If only k < m nodes carry positive weight it
// attaches to all k; if none do, throws GenerationError naming the step.
SynthGraph generate(const SynthConfig& cfg);

// Per-class pools of feature vectors (one row per vector).
struct ReferenceFeatures {
  std::vector<Matrix> pools;
  std::size_t dim = 0;
  bool surrogate = false;  // true for Gaussian stand-in pools
};

// Class c draws from N(mu_c, I) where mu_c is a random direction scaled to
// norm `separation`.
ReferenceFeatures gaussian_reference_pools(const std::vector<std::size_t>& pool_sizes,
                                           std::size_t dim, double separation,
                                           std::uint64_t rng_seed);

// Gives every node a distinct vector from its class's pool. Throws
// GenerationError if a pool is smaller than its class.
Matrix transfer_features(const LabelAssignment& labels, const ReferenceFeatures& ref,
                         std::uint64_t rng_seed);

}  // namespace cpgnn
