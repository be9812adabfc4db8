#pragma once

#include <cstdint>

#include "cpgnn/graph.hpp"
#include "cpgnn/types.hpp"

namespace cpgnn {

// CPGNN reduced to the simplified-GCN case: a linear one-layer MLP whose
// logits X*Theta feed propagation directly, a single layer without the echo
// term, identity activation, and H-bar frozen to the identity.
Matrix cpgnn_identity_compat_beliefs(const SparseGraph& g, const SparseMatrix& features,
                                     const Matrix& theta);

// softmax((A + I) X Theta), evaluated through simplified_gcn_forward.
Matrix simplified_gcn_beliefs(const SparseGraph& g, const SparseMatrix& features, const Matrix& theta);

struct TheoremCheckResult {
  int instances = 0;
  double max_abs_diff = 0.0;
};

// Random graphs with 2..max_nodes nodes and 2..max_classes classes; returns
// the largest entrywise gap between the two belief matrices.
TheoremCheckResult theorem_check(int instances, std::size_t max_nodes, int max_classes,
                                 std::uint64_t seed);

}  // namespace cpgnn
