#pragma once

#include <optional>
#include <span>

#include "cpgnn/autodiff.hpp"
#include "cpgnn/estimator.hpp"
#include "cpgnn/graph.hpp"
#include "cpgnn/types.hpp"

namespace cpgnn {

struct PropagationConfig {
  int num_layers = 1;
  // Applied to every propagation layer; identity keeps centered beliefs signed.
  Activation activation = Activation::Identity;
  bool echo_cancellation = true;

  void validate() const;
};

// Trainable compatibility parameter H-bar, centered around zero.
struct CompatParam {
  ad::Tensor hbar;
  Matrix hbar0;             // value right after initialization
  Matrix initial_estimate;  // doubly stochastic estimate that produced hbar0
  std::optional<Matrix> recovered;
};

// B-bar^(0) = B_p - 1/|Y|.
ad::Var center_beliefs(ad::Var prior);

// Runs K layers. Layers 1..K-1:
//   B^(k) = act(B^(0) + A B^(k-1) H - D B^(k-1) H^2)
// Layer K drops the echo term. D is the node degree matrix.
ad::Var propagate(const SparseGraph& g, ad::Var centered, ad::Var hbar,
                  const PropagationConfig& cfg);

// B_f = softmax(B-bar^(K)).
inline ad::Var final_beliefs(ad::Var propagated) { return ad::row_softmax(propagated); }

inline constexpr double kSinkhornTol = 1e-8;
inline constexpr int kSinkhornMaxIters = 1000;

// Alternating column/row normalization of a nonnegative square matrix. Each
// sweep ends with the row pass, so returned rows sum to 1 up to rounding and
// columns to within `tol`. Throws ConvergenceError with the worst column sum
// when `max_iters` sweeps are not enough, or on an all-zero row or column.
Matrix sinkhorn_knopp(const Matrix& m, double tol = kSinkhornTol, int max_iters = kSinkhornMaxIters);

// Adds scale * (row max, or 1 for an all-zero row) to every entry of each row.
Matrix smooth_for_sinkhorn(const Matrix& m, double scale = 1e-6);

// Estimates H from training labels and pretrained prior beliefs:
//   B~ = M.Y + (1 - M).B_p,  H^ = S((M.Y)^T A B~),  H-bar_0 = H^ - 1/|Y|.
CompatParam init_hbar(const SparseGraph& g, const LabelAssignment& labels,
                      std::span<const NodeId> train, const Matrix& prior);

// H^ = S(max(H-bar + 1/|Y|, 0)). Falls back to smoothing at 1e-6, 1e-4 and
// 1e-2 when the clamped matrix lacks the support Sinkhorn needs.
Matrix recover_h(const Matrix& hbar);

// Mean absolute elementwise difference.
double h_estimation_error(const Matrix& estimate, const Matrix& truth);

}  // namespace cpgnn
