#include "cpgnn/propagation.hpp"

#include <cmath>
#include <sstream>

namespace cpgnn {

void PropagationConfig::validate() const {
  if (num_layers < 1) throw InputError("propagation needs at least one layer");
}

ad::Var center_beliefs(ad::Var prior) {
  return ad::add_scalar(prior, -1.0 / static_cast<double>(prior.cols()));
}

ad::Var propagate(const SparseGraph& g, ad::Var centered, ad::Var hbar,
                  const PropagationConfig& cfg) {
  cfg.validate();
  if (hbar.rows() != hbar.cols() || centered.cols() != hbar.rows()) {
    throw InputError("propagate: beliefs " + shape_string(centered.rows(), centered.cols()) +
                     " incompatible with H " + shape_string(hbar.rows(), hbar.cols()));
  }
  if (static_cast<std::size_t>(centered.rows()) != g.num_nodes()) {
    throw InputError("propagate: " + std::to_string(centered.rows()) + " belief rows for " +
                     std::to_string(g.num_nodes()) + " nodes");
  }
  Vector degree(static_cast<Eigen::Index>(g.num_nodes()));
  for (std::size_t v = 0; v < g.num_nodes(); ++v) degree(static_cast<Eigen::Index>(v)) = static_cast<double>(g.degree(v));

  ad::Var b = centered;
  for (int k = 1; k <= cfg.num_layers; ++k) {
    ad::Var message = ad::matmul(b, hbar);
    ad::Var next = ad::add(centered, ad::spmm(g.adjacency(), message));
    if (k < cfg.num_layers && cfg.echo_cancellation) {
      next = ad::sub(next, ad::scale_rows(degree, ad::matmul(message, hbar)));
    }
    b = cfg.activation == Activation::Relu ? ad::relu(next) : next;
  }
  return b;
}

Matrix sinkhorn_knopp(const Matrix& m, double tol, int max_iters) {
  if (m.rows() != m.cols()) {
    throw InputError("sinkhorn_knopp: expected a square matrix, got " + shape_string(m.rows(), m.cols()));
  }
  if (!m.allFinite() || (m.array() < 0.0).any()) {
    throw InputError("sinkhorn_knopp: entries must be finite and nonnegative");
  }
  Matrix s = m;
  double worst = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector cols = s.colwise().sum().transpose();
    if ((cols.array() <= 0.0).any()) throw ConvergenceError("sinkhorn_knopp: all-zero column");
    s = s * cols.cwiseInverse().asDiagonal();
    const Vector rows = s.rowwise().sum();
    if ((rows.array() <= 0.0).any()) throw ConvergenceError("sinkhorn_knopp: all-zero row");
    s = rows.cwiseInverse().asDiagonal() * s;
    worst = (s.colwise().sum().array() - 1.0).abs().maxCoeff();
    if (worst <= tol) return s;
  }
  std::ostringstream os;
  os << "sinkhorn_knopp: no convergence in " << max_iters << " iterations (worst column sum off by "
     << worst << ")";
  throw ConvergenceError(os.str());
}

Matrix smooth_for_sinkhorn(const Matrix& m, double scale) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double peak = out.row(i).maxCoeff();
    out.row(i).array() += scale * (peak > 0.0 ? peak : 1.0);
  }
  return out;
}

CompatParam init_hbar(const SparseGraph& g, const LabelAssignment& labels,
                      std::span<const NodeId> train, const Matrix& prior) {
  if (train.empty()) throw InputError("init_hbar: empty training set");
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  const int k = labels.num_classes();
  if (prior.rows() != n || prior.cols() != k) {
    throw InputError("init_hbar: prior beliefs " + shape_string(prior.rows(), prior.cols()) +
                     " expected " + shape_string(n, k));
  }
  Matrix enhanced = prior;
  for (NodeId v : train) {
    const auto r = static_cast<Eigen::Index>(v);
    enhanced.row(r).setZero();
    enhanced(r, labels[v]) = 1.0;
  }
  const Matrix neighbor_sum = g.adjacency() * enhanced;
  Matrix raw = Matrix::Zero(k, k);
  for (NodeId v : train) raw.row(labels[v]) += neighbor_sum.row(static_cast<Eigen::Index>(v));

  CompatParam cp;
  cp.initial_estimate = sinkhorn_knopp(smooth_for_sinkhorn(raw));
  cp.hbar0 = (cp.initial_estimate.array() - 1.0 / k).matrix();
  cp.hbar = ad::Tensor(cp.hbar0);
  return cp;
}

Matrix recover_h(const Matrix& hbar) {
  const Matrix shifted = (hbar.array() + 1.0 / static_cast<double>(hbar.rows())).cwiseMax(0.0).matrix();
  try {
    return sinkhorn_knopp(shifted);
  } catch (const ConvergenceError&) {
  }
  for (double scale : {1e-6, 1e-4}) {
    try {
      return sinkhorn_knopp(smooth_for_sinkhorn(shifted, scale));
    } catch (const ConvergenceError&) {
    }
  }
  return sinkhorn_knopp(smooth_for_sinkhorn(shifted, 1e-2));
}

double h_estimation_error(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw InputError("h_estimation_error: shape mismatch " +
                     shape_string(estimate.rows(), estimate.cols()) + " vs " +
                     shape_string(truth.rows(), truth.cols()));
  }
  return (estimate - truth).cwiseAbs().sum() / static_cast<double>(estimate.size());
}

}  // namespace cpgnn
