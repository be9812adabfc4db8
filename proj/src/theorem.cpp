#include "cpgnn/theorem.hpp"

#include <algorithm>

#include "cpgnn/autodiff.hpp"
#include "cpgnn/baselines.hpp"
#include "cpgnn/estimator.hpp"
#include "cpgnn/propagation.hpp"
#include "cpgnn/rng.hpp"

namespace cpgnn {

Matrix cpgnn_identity_compat_beliefs(const SparseGraph& g, const SparseMatrix& features,
                                     const Matrix& theta) {
  EstimatorConfig cfg;
  cfg.hidden_dims.clear();
  Rng rng(0);
  PriorEstimator est(cfg, static_cast<std::size_t>(theta.rows()), static_cast<std::size_t>(theta.cols()), rng);
  est.layers()[0][0].value = theta;

  ad::Tensor identity(Matrix::Identity(theta.cols(), theta.cols()), /*requires_grad=*/false);
  PropagationConfig prop;
  prop.num_layers = 1;
  prop.activation = Activation::Identity;

  ad::Tape tape;
  ad::Var logits = mlp_forward(tape, est, features);
  return final_beliefs(propagate(g, logits, tape.parameter(identity), prop)).value();
}

Matrix simplified_gcn_beliefs(const SparseGraph& g, const SparseMatrix& features, const Matrix& theta) {
  ad::Tape tape;
  return simplified_gcn_forward(g, features, tape.constant(theta)).value();
}

TheoremCheckResult theorem_check(int instances, std::size_t max_nodes, int max_classes,
                                 std::uint64_t seed) {
  if (instances < 1 || max_nodes < 2 || max_classes < 2) {
    throw InputError("theorem_check: need instances >= 1, max_nodes >= 2, max_classes >= 2");
  }
  Rng rng(seed);
  TheoremCheckResult result;
  for (int k = 0; k < instances; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(max_nodes - 1));
    const int classes = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_classes - 1)));
    const int dim = 1 + static_cast<int>(rng.below(8));
    const double density = rng.uniform(0.05, 0.4);

    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (rng.uniform() < density) edges.push_back({u, v});
      }
    }
    const SparseGraph g = build_graph(edges, n);
    Matrix x(static_cast<Eigen::Index>(n), dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    Matrix theta(dim, classes);
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta.data()[i] = rng.normal();
    const SparseMatrix xs = x.sparseView();

    const Matrix lhs = cpgnn_identity_compat_beliefs(g, xs, theta);
    const Matrix rhs = simplified_gcn_beliefs(g, xs, theta);
    result.max_abs_diff = std::max(result.max_abs_diff, (lhs - rhs).cwiseAbs().maxCoeff());
    ++result.instances;
  }
  return result;
}

}  // namespace cpgnn
