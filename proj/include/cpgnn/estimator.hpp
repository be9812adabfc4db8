#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpgnn/autodiff.hpp"
#include "cpgnn/rng.hpp"
#include "cpgnn/types.hpp"

namespace cpgnn {

enum class EstimatorKind { Mlp, Cheby };
enum class Activation { Identity, Relu };

std::string to_string(EstimatorKind kind);
std::string to_string(Activation act);
EstimatorKind parse_estimator_kind(const std::string& s);
Activation parse_activation(const std::string& s);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Mlp;
  // Empty means a single linear layer from features to classes.
  std::vector<std::size_t> hidden_dims{64};
  int cheby_order = 2;
  double dropout = 0.0;
  Activation activation = Activation::Relu;

  void validate() const;
};

// Uniform on [-sqrt(6 / (rows + cols)), +sqrt(6 / (rows + cols))].
Matrix glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Stage-one classifier producing logits R^(K). The graph operator is only
// touched by the Chebyshev variant.
class PriorEstimator {
 public:
  PriorEstimator() = default;
  PriorEstimator(EstimatorConfig cfg, std::size_t in_dim, std::size_t num_classes, Rng& rng);

  const EstimatorConfig& config() const { return cfg_; }
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t num_classes() const { return num_classes_; }

  // layers()[k][i] is W_i^(k); MLP layers have a single weight.
  std::vector<std::vector<ad::Tensor>>& layers() { return layers_; }
  const std::vector<std::vector<ad::Tensor>>& layers() const { return layers_; }
  std::vector<ad::Tensor*> parameters();

  // `dropout_rng` enables dropout when the configured rate is positive.
  ad::Var forward(ad::Tape& tape, const SparseMatrix& features,
                  const SparseMatrix& laplacian_tilde, Rng* dropout_rng = nullptr);

 private:
  EstimatorConfig cfg_;
  std::size_t num_classes_ = 0;
  std::vector<std::vector<ad::Tensor>> layers_;
};

ad::Var mlp_forward(ad::Tape& tape, PriorEstimator& est, const SparseMatrix& features,
                    Rng* dropout_rng = nullptr);
ad::Var cheby_forward(ad::Tape& tape, PriorEstimator& est, const SparseMatrix& laplacian_tilde,
                      const SparseMatrix& features, Rng* dropout_rng = nullptr);

// B_p = softmax(R^(K)).
inline ad::Var prior_beliefs(ad::Var logits) { return ad::row_softmax(logits); }

}  // namespace cpgnn
