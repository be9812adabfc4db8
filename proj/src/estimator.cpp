#include "cpgnn/estimator.hpp"

#include <cmath>

namespace cpgnn {

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::Mlp ? "mlp" : "cheby";
}

std::string to_string(Activation act) {
  return act == Activation::Relu ? "relu" : "identity";
}

EstimatorKind parse_estimator_kind(const std::string& s) {
  if (s == "mlp") return EstimatorKind::Mlp;
  if (s == "cheby") return EstimatorKind::Cheby;
  throw InputError("unknown estimator kind '" + s + "' (expected mlp or cheby)");
}

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "identity") return Activation::Identity;
  throw InputError("unknown activation '" + s + "' (expected relu or identity)");
}

void EstimatorConfig::validate() const {
  if (cheby_order < 1) throw InputError("cheby_order must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InputError("dropout must lie in [0, 1)");
  for (std::size_t d : hidden_dims) {
    if (d == 0) throw InputError("hidden layer widths must be positive");
  }
}

Matrix glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
  return w;
}

PriorEstimator::PriorEstimator(EstimatorConfig cfg, std::size_t in_dim, std::size_t num_classes,
                               Rng& rng)
    : cfg_(std::move(cfg)), num_classes_(num_classes) {
  cfg_.validate();
  if (in_dim == 0 || num_classes == 0) throw InputError("estimator dimensions must be positive");
  std::vector<std::size_t> widths{in_dim};
  widths.insert(widths.end(), cfg_.hidden_dims.begin(), cfg_.hidden_dims.end());
  widths.push_back(num_classes);
  const std::size_t terms = cfg_.kind == EstimatorKind::Mlp ? 1 : static_cast<std::size_t>(cfg_.cheby_order) + 1;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    std::vector<ad::Tensor> layer;
    for (std::size_t i = 0; i < terms; ++i) {
      layer.emplace_back(glorot_init(static_cast<Eigen::Index>(widths[k]),
                                     static_cast<Eigen::Index>(widths[k + 1]), rng));
    }
    layers_.push_back(std::move(layer));
  }
}

std::vector<ad::Tensor*> PriorEstimator::parameters() {
  std::vector<ad::Tensor*> out;
  for (auto& layer : layers_) {
    for (auto& w : layer) out.push_back(&w);
  }
  return out;
}

namespace {

ad::Var activate(ad::Var x, Activation act) {
  return act == Activation::Relu ? ad::relu(x) : x;
}

ad::Var dropout(ad::Var x, double rate, Rng* rng) {
  if (rng == nullptr || rate <= 0.0) return x;
  Matrix mask(x.rows(), x.cols());
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng->uniform() < rate ? 0.0 : keep;
  return ad::hadamard(x, x.tape()->constant(std::move(mask)));
}

// Sum_i T_i(L~) Z_i with Z_i = R W_i, using T_i = 2 L~ T_{i-1} - T_{i-2}.
ad::Var chebyshev_combine(const SparseMatrix& lap, const std::vector<ad::Var>& z) {
  ad::Var total = z[0];
  for (std::size_t i = 1; i < z.size(); ++i) {
    ad::Var prev2 = z[i];
    ad::Var prev1 = ad::spmm(lap, z[i]);
    for (std::size_t order = 2; order <= i; ++order) {
      ad::Var next = ad::sub(ad::scale(ad::spmm(lap, prev1), 2.0), prev2);
      prev2 = prev1;
      prev1 = next;
    }
    total = ad::add(total, prev1);
  }
  return total;
}

}  // namespace

ad::Var PriorEstimator::forward(ad::Tape& tape, const SparseMatrix& features,
                                const SparseMatrix& laplacian_tilde, Rng* dropout_rng) {
  if (features.cols() != layers_.front().front().rows()) {
    throw InputError("estimator: features " + shape_string(features.rows(), features.cols()) +
                     " do not match first layer " +
                     shape_string(layers_.front().front().rows(), layers_.front().front().cols()));
  }
  const bool cheby = cfg_.kind == EstimatorKind::Cheby;
  if (cheby && (laplacian_tilde.rows() != features.rows() || laplacian_tilde.cols() != features.rows())) {
    throw InputError("estimator: laplacian " +
                     shape_string(laplacian_tilde.rows(), laplacian_tilde.cols()) +
                     " does not match " + std::to_string(features.rows()) + " nodes");
  }
  ad::Var r;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    std::vector<ad::Var> z;
    for (ad::Tensor& w : layers_[k]) {
      ad::Var wv = tape.parameter(w);
      z.push_back(k == 0 ? ad::spmm(features, wv) : ad::matmul(r, wv));
    }
    r = cheby ? chebyshev_combine(laplacian_tilde, z) : z.front();
    if (k + 1 < layers_.size()) r = dropout(activate(r, cfg_.activation), cfg_.dropout, dropout_rng);
  }
  return r;
}

ad::Var mlp_forward(ad::Tape& tape, PriorEstimator& est, const SparseMatrix& features,
                    Rng* dropout_rng) {
  if (est.config().kind != EstimatorKind::Mlp) throw InputError("mlp_forward: estimator is not an MLP");
  return est.forward(tape, features, SparseMatrix(), dropout_rng);
}

ad::Var cheby_forward(ad::Tape& tape, PriorEstimator& est, const SparseMatrix& laplacian_tilde,
                      const SparseMatrix& features, Rng* dropout_rng) {
  if (est.config().kind != EstimatorKind::Cheby) {
    throw InputError("cheby_forward: estimator is not a Chebyshev estimator");
  }
  return est.forward(tape, features, laplacian_tilde, dropout_rng);
}

}  // namespace cpgnn
