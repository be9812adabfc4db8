#include "cpgnn/baselines.hpp"

#include <chrono>

namespace cpgnn {

ad::Var simplified_gcn_forward(const SparseGraph& g, const SparseMatrix& features,
                               ad::Var theta) {
  if (static_cast<std::size_t>(features.rows()) != g.num_nodes()) {
    throw InputError("simplified_gcn_forward: " + std::to_string(features.rows()) +
                     " feature rows for " + std::to_string(g.num_nodes()) + " nodes");
  }
  ad::Var xw = ad::spmm(features, theta);
  return ad::row_softmax(ad::add(ad::spmm(g.adjacency(), xw), xw));
}

namespace {

BaselineResult run_baseline(std::vector<ad::Tensor*> params, const LabeledDataset& ds,
                            const Splits& splits, const TrainConfig& cfg,
                            const std::function<ad::Var(ad::Tape&)>& beliefs_fn) {
  const auto start = std::chrono::steady_clock::now();
  BaselineResult result;
  StepFn step = [&](ad::Tape& tape, bool) {
    ad::Var beliefs = beliefs_fn(tape);
    ad::Var ce = ad::masked_cross_entropy(beliefs, ds.labels, splits.train);
    ad::Var loss = ce;
    if (cfg.weight_decay > 0.0) {
      std::vector<ad::Var> weights;
      for (ad::Tensor* p : params) weights.push_back(tape.parameter(*p));
      loss = ad::add(ce, ad::scale(ad::l2_penalty(weights), cfg.weight_decay));
    }
    return StepOutput{loss, beliefs, ce.scalar(), 0.0, 0.0};
  };
  fit(params, step, ds, splits, cfg, result.report);
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

BaselineResult train_estimator_baseline(const LabeledDataset& ds, const Splits& splits,
                                        const EstimatorConfig& est_cfg, const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  PriorEstimator est(est_cfg, ds.feature_dim(), static_cast<std::size_t>(ds.num_classes()), rng);
  return run_baseline(est.parameters(), ds, splits, cfg, [&](ad::Tape& tape) {
    return prior_beliefs(est.forward(tape, ds.features, ds.laplacian_tilde));
  });
}

BaselineResult train_sgc_baseline(const LabeledDataset& ds, const Splits& splits,
                                  const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  ad::Tensor theta(glorot_init(static_cast<Eigen::Index>(ds.feature_dim()), ds.num_classes(), rng));
  return run_baseline({&theta}, ds, splits, cfg, [&](ad::Tape& tape) {
    return simplified_gcn_forward(ds.graph, ds.features, tape.parameter(theta));
  });
}

}  // namespace cpgnn
