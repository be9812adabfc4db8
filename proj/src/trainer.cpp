#include "cpgnn/trainer.hpp"

#include <chrono>
#include <cmath>

namespace cpgnn {

void TrainConfig::validate() const {
  if (pretrain_iters < 0 || max_epochs < 0 || patience < 0 || learning_rate < 0.0 ||
      weight_decay < 0.0 || cotrain_weight < 0.0) {
    throw InputError("training settings must be nonnegative");
  }
  if (patience > max_epochs) throw InputError("patience must not exceed max_epochs");
}

void adam_step(ad::Tensor& param, AdamMoments& state, std::int64_t step, const AdamConfig& cfg) {
  if (!param.requires_grad) return;
  if (state.first.size() != param.value.size()) {
    state.first = Matrix::Zero(param.rows(), param.cols());
    state.second = Matrix::Zero(param.rows(), param.cols());
  }
  state.first = cfg.beta1 * state.first + (1.0 - cfg.beta1) * param.grad;
  state.second = cfg.beta2 * state.second + (1.0 - cfg.beta2) * param.grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  param.value.array() -= cfg.learning_rate * (state.first.array() / c1) /
                         ((state.second.array() / c2).sqrt() + cfg.eps);
}

Adam::Adam(std::vector<ad::Tensor*> params, AdamConfig cfg)
    : params_(std::move(params)), state_(params_.size()), cfg_(cfg) {}

void Adam::zero_grad() {
  for (ad::Tensor* p : params_) p->zero_grad();
}

void Adam::step() {
  ++step_;
  for (std::size_t i = 0; i < params_.size(); ++i) adam_step(*params_[i], state_[i], step_, cfg_);
}

std::vector<ad::Tensor*> CpgnnModel::parameters() {
  auto params = estimator.parameters();
  params.push_back(&compat.hbar);
  return params;
}

Matrix CpgnnModel::prior_beliefs(const LabeledDataset& ds) {
  ad::Tape tape;
  return cpgnn::prior_beliefs(estimator.forward(tape, ds.features, ds.laplacian_tilde)).value();
}

Matrix CpgnnModel::final_beliefs(const LabeledDataset& ds) {
  ad::Tape tape;
  ad::Var prior = cpgnn::prior_beliefs(estimator.forward(tape, ds.features, ds.laplacian_tilde));
  ad::Var out = propagate(ds.graph, center_beliefs(prior), tape.parameter(compat.hbar), propagation);
  return cpgnn::final_beliefs(out).value();
}

namespace {

ad::Var prior_loss(ad::Tape& tape, std::span<ad::Tensor* const> params, ad::Var prior,
                   const LabeledDataset& ds, std::span<const NodeId> train, double weight_decay) {
  ad::Var ce = ad::masked_cross_entropy(prior, ds.labels, train);
  if (weight_decay == 0.0) return ce;
  std::vector<ad::Var> weights;
  // A second binding of the same tensor; its gradient adds to the forward path's.
  for (ad::Tensor* p : params) weights.push_back(tape.parameter(*p));
  return ad::add(ce, ad::scale(ad::l2_penalty(weights), weight_decay));
}

}  // namespace

LossTerms cpgnn_loss(ad::Tape& tape, CpgnnModel& model, const LabeledDataset& ds,
                     std::span<const NodeId> train, const TrainConfig& cfg, Rng* dropout_rng) {
  LossTerms t;
  ad::Var logits = model.estimator.forward(tape, ds.features, ds.laplacian_tilde, dropout_rng);
  t.prior = prior_beliefs(logits);
  ad::Var hbar = tape.parameter(model.compat.hbar);
  t.final = final_beliefs(propagate(ds.graph, center_beliefs(t.prior), hbar, model.propagation));
  t.ce_final = ad::masked_cross_entropy(t.final, ds.labels, train);

  const double eta = cfg.ablation.no_cotrain ? 0.0 : cfg.cotrain_weight;
  if (eta > 0.0) {
    const auto params = model.estimator.parameters();
    t.cotrain = ad::scale(prior_loss(tape, params, t.prior, ds, train, cfg.weight_decay), eta);
  } else {
    t.cotrain = tape.scalar(0.0);
  }
  t.phi = cfg.ablation.no_hbar_reg ? tape.scalar(0.0) : ad::row_sum_abs_penalty(hbar);
  t.total = ad::add(ad::add(t.ce_final, t.cotrain), t.phi);
  return t;
}

Matrix pretrain(PriorEstimator& est, const LabeledDataset& ds, std::span<const NodeId> train,
                const TrainConfig& cfg, std::vector<double>* losses) {
  if (train.empty()) throw InputError("pretrain: empty training set");
  const auto params = est.parameters();
  Adam opt(params, AdamConfig{cfg.learning_rate});
  Rng dropout_rng(Rng::derive(cfg.seed, 11));
  const int iters = cfg.ablation.no_pretrain ? 0 : cfg.pretrain_iters;
  for (int it = 0; it < iters; ++it) {
    try {
      ad::Tape tape;
      ad::Var prior = prior_beliefs(est.forward(tape, ds.features, ds.laplacian_tilde, &dropout_rng));
      ad::Var loss = prior_loss(tape, params, prior, ds, train, cfg.weight_decay);
      if (losses != nullptr) losses->push_back(loss.scalar());
      opt.zero_grad();
      tape.backward(loss);
      opt.step();
    } catch (const NumericError& e) {
      throw TrainingError("pretraining diverged at iteration " + std::to_string(it) + ": " + e.what());
    }
  }
  ad::Tape tape;
  return prior_beliefs(est.forward(tape, ds.features, ds.laplacian_tilde)).value();
}

void fit(std::vector<ad::Tensor*> params, const StepFn& step, const LabeledDataset& ds,
         const Splits& splits, const TrainConfig& cfg, TrainReport& report,
         const std::function<double()>& probe) {
  cfg.validate();
  if (splits.val.empty()) throw InputError("training needs a non-empty validation set");
  if (splits.train.empty()) throw InputError("training needs a non-empty training set");
  Adam opt(params, AdamConfig{cfg.learning_rate});
  std::vector<Matrix> best;
  for (ad::Tensor* p : params) best.push_back(p->value);
  report.best_val_acc = -1.0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    try {
      ad::Tape tape;
      StepOutput out = step(tape, true);
      const double val = accuracy(out.beliefs.value(), ds.labels, splits.val);
      const double test = accuracy(out.beliefs.value(), ds.labels, splits.test);
      report.loss_total.push_back(out.loss.scalar());
      report.loss_ce_final.push_back(out.ce_final);
      report.loss_cotrain.push_back(out.cotrain);
      report.loss_phi.push_back(out.phi);
      report.val_acc.push_back(val);
      report.test_acc.push_back(test);
      if (probe) report.delta_h.push_back(probe());

      if (val > report.best_val_acc) {
        report.best_val_acc = val;
        report.best_epoch = static_cast<std::size_t>(epoch);
        report.test_acc_at_best = test;
        for (std::size_t i = 0; i < params.size(); ++i) best[i] = params[i]->value;
      } else if (static_cast<std::size_t>(epoch) - report.best_epoch >= static_cast<std::size_t>(cfg.patience)) {
        break;
      }
      opt.zero_grad();
      tape.backward(out.loss);
      for (ad::Tensor* p : params) {
        if (!p->grad.allFinite()) throw NumericError("non-finite gradient");
      }
      opt.step();
    } catch (const NumericError& e) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }
  if (report.val_acc.empty()) {
    report.best_val_acc = 0.0;
    return;
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
}

TrainResult train_full(const LabeledDataset& ds, const Splits& splits, const EstimatorConfig& est_cfg,
                       const PropagationConfig& prop_cfg, const TrainConfig& cfg,
                       const Matrix* true_h) {
  cfg.validate();
  prop_cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  TrainResult result;
  CpgnnModel& model = result.model;
  TrainReport& report = result.report;
  model.propagation = prop_cfg;
  model.estimator = PriorEstimator(est_cfg, ds.feature_dim(), static_cast<std::size_t>(ds.num_classes()), rng);

  const Matrix prior = pretrain(model.estimator, ds, splits.train, cfg, &report.pretrain_loss);

  if (cfg.ablation.no_hbar_init) {
    const int k = ds.num_classes();
    Matrix h = glorot_init(k, k, rng);
    model.compat.hbar = ad::Tensor(h);
    model.compat.hbar0 = h;
    model.compat.initial_estimate = recover_h(h);
  } else {
    model.compat = init_hbar(ds.graph, ds.labels, splits.train, prior);
  }
  report.h_initial = model.compat.initial_estimate;

  Rng dropout_rng(Rng::derive(cfg.seed, 13));
  const bool use_dropout = est_cfg.dropout > 0.0;
  StepFn step = [&](ad::Tape& tape, bool) {
    LossTerms t = cpgnn_loss(tape, model, ds, splits.train, cfg, use_dropout ? &dropout_rng : nullptr);
    StepOutput out{t.total, t.final, t.ce_final.scalar(), t.cotrain.scalar(), t.phi.scalar()};
    if (use_dropout) out.beliefs = tape.constant(model.final_beliefs(ds));
    return out;
  };
  std::function<double()> probe;
  if (true_h != nullptr) {
    probe = [&] { return h_estimation_error(recover_h(model.compat.hbar.value), *true_h); };
  }
  fit(model.parameters(), step, ds, splits, cfg, report, probe);

  model.compat.recovered = recover_h(model.compat.hbar.value);
  report.h_final = model.compat.recovered;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cpgnn
