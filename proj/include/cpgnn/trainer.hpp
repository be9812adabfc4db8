#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cpgnn/autodiff.hpp"
#include "cpgnn/dataset.hpp"
#include "cpgnn/estimator.hpp"
#include "cpgnn/propagation.hpp"

namespace cpgnn {

struct Ablation {
  bool no_hbar_init = false;  // glorot H-bar instead of the label-based estimate
  bool no_hbar_reg = false;   // drop the row-centering penalty
  bool no_cotrain = false;    // eta = 0
  bool no_pretrain = false;   // skip estimator pretraining
};

struct TrainConfig {
  int pretrain_iters = 400;
  int max_epochs = 2000;
  int patience = 200;  // epochs without a validation-accuracy gain
  double learning_rate = 0.01;
  double weight_decay = 5e-4;  // lambda_p on the squared Frobenius norm
  double cotrain_weight = 1.0;  // eta
  std::uint64_t seed = 0;
  Ablation ablation;

  void validate() const;
};

// ---- optimizer ----

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamMoments {
  Matrix first;
  Matrix second;
};

// One bias-corrected Adam update of `param` from `param.grad`; `step` is
// 1-based. Frozen tensors (requires_grad == false) are left alone.
void adam_step(ad::Tensor& param, AdamMoments& state, std::int64_t step, const AdamConfig& cfg);

class Adam {
 public:
  Adam(std::vector<ad::Tensor*> params, AdamConfig cfg);
  void zero_grad();
  void step();
  std::int64_t steps_taken() const { return step_; }

 private:
  std::vector<ad::Tensor*> params_;
  std::vector<AdamMoments> state_;
  AdamConfig cfg_;
  std::int64_t step_ = 0;
};

// ---- reports ----

struct TrainReport {
  std::vector<double> pretrain_loss;
  // Per joint epoch, evaluated with the parameters entering that epoch.
  std::vector<double> loss_total;
  std::vector<double> loss_ce_final;
  std::vector<double> loss_cotrain;
  std::vector<double> loss_phi;
  std::vector<double> val_acc;
  std::vector<double> test_acc;
  std::vector<double> delta_h;  // empty unless a true H was supplied

  std::size_t best_epoch = 0;
  double best_val_acc = 0.0;
  double test_acc_at_best = 0.0;

  std::optional<Matrix> h_initial;  // doubly stochastic estimate at init
  std::optional<Matrix> h_final;    // recovered from the best H-bar
  double wall_seconds = 0.0;        // not part of any reproducible artifact
};

// ---- CPGNN ----

struct CpgnnModel {
  PriorEstimator estimator;
  CompatParam compat;
  PropagationConfig propagation;

  std::vector<ad::Tensor*> parameters();
  Matrix prior_beliefs(const LabeledDataset& ds);
  Matrix final_beliefs(const LabeledDataset& ds);
};

struct LossTerms {
  ad::Var total;
  ad::Var ce_final;
  ad::Var cotrain;  // eta * (CE_prior + lambda_p * ||Theta_p||^2)
  ad::Var phi;
  ad::Var prior;    // B_p
  ad::Var final;    // B_f
};

// Builds the full joint objective on `tape`.
LossTerms cpgnn_loss(ad::Tape& tape, CpgnnModel& model, const LabeledDataset& ds,
                     std::span<const NodeId> train, const TrainConfig& cfg,
                     Rng* dropout_rng = nullptr);

// Runs cfg.pretrain_iters Adam steps on CE_prior + lambda_p * ||Theta_p||^2
// and returns prior beliefs for every node. Appends per-step losses to
// `losses` when given.
Matrix pretrain(PriorEstimator& est, const LabeledDataset& ds, std::span<const NodeId> train,
                const TrainConfig& cfg, std::vector<double>* losses = nullptr);

struct TrainResult {
  CpgnnModel model;
  TrainReport report;
};

// Pretrain, initialize H-bar, then joint training with early stopping on
// validation accuracy. The best snapshot is restored before returning.
// Throws TrainingError on divergence.
TrainResult train_full(const LabeledDataset& ds, const Splits& splits, const EstimatorConfig& est_cfg,
                       const PropagationConfig& prop_cfg, const TrainConfig& cfg,
                       const Matrix* true_h = nullptr);

// ---- shared early-stopping loop ----

struct StepOutput {
  ad::Var loss;
  ad::Var beliefs;
  double ce_final = 0.0;
  double cotrain = 0.0;
  double phi = 0.0;
};

using StepFn = std::function<StepOutput(ad::Tape&, bool training)>;

// Full-batch Adam with early stopping. `probe` runs once per epoch before
// the update and its result is appended to report.delta_h.
void fit(std::vector<ad::Tensor*> params, const StepFn& step, const LabeledDataset& ds,
         const Splits& splits, const TrainConfig& cfg, TrainReport& report,
         const std::function<double()>& probe = {});

}  // namespace cpgnn
