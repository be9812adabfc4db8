#pragma once

#include "cpgnn/autodiff.hpp"
#include "cpgnn/dataset.hpp"
#include "cpgnn/estimator.hpp"
#include "cpgnn/trainer.hpp"

namespace cpgnn {

// softmax((A + I) X Theta): no normalization, no nonlinearity.
ad::Var simplified_gcn_forward(const SparseGraph& g, const SparseMatrix& features,
                               ad::Var theta);

struct BaselineResult {
  TrainReport report;
};

// Trains the estimator alone (MLP or GCN-Cheby) on CE + lambda_p ||Theta||^2.
BaselineResult train_estimator_baseline(const LabeledDataset& ds, const Splits& splits,
                                        const EstimatorConfig& est_cfg, const TrainConfig& cfg);

// Trains Theta of the simplified GCN with the same objective.
BaselineResult train_sgc_baseline(const LabeledDataset& ds, const Splits& splits,
                                  const TrainConfig& cfg);

}  // namespace cpgnn
