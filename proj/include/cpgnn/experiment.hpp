#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cpgnn/dataset.hpp"
#include "cpgnn/dataset_io.hpp"
#include "cpgnn/estimator.hpp"
#include "cpgnn/propagation.hpp"
#include "cpgnn/synth.hpp"
#include "cpgnn/trainer.hpp"

#include "json.hpp"

namespace cpgnn {

struct SynthSpec {
  int classes = 5;
  std::vector<std::size_t> class_sizes{400, 400, 400, 400, 400};
  std::size_t n0 = 70;
  std::size_t m = 6;
  double h = 0.5;
  double compat_decay = 1.0;
  std::optional<Matrix> compat;  // overrides h
  std::uint64_t seed = 1;
  std::size_t feature_dim = 100;
  double feature_separation = 2.0;

  SynthConfig to_config() const;
};

struct SynthDataset {
  LabeledDataset dataset;
  Matrix target_compat;
  std::size_t missing_edges = 0;
};

// Graph from the generator plus Gaussian surrogate features.
SynthDataset make_synthetic_dataset(const SynthSpec& spec);

enum class MethodKind { Cpgnn, Mlp, Cheby, Sgc };

// Names: MLP, GCN-Cheby, SGC, CPGNN-MLP-<K>, CPGNN-Cheby-<K>; CPGNN names
// accept ablation suffixes, e.g. "CPGNN-MLP-1+no_hbar_init+no_cotrain".
struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::Cpgnn;
  EstimatorKind estimator = EstimatorKind::Mlp;
  int layers = 1;
  Ablation ablation;

  std::string file_tag() const;
};

MethodSpec parse_method(const std::string& name);

struct SweepSpec {
  std::vector<double> h_values{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int instances = 3;
};

struct ExperimentSpec {
  std::optional<DatasetPaths> dataset;
  std::optional<SynthSpec> synth;
  std::vector<MethodSpec> methods;
  EstimatorConfig estimator;
  PropagationConfig propagation;
  TrainConfig train;
  int num_splits = 10;
  SplitFractions fractions;
  std::uint64_t seed = 0;
  bool featureless = false;
  std::filesystem::path output_dir = "cpgnn_out";
  SweepSpec sweep;

  void validate() const;
};

// Relative paths in the document resolve against `base_dir`.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct MethodResult {
  std::string method;
  std::vector<std::optional<double>> accuracies;  // one per split; nullopt on failure
  std::vector<std::string> errors;                // parallel to accuracies
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::size_t succeeded = 0;
};

struct ResultsTable {
  std::vector<MethodResult> rows;
  bool any_failure() const;
};

// Arithmetic mean and sample standard deviation (0 for fewer than 2 values).
std::pair<double, double> mean_and_stddev(const std::vector<double>& values);

// Trains every method on every split of `ds` and writes artifacts to `out`.
ResultsTable run_on_dataset(const LabeledDataset& ds, const ExperimentSpec& spec,
                            const std::filesystem::path& out);

// Loads or generates the dataset, then run_on_dataset into spec.output_dir.
ResultsTable run_experiment(const ExperimentSpec& spec);

struct SweepRow {
  std::string method;
  double h = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

// For each target h, generates spec.sweep.instances graphs and runs every
// method on each; writes accuracy_vs_h.csv. Requires a synth block.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, bool* any_failure = nullptr);

// Worker count: CPGNN_THREADS if set, else hardware concurrency.
unsigned worker_threads();

}  // namespace cpgnn
