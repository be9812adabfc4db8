// Command-line front end: synthetic generation, experiments, dataset
// statistics and the identity-compatibility equivalence check.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpgnn/dataset_io.hpp"
#include "cpgnn/experiment.hpp"
#include "cpgnn/synth.hpp"
#include "cpgnn/theorem.hpp"

namespace {

enum ExitCode { kOk = 0, kInputError = 1, kTrainingFailure = 2, kVerificationFailure = 3 };

using namespace cpgnn;
using nlohmann::json;

struct GenOptions {
  int classes = 10;
  std::size_t class_size = 1000;
  std::size_t n0 = 70;
  std::size_t m = 6;
  double h = 0.5;
  double compat_decay = 1.0;
  std::string compat_file;
  std::uint64_t seed = 0;
  std::string out_prefix = "syn";
  std::size_t feature_dim = 100;
  double feature_separation = 2.0;
};

int cmd_gen(const GenOptions& o) {
  SynthSpec spec;
  spec.classes = o.classes;
  spec.class_sizes.assign(static_cast<std::size_t>(o.classes), o.class_size);
  spec.n0 = o.n0;
  spec.m = o.m;
  spec.h = o.h;
  spec.compat_decay = o.compat_decay;
  if (!o.compat_file.empty()) spec.compat = read_matrix_csv(o.compat_file);
  spec.seed = o.seed;
  spec.feature_dim = o.feature_dim;
  spec.feature_separation = o.feature_separation;

  SynthDataset data = make_synthetic_dataset(spec);
  const LabeledDataset& ds = data.dataset;
  write_edge_list(o.out_prefix + ".edges", ds.graph);
  write_labels(o.out_prefix + ".labels", ds.labels);
  write_dense_features(o.out_prefix + ".features", Matrix(ds.features));

  json meta;
  meta["config"] = {{"classes", o.classes},   {"class_size", o.class_size}, {"n0", o.n0},
                    {"m", o.m},               {"seed", o.seed},             {"feature_dim", o.feature_dim},
                    {"feature_separation", o.feature_separation}};
  if (o.compat_file.empty()) {
    meta["config"]["h"] = o.h;
    meta["config"]["compat_decay"] = o.compat_decay;
  } else meta["config"]["compat_file"] = o.compat_file;
  json target = json::array();
  for (Eigen::Index i = 0; i < data.target_compat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < data.target_compat.cols(); ++j) row.push_back(data.target_compat(i, j));
    target.push_back(row);
  }
  meta["target_compat"] = target;
  meta["nodes"] = ds.num_nodes();
  meta["edges"] = ds.graph.num_edges();
  meta["missing_edges"] = data.missing_edges;
  meta["surrogate_features"] = true;
  meta["measured_h"] = homophily_ratio(ds.graph, ds.labels);
  try {
    const Matrix h = empirical_compatibility(ds.graph, ds.labels);
    json measured = json::array();
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < h.cols(); ++j) row.push_back(h(i, j));
      measured.push_back(row);
    }
    meta["measured_compat"] = measured;
  } catch (const NumericError&) {
    meta["measured_compat"] = nullptr;
  }
  write_text_file(o.out_prefix + ".meta.json", meta.dump(2) + "\n");
  std::cout << "nodes " << ds.num_nodes() << "  edges " << ds.graph.num_edges() << "  measured h "
            << format_double(meta["measured_h"].get<double>()) << '\n';
  return kOk;
}

int cmd_stats(const std::string& prefix, const std::string& edges, const std::string& labels,
              const std::string& features, bool as_json) {
  DatasetPaths paths;
  if (!prefix.empty()) {
    paths = DatasetPaths::from_prefix(prefix);
  } else {
    if (edges.empty() || labels.empty()) throw InputError("stats needs a prefix or --edges and --labels");
    paths.name = edges;
    paths.edges = edges;
    paths.labels = labels;
  }
  if (!features.empty()) paths.features = features;
  const DatasetStats s = dataset_stats(load_dataset(paths));
  if (as_json) {
    std::cout << json{{"nodes", s.nodes}, {"edges", s.edges}, {"classes", s.classes},
                      {"features", s.features}, {"homophily", s.homophily}}.dump(2) << '\n';
  } else {
    std::cout << "nodes      " << s.nodes << '\n'
              << "edges      " << s.edges << '\n'
              << "classes    " << s.classes << '\n'
              << "features   " << s.features << '\n'
              << "homophily  " << format_double(s.homophily) << '\n';
  }
  return kOk;
}

void print_table(const ResultsTable& table) {
  for (const auto& row : table.rows) {
    std::cout << row.method << "  " << format_double(row.mean) << " +/- " << format_double(row.stddev)
              << "  (" << row.succeeded << "/" << row.accuracies.size() << " splits)\n";
    for (std::size_t s = 0; s < row.errors.size(); ++s) {
      if (!row.errors[s].empty()) std::cerr << "  split " << s << " failed: " << row.errors[s] << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPGNN: compatibility-guided graph neural networks"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic graph with a target compatibility matrix");
  gen_cmd->set_help_flag("--help", "Print this help message and exit");  // frees --h
  gen_cmd->add_option("--classes", gen.classes, "Number of classes")->capture_default_str();
  gen_cmd->add_option("--class-size", gen.class_size, "Nodes per class")->capture_default_str();
  gen_cmd->add_option("--n0", gen.n0, "Seed chain length")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Edges added per new node")->capture_default_str();
  auto* h_opt = gen_cmd->add_option("--h", gen.h, "Diagonal of the target compatibility")->capture_default_str();
  auto* decay_opt = gen_cmd->add_option("--compat-decay", gen.compat_decay,
                                        "Off-diagonal weight ratio per step of cyclic class distance")
                        ->capture_default_str();
  gen_cmd->add_option("--compat-file", gen.compat_file, "CSV target compatibility matrix")
      ->excludes(h_opt)
      ->excludes(decay_opt);
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--out-prefix", gen.out_prefix, "Output path prefix")->capture_default_str();
  gen_cmd->add_option("--feature-dim", gen.feature_dim, "Surrogate feature dimension")->capture_default_str();
  gen_cmd->add_option("--feature-separation", gen.feature_separation, "Norm of class feature means")
      ->capture_default_str();

  std::string run_spec;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON spec");
  run_cmd->add_option("spec", run_spec, "Experiment JSON")->required();

  std::string sweep_spec;
  auto* sweep_cmd = app.add_subcommand("sweep-h", "Accuracy versus homophily on synthetic graphs");
  sweep_cmd->add_option("spec", sweep_spec, "Experiment JSON with a synth block")->required();

  std::string stats_prefix, stats_edges, stats_labels, stats_features;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Print dataset statistics");
  stats_cmd->add_option("dataset", stats_prefix, "Path prefix of <prefix>.edges/.labels[/.features]");
  stats_cmd->add_option("--edges", stats_edges, "Edge list file");
  stats_cmd->add_option("--labels", stats_labels, "Label file");
  stats_cmd->add_option("--features", stats_features, "Feature file");
  stats_cmd->add_flag("--json", stats_json, "Print JSON");

  std::size_t tc_nodes = 50;
  std::uint64_t tc_seed = 0;
  int tc_instances = 20, tc_classes = 5;
  double tc_tol = 1e-9;
  auto* tc_cmd = app.add_subcommand("theorem-check",
                                    "Check CPGNN with H fixed to I against softmax((A+I) X Theta)");
  tc_cmd->add_option("--n", tc_nodes, "Maximum nodes per instance")->capture_default_str();
  tc_cmd->add_option("--seed", tc_seed, "RNG seed")->capture_default_str();
  tc_cmd->add_option("--instances", tc_instances, "Random instances")->capture_default_str();
  tc_cmd->add_option("--classes", tc_classes, "Maximum classes per instance")->capture_default_str();
  tc_cmd->add_option("--tol", tc_tol, "Pass threshold on max |difference|")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*stats_cmd) return cmd_stats(stats_prefix, stats_edges, stats_labels, stats_features, stats_json);
    if (*run_cmd) {
      const ResultsTable table = run_experiment(load_experiment_spec(run_spec));
      print_table(table);
      return table.any_failure() ? kTrainingFailure : kOk;
    }
    if (*sweep_cmd) {
      bool failed = false;
      for (const SweepRow& row : run_sweep(load_experiment_spec(sweep_spec), &failed)) {
        std::cout << row.method << "  h=" << format_double(row.h) << "  " << format_double(row.mean)
                  << " +/- " << format_double(row.stddev) << "  (n=" << row.count << ")\n";
      }
      return failed ? kTrainingFailure : kOk;
    }
    if (*tc_cmd) {
      const TheoremCheckResult r = theorem_check(tc_instances, tc_nodes, tc_classes, tc_seed);
      std::cout << "instances " << r.instances << "  max |diff| " << format_double(r.max_abs_diff) << '\n';
      return r.max_abs_diff < tc_tol ? kOk : kVerificationFailure;
    }
  } catch (const TrainingError& e) {
    std::cerr << "training failure: " << e.what() << '\n';
    return kTrainingFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
