#include "cpgnn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "cpgnn/baselines.hpp"
#include "cpgnn/rng.hpp"

namespace cpgnn {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- synthetic data ----

SynthConfig SynthSpec::to_config() const {
  SynthConfig cfg;
  cfg.num_classes = classes;
  cfg.class_sizes = class_sizes;
  cfg.seed_nodes = n0;
  cfg.edges_per_node = m;
  cfg.target_compat = compat ? *compat : make_target_compat(classes, h, compat_decay);
  cfg.rng_seed = seed;
  return cfg;
}

SynthDataset make_synthetic_dataset(const SynthSpec& spec) {
  const SynthConfig cfg = spec.to_config();
  SynthGraph sg = generate(cfg);
  const ReferenceFeatures pools = gaussian_reference_pools(cfg.class_sizes, spec.feature_dim,
                                                           spec.feature_separation,
                                                           Rng::derive(spec.seed, 1));
  const Matrix x = transfer_features(sg.labels, pools, Rng::derive(spec.seed, 2));
  std::ostringstream name;
  name << "synth-h" << format_double(spec.h) << "-s" << spec.seed;
  SynthDataset out{make_dataset(name.str(), std::move(sg.graph), std::move(sg.labels), x.sparseView()),
                   cfg.target_compat, sg.missing_edges};
  out.dataset.surrogate_features = true;
  return out;
}

// ---- methods ----

std::string MethodSpec::file_tag() const {
  std::string tag;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      tag += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (c == '-' || c == '_') {
      tag += c;
    } else {
      tag += '_';
    }
  }
  return tag;
}

MethodSpec parse_method(const std::string& name) {
  MethodSpec m;
  m.name = name;
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
  if (parts.empty()) throw InputError("empty method name");
  const std::string& base = parts.front();
  if (base == "MLP" || base == "GCN-Cheby" || base == "SGC") {
    if (parts.size() > 1) throw InputError("ablations only apply to CPGNN methods: " + name);
    m.kind = base == "MLP" ? MethodKind::Mlp : (base == "SGC" ? MethodKind::Sgc : MethodKind::Cheby);
    m.estimator = base == "GCN-Cheby" ? EstimatorKind::Cheby : EstimatorKind::Mlp;
    return m;
  }
  const std::string mlp = "CPGNN-MLP-", cheby = "CPGNN-Cheby-";
  std::string layers;
  if (base.rfind(mlp, 0) == 0) {
    m.estimator = EstimatorKind::Mlp;
    layers = base.substr(mlp.size());
  } else if (base.rfind(cheby, 0) == 0) {
    m.estimator = EstimatorKind::Cheby;
    layers = base.substr(cheby.size());
  } else {
    throw InputError("unknown method '" + name + "'");
  }
  try {
    std::size_t used = 0;
    m.layers = std::stoi(layers, &used);
    if (used != layers.size() || m.layers < 1) throw std::invalid_argument(layers);
  } catch (const std::exception&) {
    throw InputError("bad propagation depth in method '" + name + "'");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& flag = parts[i];
    if (flag == "no_hbar_init") m.ablation.no_hbar_init = true;
    else if (flag == "no_hbar_reg") m.ablation.no_hbar_reg = true;
    else if (flag == "no_cotrain") m.ablation.no_cotrain = true;
    else if (flag == "no_pretrain") m.ablation.no_pretrain = true;
    else throw InputError("unknown ablation '" + flag + "' in method '" + name + "'");
  }
  return m;
}

// ---- spec parsing ----

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw InputError("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw InputError("empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw InputError("ragged matrix");
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (dataset.has_value() == synth.has_value()) {
    throw InputError("experiment spec needs exactly one of 'dataset' or 'synth'");
  }
  if (methods.empty()) throw InputError("experiment spec lists no methods");
  if (num_splits < 1) throw InputError("num_splits must be >= 1");
  if (sweep.instances < 1) throw InputError("sweep.instances must be >= 1");
  estimator.validate();
  propagation.validate();
  train.validate();
}

ExperimentSpec parse_experiment_spec(const json& doc, const fs::path& base_dir) {
  try {
    check_keys(doc, "experiment spec",
               {"dataset", "synth", "methods", "estimator", "propagation", "train", "num_splits",
                "split_fractions", "seed", "featureless", "output_dir", "sweep"});
    ExperimentSpec spec;
    if (doc.contains("dataset")) {
      const json& d = doc.at("dataset");
      check_keys(d, "dataset", {"prefix", "edges", "labels", "features", "name"});
      DatasetPaths p;
      if (d.contains("prefix")) {
        p = DatasetPaths::from_prefix(resolve(base_dir, d.at("prefix").get<std::string>()));
      } else {
        p.edges = resolve(base_dir, d.at("edges").get<std::string>());
        p.labels = resolve(base_dir, d.at("labels").get<std::string>());
        p.name = p.edges.stem().string();
      }
      if (d.contains("features")) p.features = resolve(base_dir, d.at("features").get<std::string>());
      read_opt(d, "name", p.name);
      spec.dataset = p;
    }
    if (doc.contains("synth")) {
      const json& s = doc.at("synth");
      check_keys(s, "synth", {"classes", "class_size", "class_sizes", "n0", "m", "h", "compat_decay", "compat", "seed",
                              "feature_dim", "feature_separation"});
      SynthSpec syn;
      read_opt(s, "classes", syn.classes);
      if (syn.classes < 1) throw InputError("synth.classes must be >= 1");
      if (s.contains("class_sizes")) {
        syn.class_sizes = s.at("class_sizes").get<std::vector<std::size_t>>();
      } else {
        std::size_t size = 400;
        read_opt(s, "class_size", size);
        syn.class_sizes.assign(static_cast<std::size_t>(syn.classes), size);
      }
      read_opt(s, "n0", syn.n0);
      read_opt(s, "m", syn.m);
      read_opt(s, "h", syn.h);
      read_opt(s, "compat_decay", syn.compat_decay);
      if (s.contains("compat")) syn.compat = matrix_from_json(s.at("compat"));
      read_opt(s, "seed", syn.seed);
      read_opt(s, "feature_dim", syn.feature_dim);
      read_opt(s, "feature_separation", syn.feature_separation);
      spec.synth = syn;
    }
    if (doc.contains("methods")) {
      for (const auto& name : doc.at("methods").get<std::vector<std::string>>()) {
        spec.methods.push_back(parse_method(name));
      }
    } else {
      spec.methods.push_back(parse_method("CPGNN-MLP-1"));
    }
    if (doc.contains("estimator")) {
      const json& e = doc.at("estimator");
      check_keys(e, "estimator", {"hidden_dims", "cheby_order", "dropout", "activation"});
      read_opt(e, "hidden_dims", spec.estimator.hidden_dims);
      read_opt(e, "cheby_order", spec.estimator.cheby_order);
      read_opt(e, "dropout", spec.estimator.dropout);
      if (e.contains("activation")) spec.estimator.activation = parse_activation(e.at("activation").get<std::string>());
    }
    if (doc.contains("propagation")) {
      const json& p = doc.at("propagation");
      check_keys(p, "propagation", {"activation", "echo_cancellation"});
      if (p.contains("activation")) spec.propagation.activation = parse_activation(p.at("activation").get<std::string>());
      read_opt(p, "echo_cancellation", spec.propagation.echo_cancellation);
    }
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      check_keys(t, "train", {"pretrain_iters", "max_epochs", "patience", "learning_rate",
                              "weight_decay", "cotrain_weight"});
      read_opt(t, "pretrain_iters", spec.train.pretrain_iters);
      read_opt(t, "max_epochs", spec.train.max_epochs);
      read_opt(t, "patience", spec.train.patience);
      read_opt(t, "learning_rate", spec.train.learning_rate);
      read_opt(t, "weight_decay", spec.train.weight_decay);
      read_opt(t, "cotrain_weight", spec.train.cotrain_weight);
    }
    read_opt(doc, "num_splits", spec.num_splits);
    if (doc.contains("split_fractions")) {
      const json& f = doc.at("split_fractions");
      check_keys(f, "split_fractions", {"train", "val"});
      read_opt(f, "train", spec.fractions.train);
      read_opt(f, "val", spec.fractions.val);
    }
    read_opt(doc, "seed", spec.seed);
    read_opt(doc, "featureless", spec.featureless);
    if (doc.contains("output_dir")) spec.output_dir = resolve(base_dir, doc.at("output_dir").get<std::string>());
    if (doc.contains("sweep")) {
      const json& s = doc.at("sweep");
      check_keys(s, "sweep", {"h_values", "instances"});
      read_opt(s, "h_values", spec.sweep.h_values);
      read_opt(s, "instances", spec.sweep.instances);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw InputError(std::string("experiment spec: ") + e.what());
  }
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return parse_experiment_spec(doc, path.parent_path());
}

// ---- running ----

std::pair<double, double> mean_and_stddev(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

bool ResultsTable::any_failure() const {
  for (const auto& row : rows) {
    if (row.succeeded != row.accuracies.size()) return true;
  }
  return false;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CPGNN_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = static_cast<unsigned>(cap);
  }
  return n;
}

namespace {

struct TaskOutcome {
  std::optional<double> accuracy;
  std::string error;
  TrainReport report;
  bool has_h = false;
};

TaskOutcome run_task(const LabeledDataset& ds, const Splits& splits, const MethodSpec& method,
                     const ExperimentSpec& spec, std::uint64_t train_seed, const Matrix* true_h) {
  TaskOutcome out;
  TrainConfig cfg = spec.train;
  cfg.seed = train_seed;
  cfg.ablation = method.ablation;
  EstimatorConfig est = spec.estimator;
  est.kind = method.estimator;
  try {
    switch (method.kind) {
      case MethodKind::Cpgnn: {
        PropagationConfig prop = spec.propagation;
        prop.num_layers = method.layers;
        out.report = train_full(ds, splits, est, prop, cfg, true_h).report;
        out.has_h = true;
        break;
      }
      case MethodKind::Mlp:
      case MethodKind::Cheby:
        out.report = train_estimator_baseline(ds, splits, est, cfg).report;
        break;
      case MethodKind::Sgc:
        out.report = train_sgc_baseline(ds, splits, cfg).report;
        break;
    }
    out.accuracy = out.report.test_acc_at_best;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

std::string curves_csv(const TrainReport& r) {
  std::ostringstream os;
  const bool with_delta = !r.delta_h.empty();
  os << "epoch,loss_total,ce_final,cotrain,phi,val_acc,test_acc" << (with_delta ? ",delta_h" : "") << '\n';
  for (std::size_t e = 0; e < r.val_acc.size(); ++e) {
    os << e << ',' << format_double(r.loss_total[e]) << ',' << format_double(r.loss_ce_final[e]) << ','
       << format_double(r.loss_cotrain[e]) << ',' << format_double(r.loss_phi[e]) << ','
       << format_double(r.val_acc[e]) << ',' << format_double(r.test_acc[e]);
    if (with_delta) os << ',' << format_double(r.delta_h[e]);
    os << '\n';
  }
  return os.str();
}

json report_json(const MethodSpec& method, std::size_t split, const TaskOutcome& t) {
  json j;
  j["method"] = method.name;
  j["split"] = split;
  if (!t.accuracy) {
    j["status"] = "failed";
    j["error"] = t.error;
    return j;
  }
  const TrainReport& r = t.report;
  j["status"] = "ok";
  j["epochs"] = r.val_acc.size();
  j["best_epoch"] = r.best_epoch;
  j["best_val_acc"] = r.best_val_acc;
  j["test_acc"] = r.test_acc_at_best;
  j["pretrain_iters"] = r.pretrain_loss.size();
  if (!r.pretrain_loss.empty()) j["pretrain_final_loss"] = r.pretrain_loss.back();
  if (!r.delta_h.empty()) {
    j["delta_h_first"] = r.delta_h.front();
    j["delta_h_last"] = r.delta_h.back();
  }
  if (r.h_initial) j["h_initial"] = matrix_to_json(*r.h_initial);
  if (r.h_final) j["h_final"] = matrix_to_json(*r.h_final);
  return j;
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

ResultsTable run_on_dataset(const LabeledDataset& ds, const ExperimentSpec& spec, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t num_splits = static_cast<std::size_t>(spec.num_splits);
  const std::size_t num_methods = spec.methods.size();

  std::optional<Matrix> true_h;
  try {
    true_h = empirical_compatibility(ds.graph, ds.labels);
  } catch (const NumericError&) {
    // Some class has no edges; delta_H curves are skipped.
  }

  std::vector<std::optional<Splits>> splits(num_splits);
  std::vector<std::string> split_errors(num_splits);
  for (std::size_t s = 0; s < num_splits; ++s) {
    try {
      splits[s] = make_splits(ds.labels, spec.fractions, Rng::derive(spec.seed, s));
    } catch (const InputError& e) {
      split_errors[s] = e.what();
    }
  }

  std::vector<TaskOutcome> outcomes(num_splits * num_methods);
  std::vector<double> task_seconds(outcomes.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      const std::size_t s = i / num_methods, m = i % num_methods;
      const auto t0 = std::chrono::steady_clock::now();
      if (!splits[s]) {
        outcomes[i].error = split_errors[s];
      } else {
        outcomes[i] = run_task(ds, *splits[s], spec.methods[m], spec, Rng::derive(spec.seed, 1000 + s),
                               true_h ? &*true_h : nullptr);
      }
      task_seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(outcomes.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ResultsTable table;
  for (std::size_t m = 0; m < num_methods; ++m) {
    MethodResult row;
    row.method = spec.methods[m].name;
    std::vector<double> ok;
    for (std::size_t s = 0; s < num_splits; ++s) {
      const TaskOutcome& t = outcomes[s * num_methods + m];
      row.accuracies.push_back(t.accuracy);
      row.errors.push_back(t.error);
      if (t.accuracy) ok.push_back(*t.accuracy);
    }
    std::tie(row.mean, row.stddev) = mean_and_stddev(ok);
    row.succeeded = ok.size();
    table.rows.push_back(std::move(row));
  }

  // All files are written here, after the workers have joined.
  fs::create_directories(out);
  const DatasetStats stats = dataset_stats(ds);
  json dj;
  dj["name"] = ds.name;
  dj["nodes"] = stats.nodes;
  dj["edges"] = stats.edges;
  dj["classes"] = stats.classes;
  dj["features"] = stats.features;
  dj["featureless"] = spec.featureless;
  dj["surrogate_features"] = ds.surrogate_features;
  if (stats.edges > 0) dj["homophily"] = stats.homophily;
  if (true_h) {
    dj["h_empirical"] = matrix_to_json(*true_h);
    write_matrix_csv(out / "h_empirical.csv", *true_h);
  }
  write_text_file(out / "dataset.json", dj.dump(2) + "\n");

  std::ostringstream results_csv, summary_csv;
  results_csv << "method,split,accuracy,status\n";
  summary_csv << "method,mean,std,succeeded,failed\n";
  json rj;
  rj["methods"] = json::array();
  for (const MethodResult& row : table.rows) {
    json mj;
    mj["method"] = row.method;
    mj["accuracies"] = json::array();
    for (std::size_t s = 0; s < num_splits; ++s) {
      const auto& acc = row.accuracies[s];
      results_csv << row.method << ',' << s << ',' << (acc ? format_double(*acc) : "nan") << ','
                  << (acc ? "ok" : "failed") << '\n';
      mj["accuracies"].push_back(acc ? json(*acc) : json(nullptr));
    }
    mj["mean"] = row.mean;
    mj["std"] = row.stddev;
    mj["succeeded"] = row.succeeded;
    summary_csv << row.method << ',' << format_double(row.mean) << ',' << format_double(row.stddev) << ','
                << row.succeeded << ',' << (num_splits - row.succeeded) << '\n';
    rj["methods"].push_back(std::move(mj));
  }
  write_text_file(out / "results.csv", results_csv.str());
  write_text_file(out / "summary.csv", summary_csv.str());
  write_text_file(out / "results.json", rj.dump(2) + "\n");

  json timing = json::array();
  for (std::size_t s = 0; s < num_splits; ++s) {
    for (std::size_t m = 0; m < num_methods; ++m) {
      const std::size_t i = s * num_methods + m;
      const TaskOutcome& t = outcomes[i];
      const MethodSpec& method = spec.methods[m];
      const fs::path dir = out / "runs" / method.file_tag() / ("split_" + std::to_string(s));
      write_text_file(dir / "report.json", report_json(method, s, t).dump(2) + "\n");
      if (t.accuracy) {
        write_text_file(dir / "curves.csv", curves_csv(t.report));
        if (t.report.h_initial) write_matrix_csv(dir / "h_initial.csv", *t.report.h_initial);
        if (t.report.h_final) write_matrix_csv(dir / "h_final.csv", *t.report.h_final);
      }
      timing.push_back({{"method", method.name}, {"split", s}, {"seconds", task_seconds[i]}});
    }
  }
  json meta;
  meta["created"] = iso_timestamp();
  meta["threads"] = threads;
  meta["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  meta["tasks"] = std::move(timing);
  write_text_file(out / "metadata.json", meta.dump(2) + "\n");
  return table;
}

ResultsTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.dataset) {
    LabeledDataset ds = load_dataset(*spec.dataset, spec.featureless);
    return run_on_dataset(ds, spec, spec.output_dir);
  }
  SynthDataset syn = make_synthetic_dataset(*spec.synth);
  LabeledDataset ds = spec.featureless ? featureless(syn.dataset) : std::move(syn.dataset);
  write_matrix_csv(spec.output_dir / "h_target.csv", syn.target_compat);
  return run_on_dataset(ds, spec, spec.output_dir);
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, bool* any_failure) {
  spec.validate();
  if (!spec.synth) throw InputError("sweep-h needs a 'synth' block");
  if (any_failure != nullptr) *any_failure = false;
  std::vector<SweepRow> rows;
  std::vector<std::vector<std::vector<double>>> acc(
      spec.methods.size(), std::vector<std::vector<double>>(spec.sweep.h_values.size()));
  for (std::size_t hi = 0; hi < spec.sweep.h_values.size(); ++hi) {
    const double h = spec.sweep.h_values[hi];
    for (int inst = 0; inst < spec.sweep.instances; ++inst) {
      SynthSpec syn = *spec.synth;
      syn.h = h;
      syn.compat.reset();
      syn.seed = Rng::derive(spec.synth->seed, hi * 1000 + static_cast<std::size_t>(inst));
      const fs::path dir = spec.output_dir / ("h_" + format_double(h)) / ("instance_" + std::to_string(inst));
      SynthDataset data;
      try {
        data = make_synthetic_dataset(syn);
      } catch (const GenerationError& e) {
        write_text_file(dir / "error.txt", std::string(e.what()) + "\n");
        if (any_failure != nullptr) *any_failure = true;
        continue;
      }
      LabeledDataset ds = spec.featureless ? featureless(data.dataset) : std::move(data.dataset);
      write_matrix_csv(dir / "h_target.csv", data.target_compat);
      const ResultsTable table = run_on_dataset(ds, spec, dir);
      if (table.any_failure() && any_failure != nullptr) *any_failure = true;
      for (std::size_t m = 0; m < table.rows.size(); ++m) {
        for (const auto& a : table.rows[m].accuracies) {
          if (a) acc[m][hi].push_back(*a);
        }
      }
    }
  }
  std::ostringstream csv;
  csv << "method,h,mean,std,count\n";
  json sj = json::array();
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    for (std::size_t hi = 0; hi < spec.sweep.h_values.size(); ++hi) {
      SweepRow row;
      row.method = spec.methods[m].name;
      row.h = spec.sweep.h_values[hi];
      std::tie(row.mean, row.stddev) = mean_and_stddev(acc[m][hi]);
      row.count = acc[m][hi].size();
      csv << row.method << ',' << format_double(row.h) << ',' << format_double(row.mean) << ','
          << format_double(row.stddev) << ',' << row.count << '\n';
      sj.push_back({{"method", row.method}, {"h", row.h}, {"mean", row.mean}, {"std", row.stddev},
                    {"count", row.count}, {"accuracies", acc[m][hi]}});
      rows.push_back(std::move(row));
    }
  }
  write_text_file(spec.output_dir / "accuracy_vs_h.csv", csv.str());
  write_text_file(spec.output_dir / "sweep.json", sj.dump(2) + "\n");
  return rows;
}

}  // namespace cpgnn
