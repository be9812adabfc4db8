#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpgnn/dataset_io.hpp"
#include "cpgnn/experiment.hpp"
#include "cpgnn/theorem.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cpgnn;
using namespace cpgnn::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("cpgnn_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("edge and label files") {
  TempDir dir("io");
  const fs::path edges = dir.file("g.edges", "# comment\n0 1\n1 2\n\n2 0\n1 0\n");
  const fs::path labels = dir.file("g.labels", "0 1\n2 0\n1 1\n");
  const DatasetPaths paths{"g", edges, labels, std::nullopt};
  const LabeledDataset ds = load_dataset(paths);
  CHECK(ds.num_nodes() == 3);
  CHECK(ds.graph.num_edges() == 3);
  CHECK(ds.labels.y() == std::vector<ClassId>{1, 1, 0});
  CHECK(ds.feature_dim() == 3);
  const DatasetStats st = dataset_stats(ds);
  CHECK(st.homophily == doctest::Approx(1.0 / 3.0));

  CHECK(error_of([&] { read_edge_list(dir.file("bad.edges", "0 1\n1 x\n")); }).find(":2:") != std::string::npos);
  CHECK(error_of([&] { read_edge_list(dir.file("bad2.edges", "0 1 2\n")); }).find(":1:") != std::string::npos);
  CHECK(error_of([&] { read_labels(dir.file("bad.labels", "0 0\n0 1\n")); }).find(":2:") != std::string::npos);
  CHECK(!error_of([&] { read_labels(dir.file("gap.labels", "0 0\n2 1\n")); }).empty());
  CHECK(!error_of([&] { read_labels(dir.file("neg.labels", "0 -1\n")); }).empty());

  const DatasetPaths far{"far", dir.file("far.edges", "0 1\n0 7\n"), labels, std::nullopt};
  CHECK(error_of([&] { load_dataset(far); }).find(":2:") != std::string::npos);
  CHECK(!error_of([&] { read_edge_list(dir.path / "missing.edges"); }).empty());
}

TEST_CASE("feature files") {
  TempDir dir("features");
  const fs::path dense = dir.file("d.features", "1 2\n3 4.5\n0 -1\n");
  const Matrix x = Matrix(read_features(dense, 3));
  CHECK(x(1, 1) == 4.5);
  CHECK(x(2, 1) == -1.0);

  const fs::path sparse = dir.file("s.features", "sparse 3 4\n0 3 1.5\n2 0 2\n");
  const Matrix xs = Matrix(read_features(sparse, 3));
  CHECK(xs.cols() == 4);
  CHECK(xs(0, 3) == 1.5);
  CHECK(xs(2, 0) == 2.0);
  CHECK(xs.sum() == 3.5);

  CHECK(!error_of([&] { read_features(dense, 4); }).empty());
  CHECK(error_of([&] { read_features(dir.file("r.features", "1 2\n3\n"), 2); }).find(":2:") != std::string::npos);
  CHECK(error_of([&] { read_features(dir.file("t.features", "sparse 2 2\n0 5 1\n"), 2); }).find(":2:") !=
        std::string::npos);

  Rng rng(1);
  const Matrix m = random_matrix(4, 3, rng);
  write_dense_features(dir.path / "rt.features", m);
  CHECK(Matrix(read_features(dir.path / "rt.features", 4)) == m);
  write_matrix_csv(dir.path / "m.csv", m);
  CHECK(read_matrix_csv(dir.path / "m.csv") == m);
}

TEST_CASE("featureless mode skips the feature file") {
  TempDir dir("featureless");
  const DatasetPaths paths{"g", dir.file("g.edges", "0 1\n1 2\n"), dir.file("g.labels", "0 0\n1 1\n2 0\n"),
                           dir.path / "does_not_exist.features"};
  CHECK_THROWS_AS(load_dataset(paths), InputError);
  const LabeledDataset ds = load_dataset(paths, true);
  CHECK(ds.feature_dim() == 3);
  CHECK(Matrix(ds.features) == Matrix::Identity(3, 3));

  const LabeledDataset plain = make_dataset("x", path_graph(3), LabelAssignment({0, 1, 0}, 2),
                                            Matrix::Ones(3, 5).sparseView());
  const LabeledDataset fl = featureless(plain);
  CHECK(fl.feature_dim() == 3);
  for (int v = 0; v < 3; ++v) {
    CHECK(fl.features.coeff(v, v) == 1.0);
    CHECK(Matrix(fl.features).row(v).sum() == 1.0);
  }
}

TEST_CASE("graph files round trip") {
  TempDir dir("roundtrip");
  Rng rng(2);
  const SparseGraph g = random_graph(30, 0.2, rng);
  const LabelAssignment labels = random_labels(30, 3, rng);
  write_edge_list(dir.path / "r.edges", g);
  write_labels(dir.path / "r.labels", labels);
  const LabeledDataset ds = load_dataset(DatasetPaths::from_prefix(dir.path / "r"));
  CHECK(ds.graph.edges() == g.edges());
  CHECK(ds.labels.y() == labels.y());
}

TEST_CASE("format_double round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.normal() * 1e3;
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("method names") {
  const MethodSpec m = parse_method("CPGNN-Cheby-2+no_hbar_init+no_cotrain");
  CHECK(m.kind == MethodKind::Cpgnn);
  CHECK(m.estimator == EstimatorKind::Cheby);
  CHECK(m.layers == 2);
  CHECK(m.ablation.no_hbar_init);
  CHECK(m.ablation.no_cotrain);
  CHECK(!m.ablation.no_hbar_reg);
  CHECK(parse_method("MLP").kind == MethodKind::Mlp);
  CHECK(parse_method("GCN-Cheby").kind == MethodKind::Cheby);
  CHECK(parse_method("SGC").kind == MethodKind::Sgc);
  CHECK_THROWS_AS(parse_method("GAT"), InputError);
  CHECK_THROWS_AS(parse_method("CPGNN-MLP-0"), InputError);
  CHECK_THROWS_AS(parse_method("MLP+no_hbar_init"), InputError);
}

TEST_CASE("experiment spec parsing") {
  const nlohmann::json doc = nlohmann::json::parse(R"({
    "synth": {"classes": 3, "class_size": 20, "n0": 5, "m": 2, "h": 0.2, "compat_decay": 0.5},
    "methods": ["MLP", "CPGNN-MLP-1"],
    "train": {"max_epochs": 10, "patience": 5},
    "num_splits": 2
  })");
  const ExperimentSpec spec = parse_experiment_spec(doc);
  CHECK(spec.synth->class_sizes == std::vector<std::size_t>{20, 20, 20});
  CHECK(spec.synth->compat_decay == 0.5);
  CHECK(spec.methods.size() == 2);
  CHECK(spec.train.max_epochs == 10);
  CHECK(spec.num_splits == 2);

  nlohmann::json bad = doc;
  bad["trian"] = nlohmann::json::object();
  CHECK(error_of([&] { parse_experiment_spec(bad); }).find("trian") != std::string::npos);
  bad = doc;
  bad["train"]["lr"] = 0.1;
  CHECK_THROWS_AS(parse_experiment_spec(bad), InputError);
}

TEST_CASE("mean and sample deviation") {
  const auto [mean, sd] = mean_and_stddev({1.0, 2.0, 3.0, 4.0});
  CHECK(mean == 2.5);
  CHECK(sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(mean_and_stddev({7.0}).second == 0.0);
}

TEST_CASE("run is reproducible") {
  TempDir dir("run");
  nlohmann::json doc = nlohmann::json::parse(R"({
    "synth": {"classes": 3, "class_size": 30, "n0": 5, "m": 2, "h": 0.2, "feature_dim": 4},
    "methods": ["MLP", "SGC", "CPGNN-MLP-1", "CPGNN-Cheby-1"],
    "train": {"pretrain_iters": 10, "max_epochs": 15, "patience": 5},
    "num_splits": 2
  })");
  std::vector<std::string> listings;
  for (const char* sub : {"a", "b"}) {
    doc["output_dir"] = (dir.path / sub).string();
    const ResultsTable t = run_experiment(parse_experiment_spec(doc));
    CHECK(!t.any_failure());
    for (const MethodResult& row : t.rows) {
      std::vector<double> ok;
      for (const auto& a : row.accuracies) ok.push_back(*a);
      CHECK(row.mean == doctest::Approx(mean_and_stddev(ok).first).epsilon(1e-15));
    }
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir.path / "a")) {
    if (!entry.is_regular_file() || entry.path().filename() == "metadata.json") continue;
    const fs::path twin = dir.path / "b" / fs::relative(entry.path(), dir.path / "a");
    REQUIRE(fs::exists(twin));
    CHECK_MESSAGE(slurp(entry.path()) == slurp(twin), entry.path().string());
    ++compared;
  }
  CHECK(compared > 10);
  CHECK(fs::exists(dir.path / "a" / "metadata.json"));
  CHECK(fs::exists(dir.path / "a" / "summary.csv"));
}

TEST_CASE("simplified gcn special case") {
  Rng rng(4);
  SUBCASE("edgeless graph gives softmax(X Theta)") {
    const SparseGraph g = SparseGraph::from_edges({}, 4);
    const Matrix x = random_matrix(4, 3, rng);
    const Matrix theta = random_matrix(3, 2, rng);
    ad::Tape tape;
    const Matrix expected = ad::row_softmax(tape.constant(x * theta)).value();
    CHECK((simplified_gcn_beliefs(g, x.sparseView(), theta) - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("zero theta gives uniform beliefs") {
    const Matrix b = simplified_gcn_beliefs(random_graph(5, 0.5, rng), random_matrix(5, 3, rng).sparseView(),
                                            Matrix::Zero(3, 4));
    CHECK((b.array() - 0.25).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("matches the identity-compatibility CPGNN") {
    const SparseGraph g = random_graph(6, 0.4, rng);
    const SparseMatrix x = random_matrix(6, 3, rng).sparseView();
    const Matrix theta = random_matrix(3, 3, rng);
    CHECK((simplified_gcn_beliefs(g, x, theta) - cpgnn_identity_compat_beliefs(g, x, theta)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("random instances") {
    const TheoremCheckResult r = theorem_check(10, 30, 4, 17);
    CHECK(r.instances == 10);
    CHECK(r.max_abs_diff < 1e-9);
  }
}

TEST_CASE("sweep keeps going past a failed instance") {
  TempDir dir("sweep");
  nlohmann::json doc = nlohmann::json::parse(R"({
    "synth": {"classes": 3, "class_size": 40, "n0": 5, "m": 2, "feature_dim": 4},
    "methods": ["MLP"],
    "train": {"pretrain_iters": 5, "max_epochs": 10, "patience": 5},
    "num_splits": 1,
    "sweep": {"h_values": [0.0, 1.0], "instances": 2}
  })");
  doc["output_dir"] = dir.path.string();
  bool failed = false;
  const std::vector<SweepRow> rows = run_sweep(parse_experiment_spec(doc), &failed);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].count == 2);
  // With h = 1 a class missing from the 5-node chain has nothing to attach to.
  CHECK(failed);
  CHECK(rows[1].count < 2);
  CHECK(fs::exists(dir.path / "accuracy_vs_h.csv"));
}
