#include <set>

#include "cpgnn/synth.hpp"
#include "doctest.h"

using namespace cpgnn;

namespace {

SynthConfig small_config(double h, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.num_classes = 3;
  cfg.class_sizes = {60, 60, 60};
  cfg.seed_nodes = 10;
  cfg.edges_per_node = 3;
  cfg.target_compat = make_target_compat(3, h);
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("make_target_compat") {
  CHECK(make_target_compat(2, 1.0) == Matrix::Identity(2, 2));
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK(make_target_compat(2, 0.0) == flip);

  const Matrix h = make_target_compat(10, 0.5);
  for (int i = 0; i < 10; ++i) {
    CHECK(h(i, i) == 0.5);
    CHECK(std::abs(h.row(i).sum() - 1.0) < 1e-12);
    for (int j = 0; j < 10; ++j) {
      if (i != j) CHECK(h(i, j) == doctest::Approx(0.5 / 9.0));
    }
  }
  CHECK_THROWS_AS(make_target_compat(3, 1.5), InputError);
  CHECK_THROWS_AS(make_target_compat(3, -0.1), InputError);
  CHECK_THROWS_AS(make_target_compat(1, 0.5), InputError);
}

TEST_CASE("make_target_compat with cyclic decay") {
  const Matrix ring = make_target_compat(5, 0.0, 0.0);
  for (int i = 0; i < 5; ++i) {
    CHECK(ring(i, (i + 1) % 5) == 0.5);
    CHECK(ring(i, (i + 4) % 5) == 0.5);
    CHECK(ring(i, (i + 2) % 5) == 0.0);
  }
  const Matrix h = make_target_compat(6, 0.2, 0.5);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(h.row(i).sum() - 1.0) < 1e-12);
    CHECK(h(i, (i + 1) % 6) == doctest::Approx(2.0 * h(i, (i + 2) % 6)));
    CHECK(h(i, (i + 2) % 6) == doctest::Approx(2.0 * h(i, (i + 3) % 6)));
  }
  CHECK(make_target_compat(4, 0.3, 1.0) == make_target_compat(4, 0.3));
  CHECK_THROWS_AS(make_target_compat(4, 0.3, 1.5), InputError);
}

TEST_CASE("config validation") {
  SynthConfig cfg = small_config(0.5, 1);
  cfg.seed_nodes = 180;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = small_config(0.5, 1);
  cfg.edges_per_node = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = small_config(0.5, 1);
  cfg.target_compat(0, 0) += 0.1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = small_config(0.5, 1);
  cfg.class_sizes.pop_back();
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("single-class tree") {
  SynthConfig cfg;
  cfg.num_classes = 1;
  cfg.class_sizes = {5};
  cfg.seed_nodes = 2;
  cfg.edges_per_node = 1;
  cfg.target_compat = Matrix::Ones(1, 1);
  const SynthGraph sg = generate(cfg);
  CHECK(sg.graph.num_edges() == 4);
  CHECK(sg.missing_edges == 0);
}

TEST_CASE("generator invariants") {
  const SynthConfig cfg = small_config(0.3, 42);
  const SynthGraph a = generate(cfg);
  const SynthGraph b = generate(cfg);
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.labels.y() == b.labels.y());
  CHECK(a.labels.class_sizes() == cfg.class_sizes);
  CHECK(a.graph.num_edges() + a.missing_edges == (cfg.seed_nodes - 1) + (180 - cfg.seed_nodes) * 3);

  // Seed chain 0-1-...-(n0-1).
  for (NodeId v = 0; v + 1 < cfg.seed_nodes; ++v) {
    const auto nb = a.graph.neighbors(v);
    CHECK(std::find(nb.begin(), nb.end(), v + 1) != nb.end());
  }
  // Each later node brings m distinct edges to earlier nodes.
  for (NodeId v = cfg.seed_nodes; v < 180; ++v) {
    std::size_t earlier = 0;
    for (NodeId u : a.graph.neighbors(v)) earlier += u < v ? 1 : 0;
    CHECK(earlier == 3);
    CHECK(a.graph.degree(v) >= 3);
  }
  CHECK(generate(small_config(0.3, 43)).graph.edges() != a.graph.edges());
}

TEST_CASE("strong heterophily target") {
  SynthConfig cfg;
  cfg.num_classes = 2;
  cfg.class_sizes = {2500, 2500};
  cfg.seed_nodes = 20;
  cfg.edges_per_node = 3;
  cfg.target_compat = make_target_compat(2, 0.0);
  cfg.rng_seed = 9;
  const SynthGraph sg = generate(cfg);
  const Matrix h = empirical_compatibility(sg.graph, sg.labels);
  CHECK(h(0, 0) < 0.05);
  CHECK(h(1, 1) < 0.05);
}

TEST_CASE("zero attachment weight") {
  SynthConfig cfg;
  cfg.num_classes = 2;
  cfg.class_sizes = {1, 9};
  cfg.seed_nodes = 2;
  cfg.edges_per_node = 1;
  Matrix h(2, 2);
  h << 1, 0, 0, 1;
  cfg.target_compat = h;
  // The lone class-0 node has nothing to attach to unless it lands in the chain.
  bool thrown = false;
  for (std::uint64_t seed = 0; seed < 50 && !thrown; ++seed) {
    cfg.rng_seed = seed;
    try {
      generate(cfg);
    } catch (const GenerationError&) {
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("feature transfer") {
  SUBCASE("pool used exactly once") {
    ReferenceFeatures ref;
    ref.dim = 2;
    Matrix pool(2, 2);
    pool << 1, 2, 3, 4;
    ref.pools = {pool};
    const Matrix x = transfer_features(LabelAssignment({0, 0}, 1), ref, 7);
    std::multiset<double> firsts{x(0, 0), x(1, 0)};
    CHECK(firsts == std::multiset<double>{1.0, 3.0});
  }
  SUBCASE("pool too small") {
    ReferenceFeatures ref;
    ref.dim = 1;
    ref.pools = {Matrix::Ones(1, 1)};
    CHECK_THROWS_AS(transfer_features(LabelAssignment({0, 0}, 1), ref, 7), GenerationError);
  }
  SUBCASE("surrogate pools separate class means") {
    const ReferenceFeatures ref = gaussian_reference_pools({2000, 2000}, 8, 3.0, 5);
    CHECK(ref.surrogate);
    std::vector<ClassId> y(4000);
    for (std::size_t v = 0; v < y.size(); ++v) y[v] = static_cast<ClassId>(v % 2);
    const LabelAssignment labels(y, 2);
    const Matrix x = transfer_features(labels, ref, 3);
    Matrix mean = Matrix::Zero(2, 8);
    for (NodeId v = 0; v < 4000; ++v) mean.row(labels[v]) += x.row(static_cast<Eigen::Index>(v)) / 2000.0;
    // Each mean has norm 3, so the gap is 3 * sqrt(2 - 2 cos) for the angle between them.
    CHECK(mean.row(0).norm() == doctest::Approx(3.0).epsilon(0.05));
    CHECK(mean.row(1).norm() == doctest::Approx(3.0).epsilon(0.05));
    CHECK((mean.row(0) - mean.row(1)).norm() > 0.5);
  }
}
