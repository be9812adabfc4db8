#include <cmath>

#include "cpgnn/estimator.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cpgnn;
using namespace cpgnn::testing;

namespace {

EstimatorConfig linear(EstimatorKind kind, int order = 2) {
  EstimatorConfig cfg;
  cfg.kind = kind;
  cfg.hidden_dims = {};
  cfg.cheby_order = order;
  return cfg;
}

Matrix run(PriorEstimator& est, const SparseMatrix& x, const SparseMatrix& lap) {
  ad::Tape tape;
  return est.forward(tape, x, lap).value();
}

}  // namespace

TEST_CASE("glorot bounds") {
  Rng rng(1);
  const Matrix w = glorot_init(100, 100, rng);
  const double bound = std::sqrt(6.0 / 200.0);
  CHECK(w.cwiseAbs().maxCoeff() <= bound);
  CHECK(w.cwiseAbs().maxCoeff() > 0.9 * bound);
  Rng one(2);
  CHECK(std::abs(glorot_init(1, 1, one)(0, 0)) <= std::sqrt(3.0));
  Rng a(7), b(7);
  CHECK(glorot_init(3, 4, a) == glorot_init(3, 4, b));
}

TEST_CASE("config validation and parsing") {
  EstimatorConfig cfg;
  cfg.cheby_order = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = EstimatorConfig{};
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = EstimatorConfig{};
  cfg.hidden_dims = {0};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK(parse_estimator_kind("cheby") == EstimatorKind::Cheby);
  CHECK(parse_activation("identity") == Activation::Identity);
  CHECK_THROWS_AS(parse_estimator_kind("gat"), InputError);
}

TEST_CASE("mlp forward") {
  Rng rng(3);
  const SparseMatrix x = random_matrix(6, 4, rng).sparseView();
  PriorEstimator est(EstimatorConfig{}, 4, 3, rng);
  CHECK(est.num_layers() == 2);

  SUBCASE("zero weights give uniform priors") {
    for (auto& layer : est.layers()) layer.front().value.setZero();
    ad::Tape tape;
    const Matrix p = prior_beliefs(mlp_forward(tape, est, x)).value();
    CHECK((p.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("hand computed 2x2 case") {
    EstimatorConfig cfg;
    cfg.hidden_dims = {2};
    Rng r(4);
    PriorEstimator small(cfg, 2, 2, r);
    small.layers()[0][0].value = Matrix::Identity(2, 2);
    small.layers()[1][0].value << 1, 2, 3, 4;
    Matrix xin(1, 2);
    xin << 1.5, -2.0;
    // relu([1.5, -2]) = [1.5, 0]; [1.5, 0] * [[1, 2], [3, 4]] = [1.5, 3].
    const Matrix out = run(small, xin.sparseView(), SparseMatrix());
    CHECK(out(0, 0) == 1.5);
    CHECK(out(0, 1) == 3.0);
  }
  SUBCASE("same seed, same logits") {
    Rng a(9), b(9);
    PriorEstimator e1(EstimatorConfig{}, 4, 3, a), e2(EstimatorConfig{}, 4, 3, b);
    CHECK(run(e1, x, SparseMatrix()) == run(e2, x, SparseMatrix()));
  }
  SUBCASE("rows of prior beliefs sum to 1") {
    ad::Tape tape;
    const Matrix p = prior_beliefs(mlp_forward(tape, est, x)).value();
    for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(std::abs(p.row(i).sum() - 1.0) < 1e-12);
  }
  SUBCASE("feature width mismatch") {
    const SparseMatrix wrong = random_matrix(6, 5, rng).sparseView();
    ad::Tape tape;
    CHECK_THROWS_AS(mlp_forward(tape, est, wrong), InputError);
  }
}

TEST_CASE("mlp ignores the graph") {
  Rng rng(5);
  const SparseMatrix x = random_matrix(20, 5, rng).sparseView();
  EstimatorConfig cfg;
  PriorEstimator est(cfg, 5, 3, rng);
  const Matrix a = run(est, x, normalized_laplacian_tilde(random_graph(20, 0.2, rng)));
  const Matrix b = run(est, x, normalized_laplacian_tilde(random_graph(20, 0.3, rng)));
  CHECK(a == b);
}

TEST_CASE("mlp on identity features permutes with the rows") {
  Rng rng(6);
  const std::size_t n = 12;
  PriorEstimator est(EstimatorConfig{}, n, 3, rng);
  std::vector<NodeId> perm(n);
  for (NodeId v = 0; v < n; ++v) perm[v] = v;
  rng.shuffle(std::span<NodeId>(perm));
  Matrix p = Matrix::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(perm[v])) = 1.0;
  const Matrix base = run(est, Matrix::Identity(n, n).sparseView(), SparseMatrix());
  const Matrix shuffled = run(est, p.sparseView(), SparseMatrix());
  CHECK((shuffled - p * base).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("chebyshev estimator") {
  Rng rng(7);
  SUBCASE("edgeless graph reduces to X (W0 - W2)") {
    const SparseGraph g = SparseGraph::from_edges({}, 5);
    const Matrix xd = random_matrix(5, 3, rng);
    PriorEstimator est(linear(EstimatorKind::Cheby), 3, 2, rng);
    const auto& w = est.layers()[0];
    const Matrix expected = xd * (w[0].value - w[2].value);
    const Matrix out = run(est, xd.sparseView(), normalized_laplacian_tilde(g));
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("single edge: T2 is the identity") {
    const SparseGraph g = path_graph(2);
    const Matrix xd = random_matrix(2, 2, rng);
    PriorEstimator est(linear(EstimatorKind::Cheby), 2, 2, rng);
    est.layers()[0][0].value.setZero();
    est.layers()[0][1].value.setZero();
    const Matrix out = run(est, xd.sparseView(), normalized_laplacian_tilde(g));
    CHECK((out - xd * est.layers()[0][2].value).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("T2 matches 2 L^2 - I materialized") {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 10 + 10 * static_cast<std::size_t>(trial);
      const SparseGraph g = random_graph(n, 0.15, rng);
      const SparseMatrix lap = normalized_laplacian_tilde(g);
      const Matrix l = Matrix(lap);
      const Matrix t2 = 2.0 * l * l - Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      const Matrix xd = random_matrix(static_cast<Eigen::Index>(n), 3, rng);
      PriorEstimator est(linear(EstimatorKind::Cheby), 3, 3, rng);
      est.layers()[0][0].value.setZero();
      est.layers()[0][1].value.setZero();
      const Matrix out = run(est, xd.sparseView(), lap);
      CHECK((out - t2 * xd * est.layers()[0][2].value).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("zero higher orders match the mlp") {
    const SparseGraph g = random_graph(15, 0.3, rng);
    const SparseMatrix x = random_matrix(15, 4, rng).sparseView();
    EstimatorConfig cheby_cfg;
    cheby_cfg.kind = EstimatorKind::Cheby;
    Rng a(11), b(11);
    PriorEstimator cheby(cheby_cfg, 4, 3, a);
    PriorEstimator mlp(EstimatorConfig{}, 4, 3, b);
    for (std::size_t k = 0; k < cheby.num_layers(); ++k) {
      mlp.layers()[k][0].value = cheby.layers()[k][0].value;
      for (std::size_t i = 1; i < cheby.layers()[k].size(); ++i) cheby.layers()[k][i].value.setZero();
    }
    CHECK(run(cheby, x, normalized_laplacian_tilde(g)) == run(mlp, x, SparseMatrix()));
  }
}
