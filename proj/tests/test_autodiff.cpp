#include <cmath>

#include "cpgnn/autodiff.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cpgnn;
using namespace cpgnn::ad;
using namespace cpgnn::testing;

namespace {

double check(const LossFn& fn, std::vector<Tensor*> params) {
  return finite_diff_check(fn, params).max_rel_error;
}

}  // namespace

TEST_CASE("row_softmax") {
  Tape tape;
  const Var s = row_softmax(tape.constant(Matrix::Zero(1, 2)));
  CHECK(s.value()(0, 0) == 0.5);
  CHECK(s.value()(0, 1) == 0.5);

  Rng rng(1);
  const Var r = row_softmax(tape.constant(random_matrix(20, 6, rng, -30.0, 30.0)));
  for (Eigen::Index i = 0; i < 20; ++i) CHECK(std::abs(r.value().row(i).sum() - 1.0) < 1e-12);
  CHECK(r.value().minCoeff() > 0.0);
  CHECK(r.value().maxCoeff() < 1.0);

  Matrix big = Matrix::Zero(1, 3);
  big(0, 1) = 50.0;
  CHECK(row_softmax(tape.constant(big)).value()(0, 1) > 1.0 - 1e-15);
}

TEST_CASE("relu subgradient") {
  Matrix x(1, 3);
  x << -1.0, 0.0, 2.0;
  Tensor t(x);
  Tape tape;
  tape.backward(sum(relu(tape.parameter(t))));
  CHECK(t.grad(0, 0) == 0.0);
  CHECK(t.grad(0, 1) == 0.0);
  CHECK(t.grad(0, 2) == 1.0);
}

TEST_CASE("matmul gradient against finite differences") {
  Rng rng(2);
  Tensor a(random_matrix(5, 4, rng)), b(random_matrix(4, 3, rng));
  const Matrix w = random_matrix(5, 3, rng);
  const double err = check([&](Tape& tape) { return sum(hadamard(matmul(tape.parameter(a), tape.parameter(b)), tape.constant(w))); },
                           {&a, &b});
  CHECK(err < 1e-6);
}

TEST_CASE("primitive gradients") {
  Rng rng(3);
  const SparseGraph g = random_graph(8, 0.4, rng);
  Tensor a(random_matrix(8, 3, rng)), b(random_matrix(8, 3, rng)), h(random_matrix(3, 3, rng));
  const Matrix w = random_matrix(8, 3, rng);
  const Vector d = Vector::LinSpaced(8, 0.5, 2.0);
  const double err = check(
      [&](Tape& tape) {
        Var x = tape.parameter(a);
        Var y = tape.parameter(b);
        Var z = add(spmm(g.adjacency(), x), scale(sub(y, x), 0.7));
        z = matmul(scale_rows(d, z), transpose(transpose(tape.parameter(h))));
        z = add_scalar(hadamard(z, y), 0.3);
        return sum(hadamard(row_softmax(z), tape.constant(w)));
      },
      {&a, &b, &h});
  CHECK(err < 1e-4);
}

TEST_CASE("cross entropy") {
  const LabelAssignment labels({0, 1, 2}, 3);
  const std::vector<NodeId> all{0, 1, 2};
  Tape tape;
  CHECK(masked_cross_entropy(tape.constant(Matrix::Identity(3, 3)), labels, all).scalar() == 0.0);

  const LabelAssignment four({0, 1, 2, 3}, 4);
  const std::vector<NodeId> mask4{0, 1, 2, 3};
  CHECK(masked_cross_entropy(tape.constant(Matrix::Constant(4, 4, 0.25)), four, mask4).scalar() ==
        doctest::Approx(std::log(4.0)));

  CHECK_THROWS_AS(masked_cross_entropy(tape.constant(Matrix::Identity(3, 3)), labels, {}), InputError);

  Rng rng(4);
  const LabelAssignment ten = random_labels(10, 3, rng);
  Matrix p = random_matrix(10, 3, rng, 0.05, 1.0);
  for (Eigen::Index i = 0; i < 10; ++i) p.row(i) /= p.row(i).sum();
  const std::vector<NodeId> mask{1, 3, 4, 8};
  double expected = 0.0;
  for (NodeId v : mask) expected -= std::log(p(static_cast<Eigen::Index>(v), ten[v]));
  expected /= static_cast<double>(mask.size());
  CHECK(masked_cross_entropy(tape.constant(p), ten, mask).scalar() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("softmax and cross entropy gradient") {
  Rng rng(5);
  const LabelAssignment labels = random_labels(12, 4, rng);
  Tensor z(random_matrix(12, 4, rng, -2.0, 2.0));
  const std::vector<NodeId> mask{0, 2, 5, 7, 11};
  const double err = check([&](Tape& tape) { return masked_cross_entropy(row_softmax(tape.parameter(z)), labels, mask); },
                           {&z});
  CHECK(err < 1e-4);
}

TEST_CASE("l2 penalty") {
  Tape tape;
  CHECK(l2_penalty(std::vector<Var>{tape.constant(Matrix::Zero(3, 2))}).scalar() == 0.0);
  CHECK_THROWS_AS(l2_penalty({}), InputError);
  const Var eye = tape.constant(Matrix::Identity(2, 2));
  CHECK(l2_penalty(std::vector<Var>{eye}).scalar() == 2.0);

  Rng rng(6);
  Tensor a(random_matrix(3, 4, rng)), b(random_matrix(2, 2, rng));
  double expected = 0.0;
  for (const Tensor* t : {&a, &b}) {
    for (Eigen::Index i = 0; i < t->value.size(); ++i) expected += t->value.data()[i] * t->value.data()[i];
  }
  const std::vector<Var> vars{tape.parameter(a), tape.parameter(b)};
  CHECK(l2_penalty(vars).scalar() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(check([&](Tape& t) { return l2_penalty(std::vector<Var>{t.parameter(a), t.parameter(b)}); }, {&a, &b}) <
        1e-6);
}

TEST_CASE("row sum abs penalty") {
  Tape tape;
  CHECK(row_sum_abs_penalty(tape.constant(Matrix::Zero(3, 3))).scalar() == 0.0);
  Matrix h(2, 2);
  h << 0.5, -0.5, 0.25, 0.25;
  CHECK(row_sum_abs_penalty(tape.constant(h)).scalar() == 0.5);

  // Rows with sums well away from zero keep the check off the kink.
  Rng rng(7);
  Matrix r = random_matrix(3, 3, rng);
  r(0, 0) += 3.0;
  r(1, 0) -= 3.0;
  r(2, 0) += 3.0;
  Tensor t(r);
  CHECK(check([&](Tape& tp) { return row_sum_abs_penalty(tp.parameter(t)); }, {&t}) < 1e-5);
}

TEST_CASE("constant loss has zero gradient") {
  Tensor t(Matrix::Ones(2, 2));
  const GradCheckResult r = finite_diff_check([](Tape& tape) { return tape.scalar(3.0); }, std::vector<Tensor*>{&t});
  CHECK(r.max_rel_error == 0.0);
  CHECK(r.analytic == 0.0);
  CHECK(r.numeric == 0.0);
}

TEST_CASE("backward leaves forward values alone") {
  Rng rng(8);
  Tensor a(random_matrix(4, 4, rng));
  Tape tape;
  const Var x = tape.parameter(a);
  const Var y = row_softmax(matmul(x, x));
  const Matrix before = y.value();
  tape.backward(sum(hadamard(y, y)));
  CHECK(y.value() == before);
}

TEST_CASE("shape errors and non-finite values") {
  Tape tape;
  CHECK_THROWS_AS(matmul(tape.constant(Matrix::Zero(2, 3)), tape.constant(Matrix::Zero(2, 3))), InputError);
  CHECK_THROWS_AS(add(tape.constant(Matrix::Zero(2, 3)), tape.constant(Matrix::Zero(3, 2))), InputError);
  Matrix bad = Matrix::Zero(1, 1);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(scale(tape.constant(Matrix::Ones(1, 1)), bad(0, 0)), NumericError);
}
