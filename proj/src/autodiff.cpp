#include "cpgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpgnn/graph.hpp"

namespace cpgnn::ad {

namespace {

constexpr double kProbFloor = 1e-12;

void require_same_shape(std::string_view op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(std::string(op) + ": shape mismatch " + shape_string(a.rows(), a.cols()) +
                     " vs " + shape_string(b.rows(), b.cols()));
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Tensor::Tensor(Matrix v, bool requires_grad_in)
    : value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())),
      requires_grad(requires_grad_in) {}

const Matrix& Var::value() const { return tape_->value(id_); }
const Matrix& Var::grad() const { return tape_->grad(id_); }

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::scalar(double value) { return constant(Matrix::Constant(1, 1, value)); }

Var Tape::parameter(Tensor& t) {
  nodes_.push_back(Node{t.value, {}, {}, &t, t.requires_grad});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(std::string_view op, Matrix value, std::span<const Var> inputs,
                 BackwardFn backward) {
  if (!value.allFinite()) throw NumericError(std::string(op) + ": non-finite result");
  bool needs = false;
  for (const Var& in : inputs) needs = needs || nodes_[in.id()].needs_grad;
  nodes_.push_back(Node{std::move(value), {}, needs ? std::move(backward) : BackwardFn{},
                        nullptr, needs});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var output) {
  const Matrix& out = nodes_[output.id()].value;
  if (out.rows() != 1 || out.cols() != 1) {
    throw InputError("backward: output must be 1x1, got " + shape_string(out.rows(), out.cols()));
  }
  for (Node& node : nodes_) {
    if (node.needs_grad) node.grad.setZero(node.value.rows(), node.value.cols());
  }
  if (!nodes_[output.id()].needs_grad) return;
  nodes_[output.id()].grad(0, 0) = 1.0;
  for (std::size_t id = output.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.needs_grad) continue;
    if (node.backward) node.backward(*this, id);
    if (node.param != nullptr) {
      if (node.param->grad.rows() != node.grad.rows() || node.param->grad.cols() != node.grad.cols()) {
        node.param->zero_grad();
      }
      node.param->grad += node.grad;
    }
  }
}

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw InputError("matmul: shape mismatch " + shape_string(a.rows(), a.cols()) + " vs " +
                     shape_string(b.rows(), b.cols()));
  }
  Matrix out = a.value() * b.value();
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record("matmul", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    if (t.needs_grad(ia)) t.grad(ia).noalias() += t.grad(self) * t.value(ib).transpose();
    if (t.needs_grad(ib)) t.grad(ib).noalias() += t.value(ia).transpose() * t.grad(self);
  });
}

Var spmm(const SparseMatrix& s, Var b) {
  if (s.cols() != b.rows()) {
    throw InputError("spmm: shape mismatch " + shape_string(s.rows(), s.cols()) + " vs " +
                     shape_string(b.rows(), b.cols()));
  }
  Matrix out = s * b.value();
  const SparseMatrix* sp = &s;
  const std::size_t ib = b.id();
  return b.tape()->record("spmm", std::move(out), {b}, [sp, ib](Tape& t, std::size_t self) {
    t.grad(ib).noalias() += sp->transpose() * t.grad(self);
  });
}

Var add(Var a, Var b) {
  require_same_shape("add", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record("add", a.value() + b.value(), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    if (t.needs_grad(ia)) t.grad(ia) += t.grad(self);
    if (t.needs_grad(ib)) t.grad(ib) += t.grad(self);
  });
}

Var sub(Var a, Var b) {
  require_same_shape("sub", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record("sub", a.value() - b.value(), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    if (t.needs_grad(ia)) t.grad(ia) += t.grad(self);
    if (t.needs_grad(ib)) t.grad(ib) -= t.grad(self);
  });
}

Var scale(Var a, double factor) {
  const std::size_t ia = a.id();
  return a.tape()->record("scale", a.value() * factor, {a}, [ia, factor](Tape& t, std::size_t self) {
    t.grad(ia) += factor * t.grad(self);
  });
}

Var add_scalar(Var a, double c) {
  const std::size_t ia = a.id();
  return a.tape()->record("add_scalar", (a.value().array() + c).matrix(), {a},
                          [ia](Tape& t, std::size_t self) { t.grad(ia) += t.grad(self); });
}

Var hadamard(Var a, Var b) {
  require_same_shape("hadamard", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape()->record("hadamard", a.value().cwiseProduct(b.value()), {a, b},
                          [ia, ib](Tape& t, std::size_t self) {
                            if (t.needs_grad(ia)) t.grad(ia) += t.grad(self).cwiseProduct(t.value(ib));
                            if (t.needs_grad(ib)) t.grad(ib) += t.grad(self).cwiseProduct(t.value(ia));
                          });
}

Var transpose(Var a) {
  const std::size_t ia = a.id();
  return a.tape()->record("transpose", a.value().transpose(), {a}, [ia](Tape& t, std::size_t self) {
    t.grad(ia) += t.grad(self).transpose();
  });
}

Var relu(Var a) {
  const std::size_t ia = a.id();
  return a.tape()->record("relu", a.value().cwiseMax(0.0), {a}, [ia](Tape& t, std::size_t self) {
    t.grad(ia).array() += (t.value(ia).array() > 0.0).select(t.grad(self).array(), 0.0);
  });
}

Var row_softmax(Var a) {
  Matrix out = a.value();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
  const std::size_t ia = a.id();
  return a.tape()->record("row_softmax", std::move(out), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& s = t.value(self);
    const Matrix& g = t.grad(self);
    const Vector dot = s.cwiseProduct(g).rowwise().sum();
    t.grad(ia).array() += s.array() * (g.colwise() - dot).array();
  });
}

Var scale_rows(const Vector& d, Var a) {
  if (d.size() != a.rows()) {
    throw InputError("scale_rows: " + std::to_string(d.size()) + " factors for " +
                     shape_string(a.rows(), a.cols()));
  }
  const std::size_t ia = a.id();
  return a.tape()->record("scale_rows", d.asDiagonal() * a.value(), {a},
                          [ia, d](Tape& t, std::size_t self) {
                            t.grad(ia) += d.asDiagonal() * t.grad(self);
                          });
}

Var sum(Var a) {
  const std::size_t ia = a.id();
  return a.tape()->record("sum", Matrix::Constant(1, 1, a.value().sum()), {a},
                          [ia](Tape& t, std::size_t self) {
                            t.grad(ia).array() += t.grad(self)(0, 0);
                          });
}

Var masked_cross_entropy(Var probs, const LabelAssignment& labels, std::span<const NodeId> mask) {
  if (mask.empty()) throw InputError("masked_cross_entropy: empty mask");
  if (static_cast<std::size_t>(probs.rows()) != labels.size() ||
      probs.cols() != labels.num_classes()) {
    throw InputError("masked_cross_entropy: probs " + shape_string(probs.rows(), probs.cols()) +
                     " vs labels " + shape_string(static_cast<Eigen::Index>(labels.size()),
                                                  labels.num_classes()));
  }
  const Matrix& p = probs.value();
  const double inv = 1.0 / static_cast<double>(mask.size());
  double loss = 0.0;
  for (NodeId v : mask) {
    loss -= std::log(std::max(p(static_cast<Eigen::Index>(v), labels[v]), kProbFloor));
  }
  std::vector<NodeId> nodes(mask.begin(), mask.end());
  std::vector<ClassId> targets;
  targets.reserve(nodes.size());
  for (NodeId v : nodes) targets.push_back(labels[v]);
  const std::size_t ip = probs.id();
  return probs.tape()->record(
      "masked_cross_entropy", Matrix::Constant(1, 1, loss * inv), {probs},
      [ip, inv, nodes = std::move(nodes), targets = std::move(targets)](Tape& t, std::size_t self) {
        const double g = t.grad(self)(0, 0);
        const Matrix& pv = t.value(ip);
        Matrix& out = t.grad(ip);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          const auto r = static_cast<Eigen::Index>(nodes[k]);
          const double q = pv(r, targets[k]);
          if (q > kProbFloor) out(r, targets[k]) -= g * inv / q;
        }
      });
}

Var l2_penalty(std::span<const Var> params) {
  if (params.empty()) throw InputError("l2_penalty: no parameters");
  double total = 0.0;
  std::vector<std::size_t> ids;
  for (const Var& p : params) {
    total += p.value().squaredNorm();
    ids.push_back(p.id());
  }
  return params.front().tape()->record(
      "l2_penalty", Matrix::Constant(1, 1, total), params, [ids](Tape& t, std::size_t self) {
        const double g = t.grad(self)(0, 0);
        for (std::size_t id : ids) {
          if (t.needs_grad(id)) t.grad(id) += 2.0 * g * t.value(id);
        }
      });
}

Var row_sum_abs_penalty(Var h) {
  if (h.rows() != h.cols()) {
    throw InputError("row_sum_abs_penalty: expected a square matrix, got " +
                     shape_string(h.rows(), h.cols()));
  }
  const Vector row_sums = h.value().rowwise().sum();
  const std::size_t ih = h.id();
  return h.tape()->record("row_sum_abs_penalty", Matrix::Constant(1, 1, row_sums.cwiseAbs().sum()),
                          {h}, [ih, row_sums](Tape& t, std::size_t self) {
                            const double g = t.grad(self)(0, 0);
                            for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
                              t.grad(ih).row(i).array() += g * sign(row_sums(i));
                            }
                          });
}

GradCheckResult finite_diff_check(const LossFn& loss_fn, std::span<Tensor* const> params,
                                  double eps, double abs_floor) {
  for (Tensor* p : params) p->zero_grad();
  {
    Tape tape;
    Var loss = loss_fn(tape);
    tape.backward(loss);
  }
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Tensor* p : params) analytic.push_back(p->grad);

  auto evaluate = [&loss_fn] {
    Tape tape;
    return loss_fn(tape).scalar();
  };

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& value = params[k]->value;
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      double& x = value.data()[i];
      const double saved = x;
      x = saved + eps;
      const double plus = evaluate();
      x = saved - eps;
      const double minus = evaluate();
      x = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[k].data()[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), abs_floor});
      const double err = std::abs(a - numeric) / denom;
      if (err > result.max_rel_error) result = {err, k, i, a, numeric};
    }
  }
  return result;
}

}  // namespace cpgnn::ad
