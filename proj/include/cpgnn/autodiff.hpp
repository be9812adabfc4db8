#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "cpgnn/types.hpp"

namespace cpgnn {
class LabelAssignment;
}

namespace cpgnn::ad {

// A trainable matrix that outlives any single tape. Gradients from
// Tape::backward are added into `grad`; call zero_grad() between steps.
struct Tensor {
  Matrix value;
  Matrix grad;
  bool requires_grad = true;

  Tensor() = default;
  explicit Tensor(Matrix v, bool requires_grad = true);

  Eigen::Index rows() const { return value.rows(); }
  Eigen::Index cols() const { return value.cols(); }
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

// Handle to a value recorded on a tape. Cheap to copy; only valid while the
// owning tape is alive.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  // Only meaningful after Tape::backward and only for nodes on the gradient path.
  const Matrix& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records ops in execution order; backward() walks them in reverse.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var scalar(double value);
  Var parameter(Tensor& t);

  // Appends an op result. Throws NumericError if `value` is not finite.
  Var record(std::string_view op, Matrix value, std::span<const Var> inputs, BackwardFn backward);
  Var record(std::string_view op, Matrix value, std::initializer_list<Var> inputs,
             BackwardFn backward) {
    return record(op, std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                  std::move(backward));
  }

  // `output` must be 1x1. Gradients of bound Tensors are accumulated.
  void backward(Var output);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  Matrix& grad(std::size_t id) { return nodes_[id].grad; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    Tensor* param = nullptr;
    bool needs_grad = false;
  };
  std::deque<Node> nodes_;
};

// Primitive ops. Shape mismatches throw InputError naming both shapes.
Var matmul(Var a, Var b);
// s * b for a constant sparse s; s must outlive the tape.
Var spmm(const SparseMatrix& s, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var a, double factor);
Var add_scalar(Var a, double c);
inline Var broadcast_sub_scalar(Var a, double c) { return add_scalar(a, -c); }
Var hadamard(Var a, Var b);
Var transpose(Var a);
// Subgradient at 0 is 0.
Var relu(Var a);
Var row_softmax(Var a);
// diag(d) * a.
Var scale_rows(const Vector& d, Var a);
// Sum of all entries, as a 1x1.
Var sum(Var a);

// Mean over `mask` of -log(probs[v, y_v]), probabilities floored at 1e-12.
// Throws InputError on an empty mask.
Var masked_cross_entropy(Var probs, const LabelAssignment& labels, std::span<const NodeId> mask);

// Sum of squared entries over all listed tensors.
Var l2_penalty(std::span<const Var> params);

// sum_i |sum_j h_ij|; subgradient 0 at a zero row sum.
Var row_sum_abs_penalty(Var h);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  Eigen::Index worst_entry = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

using LossFn = std::function<Var(Tape&)>;

// Compares analytic gradients of `loss_fn` against central differences for
// every entry of every tensor in `params`. Relative error per entry is
// |a - n| / max(|a|, |n|, abs_floor). Leaves parameter values unchanged and
// overwrites their grads.
GradCheckResult finite_diff_check(const LossFn& loss_fn, std::span<Tensor* const> params,
                                  double eps = 1e-5, double abs_floor = 1e-7);

}  // namespace cpgnn::ad
