#pragma once

// Reverse-mode automatic differentiation over batched matrices. Every node
// holds a (batch x width) matrix; nodes are appended in evaluation order,
// so a reverse sweep over the node list is a valid topological order.

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace incde::nn {

using Matrix = Eigen::MatrixXd;

struct Parameter {
  Matrix value;
  Matrix grad;

  Parameter() = default;
  explicit Parameter(Matrix v) : value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}
  void zero_grad() { grad.setZero(); }
};

/// Vectorized activations shared by the plain and recorded forwards:
/// elu: x for x >= 0, exp(x) - 1 otherwise; tanh via exp(-2|x|).
void elu_inplace(Matrix& h);
void tanh_inplace(Matrix& h);

struct Var {
  int id = -1;
};

class Tape {
 public:
  Tape() { nodes_.reserve(256); }

  /// Leaf whose gradient is readable after backward().
  Var input(Matrix value);
  /// Leaf that never receives a gradient.
  Var constant(Matrix value);
  /// Leaf aliasing p.value; backward() adds its gradient into p.grad.
  Var param(Parameter& p);
  /// Leaf aliasing p.value without gradient accumulation.
  Var frozen(const Parameter& p);

  Var matmul(Var x, Var w);           // x (B x n) * w (n x m)
  Var add_row(Var x, Var b);          // x + 1 b, b is 1 x m
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);              // elementwise
  Var scale(Var a, double s);
  Var axpy(Var y, double a, Var x);   // y + a x
  Var elu(Var a);
  Var tanh(Var a);
  Var concat_cols(std::initializer_list<Var> parts);
  Var slice_cols(Var a, int start, int count);
  /// Per-row block product: out(b, i) = sum_j m(b, i K + j) d(b, j), K = d.cols().
  Var row_block_matvec(Var m, Var d);
  /// (1 - z*z) * v, elementwise.
  Var damp(Var z, Var v);
  /// Sum of all squared entries, 1 x 1.
  Var sum_squares(Var a);

  const Matrix& value(Var v) const { return val(v.id); }
  /// Gradient after backward(); an unreached node reports zeros.
  Matrix grad(Var v) const;

  /// Adds `g` to the adjoint of `v`. Several seeds may be combined.
  void seed(Var v, const Matrix& g);
  void seed_scalar(Var v, double g);
  /// Propagates all seeded adjoints to the leaves.
  void backward();
  /// Clears node adjoints (parameter gradients are left untouched).
  void clear_grads();

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    leaf, matmul, add_row, add, sub, mul, scale, axpy, elu, tanh, concat, slice, rbmv, damp, sumsq
  };

  struct Node {
    Op op = Op::leaf;
    int a = -1, b = -1;
    std::vector<int> parts;
    double s = 0.0;
    int i0 = 0, i1 = 0;
    Matrix own;
    const Matrix* ext = nullptr;
    Parameter* param = nullptr;
    Matrix grad;
    bool needs_grad = false;
  };

  const Matrix& val(int i) const { return nodes_[i].ext ? *nodes_[i].ext : nodes_[i].own; }
  Matrix& adj(int i);
  Var push(Node&& n);
  bool ng(Var v) const { return nodes_[v.id].needs_grad; }

  std::vector<Node> nodes_;
};

}  // namespace incde::nn
