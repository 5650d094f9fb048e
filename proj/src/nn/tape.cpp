#include "incde/nn/tape.hpp"

#include <stdexcept>

#include "incde/core/errors.hpp"

namespace incde::nn {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError(std::string("tape ") + op + ": shape mismatch");
}

// Strided view of columns j, j+K, j+2K, ... of a column-major matrix.
using StridedMap = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;
using StridedMapMut = Eigen::Map<Matrix, 0, Eigen::OuterStride<>>;

}  // namespace

void elu_inplace(Matrix& h) {
  auto a = h.array();
  a = (a >= 0.0).select(a, a.min(0.0).exp() - 1.0);
}

void tanh_inplace(Matrix& h) {
  // tanh|x| = (1 - e) / (1 + e), e = exp(-2|x|) in (0, 1], never overflows.
  auto a = h.array();
  const Eigen::ArrayXXd e = (-2.0 * a.abs()).exp();
  a = ((1.0 - e) / (1.0 + e)) * a.sign();
}

Matrix& Tape::adj(int i) {
  Node& n = nodes_[i];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(val(i).rows(), val(i).cols());
  return n.grad;
}

Var Tape::push(Node&& n) {
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::input(Matrix value) {
  Node n;
  n.own = std::move(value);
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::constant(Matrix value) {
  Node n;
  n.own = std::move(value);
  return push(std::move(n));
}

Var Tape::param(Parameter& p) {
  Node n;
  n.ext = &p.value;
  n.param = &p;
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::frozen(const Parameter& p) {
  Node n;
  n.ext = &p.value;
  return push(std::move(n));
}

Var Tape::matmul(Var x, Var w) {
  if (val(x.id).cols() != val(w.id).rows()) throw ConfigError("tape matmul: inner dimension mismatch");
  Node n;
  n.op = Op::matmul;
  n.a = x.id;
  n.b = w.id;
  n.own.noalias() = val(x.id) * val(w.id);
  n.needs_grad = ng(x) || ng(w);
  return push(std::move(n));
}

Var Tape::add_row(Var x, Var b) {
  if (val(b.id).rows() != 1 || val(b.id).cols() != val(x.id).cols()) throw ConfigError("tape add_row: bad bias shape");
  Node n;
  n.op = Op::add_row;
  n.a = x.id;
  n.b = b.id;
  n.own = val(x.id).rowwise() + val(b.id).row(0);
  n.needs_grad = ng(x) || ng(b);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  require_same_shape(val(a.id), val(b.id), "add");
  Node n;
  n.op = Op::add;
  n.a = a.id;
  n.b = b.id;
  n.own = val(a.id) + val(b.id);
  n.needs_grad = ng(a) || ng(b);
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  require_same_shape(val(a.id), val(b.id), "sub");
  Node n;
  n.op = Op::sub;
  n.a = a.id;
  n.b = b.id;
  n.own = val(a.id) - val(b.id);
  n.needs_grad = ng(a) || ng(b);
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  require_same_shape(val(a.id), val(b.id), "mul");
  Node n;
  n.op = Op::mul;
  n.a = a.id;
  n.b = b.id;
  n.own = val(a.id).cwiseProduct(val(b.id));
  n.needs_grad = ng(a) || ng(b);
  return push(std::move(n));
}

Var Tape::scale(Var a, double s) {
  Node n;
  n.op = Op::scale;
  n.a = a.id;
  n.s = s;
  n.own = s * val(a.id);
  n.needs_grad = ng(a);
  return push(std::move(n));
}

Var Tape::axpy(Var y, double a, Var x) {
  require_same_shape(val(y.id), val(x.id), "axpy");
  Node n;
  n.op = Op::axpy;
  n.a = y.id;
  n.b = x.id;
  n.s = a;
  n.own = val(y.id) + a * val(x.id);
  n.needs_grad = ng(y) || ng(x);
  return push(std::move(n));
}

Var Tape::elu(Var a) {
  Node n;
  n.op = Op::elu;
  n.a = a.id;
  n.own = val(a.id);
  elu_inplace(n.own);
  n.needs_grad = ng(a);
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.op = Op::tanh;
  n.a = a.id;
  n.own = val(a.id);
  tanh_inplace(n.own);
  n.needs_grad = ng(a);
  return push(std::move(n));
}

Var Tape::concat_cols(std::initializer_list<Var> parts) {
  if (parts.size() == 0) throw ConfigError("tape concat: no inputs");
  const Eigen::Index rows = val(parts.begin()->id).rows();
  Eigen::Index cols = 0;
  Node n;
  n.op = Op::concat;
  for (Var v : parts) {
    if (val(v.id).rows() != rows) throw ConfigError("tape concat: row mismatch");
    cols += val(v.id).cols();
    n.parts.push_back(v.id);
    n.needs_grad = n.needs_grad || ng(v);
  }
  n.own.resize(rows, cols);
  Eigen::Index c = 0;
  for (Var v : parts) {
    n.own.middleCols(c, val(v.id).cols()) = val(v.id);
    c += val(v.id).cols();
  }
  return push(std::move(n));
}

Var Tape::slice_cols(Var a, int start, int count) {
  if (start < 0 || count < 0 || start + count > val(a.id).cols()) throw ConfigError("tape slice: out of range");
  Node n;
  n.op = Op::slice;
  n.a = a.id;
  n.i0 = start;
  n.i1 = count;
  n.own = val(a.id).middleCols(start, count);
  n.needs_grad = ng(a);
  return push(std::move(n));
}

Var Tape::row_block_matvec(Var m, Var d) {
  const Matrix& M = val(m.id);
  const Matrix& D = val(d.id);
  const Eigen::Index B = D.rows(), K = D.cols();
  if (M.rows() != B || K == 0 || M.cols() % K != 0) throw ConfigError("tape row_block_matvec: bad shapes");
  const Eigen::Index H = M.cols() / K;
  Node n;
  n.op = Op::rbmv;
  n.a = m.id;
  n.b = d.id;
  n.own = Matrix::Zero(B, H);
  for (Eigen::Index j = 0; j < K; ++j) {
    const StridedMap Mj(M.data() + j * B, B, H, Eigen::OuterStride<>(K * B));
    n.own.array() += Mj.array().colwise() * D.col(j).array();
  }
  n.needs_grad = ng(m) || ng(d);
  return push(std::move(n));
}

Var Tape::damp(Var z, Var v) {
  require_same_shape(val(z.id), val(v.id), "damp");
  Node n;
  n.op = Op::damp;
  n.a = z.id;
  n.b = v.id;
  n.own = ((1.0 - val(z.id).array().square()) * val(v.id).array()).matrix();
  n.needs_grad = ng(z) || ng(v);
  return push(std::move(n));
}

Var Tape::sum_squares(Var a) {
  Node n;
  n.op = Op::sumsq;
  n.a = a.id;
  n.own = Matrix::Constant(1, 1, val(a.id).squaredNorm());
  n.needs_grad = ng(a);
  return push(std::move(n));
}

Matrix Tape::grad(Var v) const {
  const Node& n = nodes_[v.id];
  if (n.grad.size() == 0) return Matrix::Zero(val(v.id).rows(), val(v.id).cols());
  return n.grad;
}

void Tape::seed(Var v, const Matrix& g) {
  require_same_shape(val(v.id), g, "seed");
  adj(v.id) += g;
}

void Tape::seed_scalar(Var v, double g) {
  if (val(v.id).size() != 1) throw ConfigError("tape seed_scalar: node is not scalar");
  adj(v.id)(0, 0) += g;
}

void Tape::clear_grads() {
  for (Node& n : nodes_) n.grad.resize(0, 0);
}

void Tape::backward() {
  if (nodes_.empty()) throw ConfigError("tape backward: nothing recorded");
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0 || !n.needs_grad) continue;
    const Matrix& g = n.grad;
    auto want = [&](int k) { return k >= 0 && nodes_[k].needs_grad; };
    switch (n.op) {
      case Op::leaf:
        if (n.param) n.param->grad += g;
        break;
      case Op::matmul:
        if (want(n.a)) adj(n.a).noalias() += g * val(n.b).transpose();
        if (want(n.b)) adj(n.b).noalias() += val(n.a).transpose() * g;
        break;
      case Op::add_row:
        if (want(n.a)) adj(n.a) += g;
        if (want(n.b)) adj(n.b) += g.colwise().sum();
        break;
      case Op::add:
        if (want(n.a)) adj(n.a) += g;
        if (want(n.b)) adj(n.b) += g;
        break;
      case Op::sub:
        if (want(n.a)) adj(n.a) += g;
        if (want(n.b)) adj(n.b) -= g;
        break;
      case Op::mul:
        if (want(n.a)) adj(n.a) += g.cwiseProduct(val(n.b));
        if (want(n.b)) adj(n.b) += g.cwiseProduct(val(n.a));
        break;
      case Op::scale:
        if (want(n.a)) adj(n.a) += n.s * g;
        break;
      case Op::axpy:
        if (want(n.a)) adj(n.a) += g;
        if (want(n.b)) adj(n.b) += n.s * g;
        break;
      case Op::elu: {
        // d/dx = 1 for x >= 0, exp(x) = y + 1 otherwise; continuous at 0.
        const Matrix& x = val(n.a);
        adj(n.a).array() += g.array() * (x.array() >= 0.0).select(1.0, n.own.array() + 1.0);
        break;
      }
      case Op::tanh:
        adj(n.a).array() += g.array() * (1.0 - n.own.array().square());
        break;
      case Op::concat: {
        Eigen::Index c = 0;
        for (int k : n.parts) {
          const Eigen::Index w = val(k).cols();
          if (want(k)) adj(k) += g.middleCols(c, w);
          c += w;
        }
        break;
      }
      case Op::slice:
        adj(n.a).middleCols(n.i0, n.i1) += g;
        break;
      case Op::rbmv: {
        const Matrix& M = val(n.a);
        const Matrix& D = val(n.b);
        const Eigen::Index B = D.rows(), K = D.cols(), H = M.cols() / K;
        const bool wm = want(n.a), wd = want(n.b);
        Matrix* gm = wm ? &adj(n.a) : nullptr;
        Matrix* gd = wd ? &adj(n.b) : nullptr;
        for (Eigen::Index j = 0; j < K; ++j) {
          if (wm) {
            StridedMapMut Gj(gm->data() + j * B, B, H, Eigen::OuterStride<>(K * B));
            Gj.array() += g.array().colwise() * D.col(j).array();
          }
          if (wd) {
            const StridedMap Mj(M.data() + j * B, B, H, Eigen::OuterStride<>(K * B));
            gd->col(j) += (Mj.array() * g.array()).rowwise().sum().matrix();
          }
        }
        break;
      }
      case Op::damp: {
        const Matrix& z = val(n.a);
        const Matrix& v = val(n.b);
        if (want(n.a)) adj(n.a).array() -= 2.0 * g.array() * z.array() * v.array();
        if (want(n.b)) adj(n.b).array() += g.array() * (1.0 - z.array().square());
        break;
      }
      case Op::sumsq:
        adj(n.a) += (2.0 * g(0, 0)) * val(n.a);
        break;
    }
  }
}

}  // namespace incde::nn
