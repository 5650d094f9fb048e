#include "incde/nn/mlp.hpp"

#include <cmath>

#include "incde/core/errors.hpp"

namespace incde::nn {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::elu: return "elu";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "elu") return Activation::elu;
  if (s == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation \"" + s + "\"");
}

namespace {

void apply(Matrix& h, Activation a) {
  switch (a) {
    case Activation::identity: break;
    case Activation::elu: elu_inplace(h); break;
    case Activation::tanh: tanh_inplace(h); break;
  }
}

Var apply(Tape& t, Var h, Activation a) {
  switch (a) {
    case Activation::identity: return h;
    case Activation::elu: return t.elu(h);
    case Activation::tanh: return t.tanh(h);
  }
  return h;
}

}  // namespace

Mlp::Mlp(std::vector<int> widths, Activation hidden, Activation head, bool bias)
    : widths_(std::move(widths)), hidden_(hidden), head_(head), bias_(bias) {
  if (widths_.size() < 2) throw ConfigError("mlp: need at least input and output widths");
  for (int w : widths_)
    if (w <= 0) throw ConfigError("mlp: widths must be positive");
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    weights_.emplace_back(Matrix::Zero(widths_[l], widths_[l + 1]));
    if (bias_) biases_.emplace_back(Matrix::Zero(1, widths_[l + 1]));
  }
}

void Mlp::init_uniform(Rng& rng) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double r = std::sqrt(1.0 / widths_[l]);
    for (Eigen::Index j = 0; j < weights_[l].value.size(); ++j) weights_[l].value(j) = rng.uniform(-r, r);
    if (bias_)
      for (Eigen::Index j = 0; j < biases_[l].value.size(); ++j) biases_[l].value(j) = rng.uniform(-r, r);
  }
}

Matrix Mlp::forward(const Matrix& x) const {
  if (x.cols() != in_dim()) throw ConfigError("mlp: input has " + std::to_string(x.cols()) + " columns, expected " +
                                              std::to_string(in_dim()));
  Matrix h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Matrix next = h * weights_[l].value;
    if (bias_) next.rowwise() += biases_[l].value.row(0);
    apply(next, l + 1 == weights_.size() ? head_ : hidden_);
    h = std::move(next);
  }
  return h;
}

template <class Leaf>
Var Mlp::record(Tape& tape, Var x, Leaf&& leaf) const {
  if (tape.value(x).cols() != in_dim()) throw ConfigError("mlp: recorded input width mismatch");
  Var h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = tape.matmul(h, leaf(l, false));
    if (bias_) h = tape.add_row(h, leaf(l, true));
    h = apply(tape, h, l + 1 == weights_.size() ? head_ : hidden_);
  }
  return h;
}

Var Mlp::forward(Tape& tape, Var x) const {
  return record(tape, x, [&](std::size_t l, bool b) { return tape.frozen(b ? biases_[l] : weights_[l]); });
}

Var Mlp::forward_trainable(Tape& tape, Var x) {
  return record(tape, x, [&](std::size_t l, bool b) { return tape.param(b ? biases_[l] : weights_[l]); });
}

std::vector<Parameter*> Mlp::parameters() {
  std::vector<Parameter*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    if (bias_) out.push_back(&biases_[l]);
  }
  return out;
}

std::vector<const Parameter*> Mlp::parameters() const {
  std::vector<const Parameter*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    if (bias_) out.push_back(&biases_[l]);
  }
  return out;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter* p : parameters()) n += static_cast<std::size_t>(p->value.size());
  return n;
}

}  // namespace incde::nn
