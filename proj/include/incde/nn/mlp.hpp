#pragma once

#include <string>
#include <vector>

#include "incde/core/rng.hpp"
#include "incde/nn/tape.hpp"

namespace incde::nn {

enum class Activation : std::uint8_t { identity, elu, tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// ELU with unit scale: x for x >= 0, exp(x) - 1 otherwise.
inline double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

/// Feed-forward network acting on batch rows: h <- act(h W + b).
/// Weights are stored input-major (fan_in x fan_out); bias rows are 1 x fan_out.
class Mlp {
 public:
  Mlp() = default;
  /// widths = {in, hidden..., out}; `hidden` applies after every layer except
  /// the last, which uses `head`.
  Mlp(std::vector<int> widths, Activation hidden, Activation head, bool bias);

  /// U(-sqrt(1/fan_in), sqrt(1/fan_in)) for weights and biases.
  void init_uniform(Rng& rng);

  int in_dim() const { return widths_.front(); }
  int out_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  Activation hidden_activation() const { return hidden_; }
  Activation head_activation() const { return head_; }
  bool has_bias() const { return bias_; }
  int n_layers() const { return static_cast<int>(weights_.size()); }

  Matrix forward(const Matrix& x) const;
  /// Recorded forward; parameters are frozen leaves.
  Var forward(Tape& tape, Var x) const;
  /// Recorded forward; parameters accumulate gradients on backward().
  Var forward_trainable(Tape& tape, Var x);

  /// Declared order: W0, b0, W1, b1, ... (biases only when enabled).
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t parameter_count() const;

 private:
  template <class Leaf>
  Var record(Tape& tape, Var x, Leaf&& leaf) const;

  std::vector<int> widths_{1, 1};
  Activation hidden_ = Activation::elu;
  Activation head_ = Activation::identity;
  bool bias_ = true;
  std::vector<Parameter> weights_;
  std::vector<Parameter> biases_;
};

}  // namespace incde::nn
