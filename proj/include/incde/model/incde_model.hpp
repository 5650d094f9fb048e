#pragma once

#include <cstdint>
#include <vector>

#include "incde/datagen/normalization.hpp"
#include "incde/model/ode.hpp"
#include "incde/nn/mlp.hpp"

namespace incde::model {

using nn::Matrix;
using nn::Tape;
using nn::Var;

struct Architecture {
  int hidden_size = 32;                  // H
  std::vector<int> n_hidden{64, 64, 64};  // hidden widths of N (ELU), tanh head
  std::vector<int> decoder_hidden{64, 64, 64, 64};  // hidden widths of the decoder (ELU), bias-free
  datagen::OutputMode mode = datagen::OutputMode::full;

  void validate() const;
};

/// Stabilized INCDE stress predictor. Everything in this class works in the
/// normalized strain/stress space; batch rows are independent samples.
///
///   N : [Z, eps, d_eps] (H + 12)  ->  H x 6 (row-major, rows = Z components)
///   dZ/dt = (1 - Z^2) * (N(Z, eps_n + t d_eps, d_eps) d_eps)
///   decoder : [Z, eps] (H + 6) -> 6 or 7, no biases
class IncdeModel {
 public:
  IncdeModel() = default;
  IncdeModel(const Architecture& arch, const datagen::NormConstants& norm, std::uint64_t seed);

  int hidden_size() const { return arch_.hidden_size; }
  int output_dim() const { return datagen::output_dim(arch_.mode); }
  datagen::OutputMode mode() const { return arch_.mode; }
  const Architecture& architecture() const { return arch_; }
  const datagen::NormConstants& norm() const { return norm_; }
  void set_norm(const datagen::NormConstants& n) { norm_ = n; }

  nn::Mlp& n_net() { return n_net_; }
  const nn::Mlp& n_net() const { return n_net_; }
  nn::Mlp& decoder() { return decoder_; }
  const nn::Mlp& decoder() const { return decoder_; }

  /// Declared order: N parameters then decoder parameters.
  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;

  Matrix rhs(const Matrix& Z, const Matrix& eps_t, const Matrix& d_eps) const;
  Matrix step(const Matrix& Z, const Matrix& eps_n, const Matrix& d_eps, const SolverConfig& cfg) const;
  Matrix decode(const Matrix& Z, const Matrix& eps) const;

  /// Recorded versions. The trainable variants route gradients into the
  /// parameters; the others treat parameters as constants.
  Var rhs(Tape& t, Var Z, Var eps_t, Var d_eps) const;
  Var step(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg) const;
  Var decode(Tape& t, Var Z, Var eps) const;
  Var rhs_trainable(Tape& t, Var Z, Var eps_t, Var d_eps);
  Var step_trainable(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg);
  Var decode_trainable(Tape& t, Var Z, Var eps);

 private:
  template <class NetCall>
  static Var step_impl(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg, NetCall&& rhs);

  Architecture arch_;
  datagen::NormConstants norm_;
  nn::Mlp n_net_;
  nn::Mlp decoder_;
};

}  // namespace incde::model
