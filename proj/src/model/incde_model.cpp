#include "incde/model/incde_model.hpp"

#include "incde/core/errors.hpp"

namespace incde::model {

void Architecture::validate() const {
  if (hidden_size <= 0) throw ConfigError("architecture: hidden_size must be positive");
  for (int w : n_hidden)
    if (w <= 0) throw ConfigError("architecture: N widths must be positive");
  for (int w : decoder_hidden)
    if (w <= 0) throw ConfigError("architecture: decoder widths must be positive");
}

IncdeModel::IncdeModel(const Architecture& arch, const datagen::NormConstants& norm, std::uint64_t seed)
    : arch_(arch), norm_(norm) {
  arch_.validate();
  const int H = arch_.hidden_size;
  std::vector<int> nw{H + 12};
  nw.insert(nw.end(), arch_.n_hidden.begin(), arch_.n_hidden.end());
  nw.push_back(H * 6);
  std::vector<int> dw{H + 6};
  dw.insert(dw.end(), arch_.decoder_hidden.begin(), arch_.decoder_hidden.end());
  dw.push_back(datagen::output_dim(arch_.mode));
  n_net_ = nn::Mlp(nw, nn::Activation::elu, nn::Activation::tanh, true);
  decoder_ = nn::Mlp(dw, nn::Activation::elu, nn::Activation::identity, false);
  Rng rng(seed, 0x5eed);
  n_net_.init_uniform(rng);
  decoder_.init_uniform(rng);
}

std::vector<nn::Parameter*> IncdeModel::parameters() {
  auto p = n_net_.parameters();
  for (auto* q : decoder_.parameters()) p.push_back(q);
  return p;
}

std::vector<const nn::Parameter*> IncdeModel::parameters() const {
  auto p = n_net_.parameters();
  for (auto* q : decoder_.parameters()) p.push_back(q);
  return p;
}

namespace {

// out(b, i) = sum_j m(b, 6 i + j) d(b, j)
Matrix row_block_matvec(const Matrix& m, const Matrix& d) {
  const Eigen::Index B = d.rows(), K = d.cols(), H = m.cols() / K;
  Matrix out = Matrix::Zero(B, H);
  for (Eigen::Index j = 0; j < K; ++j) {
    const Eigen::Map<const Matrix, 0, Eigen::OuterStride<>> mj(m.data() + j * B, B, H, Eigen::OuterStride<>(K * B));
    out.array() += mj.array().colwise() * d.col(j).array();
  }
  return out;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Matrix hcat(const Matrix& a, const Matrix& b, const Matrix& c) {
  Matrix out(a.rows(), a.cols() + b.cols() + c.cols());
  out << a, b, c;
  return out;
}

}  // namespace

Matrix IncdeModel::rhs(const Matrix& Z, const Matrix& eps_t, const Matrix& d_eps) const {
  const Matrix n = n_net_.forward(hcat(Z, eps_t, d_eps));
  return ((1.0 - Z.array().square()) * row_block_matvec(n, d_eps).array()).matrix();
}

Matrix IncdeModel::step(const Matrix& Z, const Matrix& eps_n, const Matrix& d_eps, const SolverConfig& cfg) const {
  return ode_integrate(
      Z, cfg, [&](const Matrix& z, double t) { return rhs(z, eps_n + t * d_eps, d_eps); },
      [](const Matrix& y, double a, const Matrix& x) -> Matrix { return y + a * x; });
}

Matrix IncdeModel::decode(const Matrix& Z, const Matrix& eps) const { return decoder_.forward(hcat(Z, eps)); }

Var IncdeModel::rhs(Tape& t, Var Z, Var eps_t, Var d_eps) const {
  const Var n = n_net_.forward(t, t.concat_cols({Z, eps_t, d_eps}));
  return t.damp(Z, t.row_block_matvec(n, d_eps));
}

Var IncdeModel::rhs_trainable(Tape& t, Var Z, Var eps_t, Var d_eps) {
  const Var n = n_net_.forward_trainable(t, t.concat_cols({Z, eps_t, d_eps}));
  return t.damp(Z, t.row_block_matvec(n, d_eps));
}

template <class NetCall>
Var IncdeModel::step_impl(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg, NetCall&& rhs) {
  return ode_integrate(
      Z, cfg, [&](Var z, double tt) { return rhs(z, tt == 0.0 ? eps_n : t.axpy(eps_n, tt, d_eps), d_eps); },
      [&](Var y, double a, Var x) { return t.axpy(y, a, x); });
}

Var IncdeModel::step(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg) const {
  return step_impl(t, Z, eps_n, d_eps, cfg, [&](Var z, Var e, Var d) { return rhs(t, z, e, d); });
}

Var IncdeModel::step_trainable(Tape& t, Var Z, Var eps_n, Var d_eps, const SolverConfig& cfg) {
  return step_impl(t, Z, eps_n, d_eps, cfg, [&](Var z, Var e, Var d) { return rhs_trainable(t, z, e, d); });
}

Var IncdeModel::decode(Tape& t, Var Z, Var eps) const { return decoder_.forward(t, t.concat_cols({Z, eps})); }

Var IncdeModel::decode_trainable(Tape& t, Var Z, Var eps) {
  return decoder_.forward_trainable(t, t.concat_cols({Z, eps}));
}

}  // namespace incde::model
