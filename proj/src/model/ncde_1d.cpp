#include "incde/model/ncde_1d.hpp"

#include <cmath>

#include "incde/core/errors.hpp"
#include "incde/core/rng.hpp"

namespace incde::model {

using nn::Matrix;
using nn::Tape;
using nn::Var;

std::string to_string(Kind1d k) { return k == Kind1d::incde ? "incde" : "ncde"; }

std::vector<double> bilinear_strain() { return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}; }
std::vector<double> bilinear_stress() { return {0.0, 0.2, 0.4, 0.42, 0.44, 0.46}; }

Model1d::Model1d(Kind1d kind, const Fit1dConfig& cfg) : kind_(kind), hidden_(cfg.hidden) {
  if (cfg.hidden <= 0 || cfg.width <= 0 || cfg.layers <= 0) throw ConfigError("1d model: sizes must be positive");
  // incde: f(Z, eps, d_eps) with a bounded head; ncde: f(Z) with a linear head.
  std::vector<int> widths{kind == Kind1d::incde ? cfg.hidden + 2 : cfg.hidden};
  for (int l = 0; l < cfg.layers; ++l) widths.push_back(cfg.width);
  widths.push_back(cfg.hidden);
  f_ = nn::Mlp(widths, nn::Activation::elu, kind == Kind1d::incde ? nn::Activation::tanh : nn::Activation::identity,
               true);
  Rng rng(cfg.seed, kind == Kind1d::incde ? 0x1d1 : 0x1d2);
  f_.init_uniform(rng);
  readout_ = nn::Parameter(Matrix::Zero(cfg.hidden, 1));
  const double r = std::sqrt(1.0 / cfg.hidden);
  for (Eigen::Index i = 0; i < readout_.value.size(); ++i) readout_.value(i) = rng.uniform(-r, r);
}

std::vector<nn::Parameter*> Model1d::parameters() {
  auto p = f_.parameters();
  p.push_back(&readout_);
  return p;
}

// Records the whole record; out[k] is the stress at point k. Midpoint with a
// single substep per interval.
template <class Net>
Var Model1d::run(Tape& t, const std::vector<double>& eps, std::vector<Var>& out, Net&& net, Var W) const {
  Var Z = t.constant(Matrix::Zero(1, hidden_));
  out.push_back(t.matmul(Z, W));
  for (std::size_t k = 1; k < eps.size(); ++k) {
    const double de = eps[k] - eps[k - 1];
    const Var d = t.constant(Matrix::Constant(1, 1, de));
    auto rhs = [&](Var z, double tt) {
      if (kind_ == Kind1d::ncde) return t.scale(net(z), de);  // f(Z) times the piecewise-constant rate
      const Var e = t.constant(Matrix::Constant(1, 1, eps[k - 1] + tt * de));
      return t.damp(z, t.scale(net(t.concat_cols({z, e, d})), de));
    };
    const Var zm = t.axpy(Z, 0.5, rhs(Z, 0.0));
    Z = t.axpy(Z, 1.0, rhs(zm, 0.5));
    out.push_back(t.matmul(Z, W));
  }
  return Z;
}

std::vector<double> Model1d::predict(const std::vector<double>& eps) const {
  Tape t;
  std::vector<Var> out;
  run(t, eps, out, [&](Var x) { return f_.forward(t, x); }, t.frozen(readout_));
  std::vector<double> s;
  for (Var v : out) s.push_back(t.value(v)(0, 0));
  return s;
}

double Model1d::loss_and_gradient(const std::vector<double>& eps, const std::vector<double>& sigma) {
  if (eps.size() != sigma.size() || eps.empty()) throw ConfigError("1d model: strain and stress lengths differ");
  for (auto* p : parameters()) p->zero_grad();
  Tape t;
  std::vector<Var> out;
  run(t, eps, out, [&](Var x) { return f_.forward_trainable(t, x); }, t.param(readout_));
  double loss = 0.0;
  const double w = 1.0 / static_cast<double>(eps.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double r = t.value(out[k])(0, 0) - sigma[k];
    loss += w * r * r;
    t.seed(out[k], Matrix::Constant(1, 1, 2.0 * w * r));
  }
  t.backward();
  if (!std::isfinite(loss)) throw NumericalError("1d model: non-finite loss");
  return loss;
}

Fit1dResult fit_1d(Kind1d kind, const std::vector<double>& eps, const std::vector<double>& sigma,
                   const Fit1dConfig& cfg) {
  cfg.schedule.validate();
  Model1d m(kind, cfg);
  nn::Adam adam(m.parameters());
  Fit1dResult r;
  r.kind = kind;
  for (int e = 0; e < cfg.epochs; ++e) {
    r.loss_history.push_back(m.loss_and_gradient(eps, sigma));
    adam.step(cfg.schedule.at(e));
  }
  r.prediction = m.predict(eps);
  r.final_mse = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double err = std::abs(r.prediction[k] - sigma[k]);
    r.abs_error.push_back(err);
    r.final_mse += err * err / static_cast<double>(eps.size());
    r.max_error = std::max(r.max_error, err);
  }
  return r;
}

}  // namespace incde::model
