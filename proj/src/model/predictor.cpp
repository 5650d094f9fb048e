#include "incde/model/predictor.hpp"

#include <string>

#include "incde/core/errors.hpp"

namespace incde::model {

namespace {

Matrix normalized_row(const IncdeModel& m, const mech::Vec6& eps) {
  return m.norm().normalize_strain(eps).transpose();
}

}  // namespace

std::vector<Prediction> predict_batch(const IncdeModel& model, const std::vector<StrainSeries>& series,
                                      const SolverConfig& cfg) {
  cfg.validate();
  if (series.empty()) return {};
  const auto B = static_cast<Eigen::Index>(series.size());
  const Eigen::Index T = series.front().rows();
  for (const auto& s : series)
    if (s.rows() != T) throw ConfigError("predict_batch: series lengths differ");

  const int H = model.hidden_size();
  const mech::Vec6 scale = model.norm().strain_scale();
  const Eigen::MatrixXd J = model.norm().output_jacobian(model.mode());

  std::vector<Prediction> out(series.size());
  for (auto& p : out) {
    p.stress.resize(T, 6);
    p.hidden.resize(T, H);
  }

  auto strain_at = [&](Eigen::Index t) {
    Matrix e(B, 6);
    for (Eigen::Index b = 0; b < B; ++b) e.row(b) = series[b].row(t).cwiseProduct(scale.transpose());
    return e;
  };

  Matrix Z = Matrix::Zero(B, H);
  Matrix eps = strain_at(0);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (t > 0) {
      const Matrix next = strain_at(t);
      Z = model.step(Z, eps, next - eps, cfg);
      eps = next;
      if (!Z.allFinite()) throw NumericalError("predictor step " + std::to_string(t) + ": non-finite hidden state");
    }
    const Matrix y = model.decode(Z, eps);
    for (Eigen::Index b = 0; b < B; ++b) {
      out[b].hidden.row(t) = Z.row(b);
      out[b].stress.row(t) = (J * y.row(b).transpose()).transpose();
    }
  }
  return out;
}

Prediction predict_stress_series(const IncdeModel& model, const StrainSeries& series, const SolverConfig& cfg) {
  return std::move(predict_batch(model, {series}, cfg).front());
}

StepOutput predict_step(const IncdeModel& model, const Eigen::VectorXd& Z_n, const mech::Vec6& eps_n,
                        const mech::Vec6& eps_next, const SolverConfig& cfg, bool with_tangent) {
  cfg.validate();
  if (Z_n.size() != model.hidden_size()) throw ConfigError("predict_step: hidden state has the wrong size");
  const Eigen::MatrixXd J = model.norm().output_jacobian(model.mode());
  const Matrix en = normalized_row(model, eps_n);
  const Matrix e1 = normalized_row(model, eps_next);
  StepOutput out;
  out.tangent.setZero();

  if (!with_tangent) {
    const Matrix Z = model.step(Z_n.transpose(), en, e1 - en, cfg);
    if (!Z.allFinite()) throw NumericalError("predictor: non-finite hidden state");
    out.Z = Z.row(0).transpose();
    out.sigma = J * model.decode(Z, e1).row(0).transpose();
    return out;
  }

  // eps_next reaches the output through the increment (N input, multiplier,
  // interpolated strain) and directly through the decoder.
  Tape tape;
  const Var z0 = tape.constant(Z_n.transpose());
  const Var vn = tape.constant(en);
  const Var v1 = tape.input(e1);
  const Var de = tape.sub(v1, vn);
  const Var z1 = model.step(tape, z0, vn, de, cfg);
  const Var y = model.decode(tape, z1, v1);
  if (!tape.value(z1).allFinite()) throw NumericalError("predictor: non-finite hidden state");

  out.Z = tape.value(z1).row(0).transpose();
  out.sigma = J * tape.value(y).row(0).transpose();
  const int d = model.output_dim();
  Eigen::MatrixXd dy(d, 6);
  for (int k = 0; k < d; ++k) {
    tape.clear_grads();
    Matrix s = Matrix::Zero(1, d);
    s(0, k) = 1.0;
    tape.seed(y, s);
    tape.backward();
    dy.row(k) = tape.grad(v1).row(0);
  }
  out.tangent = J * dy * model.norm().strain_scale().asDiagonal();
  return out;
}

}  // namespace incde::model
