#include "incde/oracle/plasticity.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace incde::oracle {

namespace {

const double kSqrt32 = std::sqrt(1.5);

/// Engineering-shear image of a tensor-component vector.
Vec6 engineering(const Vec6& t) {
  Vec6 e = t;
  e.tail<3>() *= 2.0;
  return e;
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

double cone_coeff(double angle_deg) {
  const double s = std::sin(deg2rad(angle_deg));
  return 6.0 * s / (3.0 - s);
}

}  // namespace

void J2Params::validate() const {
  elastic.validate();
  if (!(sigma_y > 0.0)) throw ConfigError("J2: sigma_y must be positive");
  if (!(Hprime >= 0.0)) throw ConfigError("J2: Hprime must be non-negative");
  if (!(beta_hat >= 0.0 && beta_hat <= 1.0)) throw ConfigError("J2: beta_hat must lie in [0, 1]");
}

void DpParams::validate() const {
  elastic.validate();
  if (!(sigma_y > 0.0)) throw ConfigError("Drucker-Prager: sigma_y must be positive");
  if (!(Hprime >= 0.0)) throw ConfigError("Drucker-Prager: Hprime must be non-negative");
  if (!(psi_deg >= 0.0 && psi_deg <= phi_deg && phi_deg < 90.0))
    throw ConfigError("Drucker-Prager: need 0 <= psi <= phi < 90 degrees");
}

double DpParams::friction_coeff() const { return cone_coeff(phi_deg); }
double DpParams::dilation_coeff() const { return cone_coeff(psi_deg); }

double j2_yield(const Stress& sigma, const OracleState& state, const J2Params& p) {
  const Vec6 xi = mech::deviator(sigma.vec()) - state.back_stress;
  return kSqrt32 * mech::tensor_norm(xi) - (p.sigma_y + p.beta_hat * p.Hprime * state.alpha);
}

double dp_yield(const Stress& sigma, const OracleState& state, const DpParams& p) {
  const Vec6& v = sigma.vec();
  const double pm = (v[0] + v[1] + v[2]) / 3.0;
  const double q = kSqrt32 * mech::tensor_norm(mech::deviator(v));
  return q + p.friction_coeff() * pm - p.cohesion(state.alpha);
}

ReturnResult j2_return_map(const OracleState& state, const Strain& eps_new, const J2Params& p) {
  p.validate();
  const Mat6 Ce = mech::elastic_stiffness(p.elastic);
  const double mu = p.elastic.mu();

  const Vec6 sig_tr = Ce * (eps_new.vec() - state.eps_p);
  const Vec6 xi_tr = mech::deviator(sig_tr) - state.back_stress;
  const double xi_norm = mech::tensor_norm(xi_tr);
  const double f_tr = kSqrt32 * xi_norm - (p.sigma_y + p.beta_hat * p.Hprime * state.alpha);

  ReturnResult out{Stress(sig_tr), state, Ce};
  out.state.last_return = ReturnKind::elastic;
  if (f_tr <= 0.0) return out;

  // Linear hardening: the consistency condition is linear in dgamma.
  const double dgamma = f_tr / (3.0 * mu + p.Hprime);
  const Vec6 n = xi_tr / xi_norm;
  const double c = kSqrt32 * dgamma;  // |d eps_p| (tensor norm)

  out.sigma = Stress(sig_tr - 2.0 * mu * c * n);
  out.state.eps_p += engineering(c * n);
  out.state.alpha += dgamma;
  out.state.back_stress += (2.0 / 3.0) * (1.0 - p.beta_hat) * p.Hprime * c * n;
  out.state.last_return = ReturnKind::smooth;

  const Mat6 nn = n * n.transpose();
  out.tangent = Ce - (6.0 * mu * mu / (3.0 * mu + p.Hprime)) * nn -
                (4.0 * mu * mu * c / xi_norm) * (mech::deviatoric_projector() - nn);
  return out;
}

ReturnResult dp_return_map(const OracleState& state, const Strain& eps_new, const DpParams& p) {
  p.validate();
  const Mat6 Ce = mech::elastic_stiffness(p.elastic);
  const double mu = p.elastic.mu();
  const double K = p.elastic.bulk();
  const double A = p.friction_coeff();
  const double B = p.dilation_coeff();
  const Vec6 one = mech::identity6();

  const Vec6 sig_tr = Ce * (eps_new.vec() - state.eps_p);
  const double p_tr = (sig_tr[0] + sig_tr[1] + sig_tr[2]) / 3.0;
  const Vec6 s_tr = mech::deviator(sig_tr);
  const double s_norm = mech::tensor_norm(s_tr);
  const double q_tr = kSqrt32 * s_norm;
  const double f_tr = q_tr + A * p_tr - p.cohesion(state.alpha);

  ReturnResult out{Stress(sig_tr), state, Ce};
  out.state.last_return = ReturnKind::elastic;
  if (f_tr <= 0.0) return out;

  const double hb = p.cohesion_slope();
  const double denom = 3.0 * mu + A * K * B + hb;
  const double dgamma = f_tr / denom;

  if (q_tr - 3.0 * mu * dgamma >= 0.0) {
    const Vec6 n = s_tr / s_norm;
    const double c = kSqrt32 * dgamma;
    const Vec6 g = 2.0 * mu * kSqrt32 * n + K * B * one;  // sigma = sigma_tr - dgamma g
    const Vec6 h = 2.0 * mu * kSqrt32 * n + A * K * one;  // d f_tr / d eps

    out.sigma = Stress(sig_tr - dgamma * g);
    out.state.eps_p += engineering(c * n) + (B * dgamma / 3.0) * one;
    out.state.alpha += dgamma;
    out.state.last_return = ReturnKind::smooth;

    const Mat6 nn = n * n.transpose();
    out.tangent = Ce - (g * h.transpose()) / denom -
                  (4.0 * mu * mu * c / s_norm) * (mech::deviatoric_projector() - nn);
    return out;
  }

  // Apex: deviatoric stress vanishes; mean stress sits on the cone tip.
  if (!(A > 0.0)) throw NumericalError("Drucker-Prager apex return with zero friction coefficient");
  const double dalpha = q_tr / (3.0 * mu);
  const double alpha_new = state.alpha + dalpha;
  const double p_new = p.cohesion(alpha_new) / A;
  const double dvol = (p_tr - p_new) / K;

  out.sigma = Stress(p_new * one);
  out.state.eps_p += engineering(s_tr / (2.0 * mu)) + (dvol / 3.0) * one;
  out.state.alpha = alpha_new;
  out.state.last_return = ReturnKind::apex;
  out.tangent.setZero();
  if (s_norm > 0.0) {
    const Vec6 n = s_tr / s_norm;
    out.tangent = (hb / (3.0 * mu * A)) * one * (2.0 * mu * kSqrt32 * n).transpose();
  }
  return out;
}

ReturnResult return_map(const OracleParams& params, const OracleState& state, const Strain& eps_new) {
  return std::visit(
      [&](const auto& p) -> ReturnResult {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, J2Params>)
          return j2_return_map(state, eps_new, p);
        else
          return dp_return_map(state, eps_new, p);
      },
      params);
}

double yield_function(const OracleParams& params, const Stress& sigma, const OracleState& state) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, J2Params>)
          return j2_yield(sigma, state, p);
        else
          return dp_yield(sigma, state, p);
      },
      params);
}

const mech::ElasticParams& elastic_of(const OracleParams& params) {
  return std::visit([](const auto& p) -> const mech::ElasticParams& { return p.elastic; }, params);
}

double trial_yield(const OracleParams& params, const OracleState& state, const Strain& eps_new) {
  const Mat6 Ce = mech::elastic_stiffness(elastic_of(params));
  return yield_function(params, Stress(Ce * (eps_new.vec() - state.eps_p)), state);
}

StressSeries oracle_stress_series(const OracleParams& params, const StrainSeries& series) {
  return oracle_stress_series(params, series, nullptr);
}

StressSeries oracle_stress_series(const OracleParams& params, const StrainSeries& series,
                                  std::vector<OracleState>* states) {
  StressSeries out(series.rows(), 6);
  OracleState st;
  if (states) states->clear();
  for (Eigen::Index t = 0; t < series.rows(); ++t) {
    try {
      const Vec6 e = series.row(t).transpose();
      ReturnResult r = return_map(params, st, Strain(e));
      out.row(t) = r.sigma.vec().transpose();
      st = r.state;
      if (states) states->push_back(st);
    } catch (const NumericalError& err) {
      throw NumericalError("oracle step " + std::to_string(t) + ": " + err.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

OracleMaterial::OracleMaterial(OracleParams params) : params_(std::move(params)) {
  std::visit([](const auto& p) { p.validate(); }, params_);
}

std::string OracleMaterial::name() const {
  if (const auto* j2 = std::get_if<J2Params>(&params_))
    return j2->beta_hat == 1.0 ? "j2-iso" : "j2-combined";
  return "dp";
}

void OracleMaterial::init_state(std::span<double> state) const { pack(OracleState{}, state); }

OracleState OracleMaterial::unpack(std::span<const double> s) {
  OracleState st;
  for (int i = 0; i < 6; ++i) st.eps_p[i] = s[i];
  st.alpha = s[6];
  for (int i = 0; i < 6; ++i) st.back_stress[i] = s[7 + i];
  st.last_return = static_cast<ReturnKind>(static_cast<int>(s[13]));
  return st;
}

void OracleMaterial::pack(const OracleState& st, std::span<double> s) {
  for (int i = 0; i < 6; ++i) s[i] = st.eps_p[i];
  s[6] = st.alpha;
  for (int i = 0; i < 6; ++i) s[7 + i] = st.back_stress[i];
  s[13] = static_cast<double>(static_cast<int>(st.last_return));
}

Stress OracleMaterial::update(std::span<const double> committed, const Strain& eps_new,
                              std::span<double> trial, Mat6* tangent) const {
  const ReturnResult r = return_map(params_, unpack(committed), eps_new);
  pack(r.state, trial);
  if (tangent) *tangent = r.tangent;
  return r.sigma;
}

}  // namespace incde::oracle
