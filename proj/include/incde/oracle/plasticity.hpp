#pragma once

// Rate-independent return-mapping plasticity used as ground truth.

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "incde/core/elasticity.hpp"
#include "incde/core/material.hpp"
#include "incde/core/series.hpp"

namespace incde::oracle {

using mech::Mat6;
using mech::Strain;
using mech::Stress;
using mech::Vec6;

/// J2 plasticity with linear combined hardening. beta_hat = 1 is purely
/// isotropic, beta_hat = 0 purely kinematic.
struct J2Params {
  mech::ElasticParams elastic{};
  double sigma_y = 1.2;
  double Hprime = 4.0;
  double beta_hat = 1.0;

  void validate() const;
};

/// Drucker-Prager cone  f = q + A p - b(alpha),  p = tr(sigma)/3 (tension
/// positive). A is fitted to the triaxial-compression meridian of the
/// Mohr-Coulomb surface with friction angle phi:
///   A = 6 sin(phi) / (3 - sin(phi)),   b(alpha) = (1 - A/3)(sigma_y + H' alpha)
/// so that the uniaxial compressive yield stress is sigma_y + H' alpha.
/// The flow potential is g = q + B p with B built from psi like A from phi.
struct DpParams {
  mech::ElasticParams elastic{};
  double sigma_y = 1.2;
  double phi_deg = 30.0;
  double psi_deg = 25.0;
  double Hprime = 4.0;

  void validate() const;
  double friction_coeff() const;   // A
  double dilation_coeff() const;   // B
  double cohesion(double alpha) const { return (1.0 - friction_coeff() / 3.0) * (sigma_y + Hprime * alpha); }
  double cohesion_slope() const { return (1.0 - friction_coeff() / 3.0) * Hprime; }
};

enum class ReturnKind : std::uint8_t { elastic = 0, smooth = 1, apex = 2 };

struct OracleState {
  Vec6 eps_p = Vec6::Zero();        // plastic strain, engineering shear
  double alpha = 0.0;               // equivalent plastic strain
  Vec6 back_stress = Vec6::Zero();  // kinematic centre (deviatoric)
  ReturnKind last_return = ReturnKind::elastic;
};

struct ReturnResult {
  Stress sigma;
  OracleState state;
  Mat6 tangent;  // consistent tangent d(sigma)/d(eps_new)
};

ReturnResult j2_return_map(const OracleState& state, const Strain& eps_new, const J2Params& p);
ReturnResult dp_return_map(const OracleState& state, const Strain& eps_new, const DpParams& p);

double j2_yield(const Stress& sigma, const OracleState& state, const J2Params& p);
double dp_yield(const Stress& sigma, const OracleState& state, const DpParams& p);

using OracleParams = std::variant<J2Params, DpParams>;

ReturnResult return_map(const OracleParams& params, const OracleState& state, const Strain& eps_new);
double yield_function(const OracleParams& params, const Stress& sigma, const OracleState& state);

/// Yield function evaluated at the elastic trial stress for eps_new.
double trial_yield(const OracleParams& params, const OracleState& state, const Strain& eps_new);

const mech::ElasticParams& elastic_of(const OracleParams& params);

/// Applies the return map step by step. The first row must be zero strain.
StressSeries oracle_stress_series(const OracleParams& params, const StrainSeries& series);

/// Same, also returning the state after every row.
StressSeries oracle_stress_series(const OracleParams& params, const StrainSeries& series,
                                  std::vector<OracleState>* states);

/// MaterialModel adapter; state layout is [eps_p(6), alpha, back(6), kind].
class OracleMaterial final : public MaterialModel {
 public:
  explicit OracleMaterial(OracleParams params);

  std::string name() const override;
  std::size_t state_size() const override { return kStateSize; }
  void init_state(std::span<double> state) const override;
  Stress update(std::span<const double> committed, const Strain& eps_new, std::span<double> trial,
                Mat6* tangent) const override;

  const OracleParams& params() const { return params_; }

  static constexpr std::size_t kStateSize = 14;
  static OracleState unpack(std::span<const double> s);
  static void pack(const OracleState& st, std::span<double> s);

 private:
  OracleParams params_;
};

}  // namespace incde::oracle
