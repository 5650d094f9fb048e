#pragma once

// Small-strain Voigt algebra. Component order is [11, 22, 33, 23, 13, 12].
// Strain vectors carry engineering shear (gamma = 2 eps) in slots 3..5,
// stress vectors carry the plain tensor components.

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>

#include "incde/core/errors.hpp"

namespace incde::mech {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr int kVoigt = 6;

enum class VoigtRole { strain, stress };

template <VoigtRole Role>
class Voigt {
 public:
  Voigt() : v_(Vec6::Zero()) {}

  explicit Voigt(const Vec6& v) : v_(v) {
    if (!v_.allFinite()) throw NumericalError("Voigt vector with non-finite component");
  }

  Voigt(std::initializer_list<double> c) : v_(Vec6::Zero()) {
    if (c.size() != kVoigt) throw ConfigError("Voigt vector needs exactly 6 components");
    int i = 0;
    for (double x : c) v_[i++] = x;
    if (!v_.allFinite()) throw NumericalError("Voigt vector with non-finite component");
  }

  static Voigt zero() { return Voigt(); }

  const Vec6& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  Voigt& operator+=(const Voigt& o) {
    v_ += o.v_;
    return *this;
  }
  Voigt& operator-=(const Voigt& o) {
    v_ -= o.v_;
    return *this;
  }

  friend Voigt operator+(Voigt a, const Voigt& b) { return a += b; }
  friend Voigt operator-(Voigt a, const Voigt& b) { return a -= b; }
  friend Voigt operator*(double s, const Voigt& a) { return Voigt(s * a.v_); }
  friend bool operator==(const Voigt& a, const Voigt& b) { return a.v_ == b.v_; }

 private:
  Vec6 v_;
};

using Strain = Voigt<VoigtRole::strain>;
using Stress = Voigt<VoigtRole::stress>;

/// Voigt image of the second-order identity.
inline Vec6 identity6() {
  Vec6 one;
  one << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  return one;
}

/// Engineering shear -> tensor shear (halves slots 3..5).
inline Vec6 strain_to_tensor(const Strain& e) {
  Vec6 t = e.vec();
  t.tail<3>() *= 0.5;
  return t;
}

/// Tensor shear -> engineering shear (doubles slots 3..5).
inline Strain strain_from_tensor(const Vec6& t) {
  Vec6 e = t;
  e.tail<3>() *= 2.0;
  return Strain(e);
}

/// Deviatoric part of a stress-like (tensor-component) vector.
inline Vec6 deviator(const Vec6& s) {
  Vec6 d = s;
  const double p = (s[0] + s[1] + s[2]) / 3.0;
  d.head<3>().array() -= p;
  return d;
}

/// a:b for stress-like vectors; shear slots count twice.
inline double contract(const Vec6& a, const Vec6& b) {
  return a.head<3>().dot(b.head<3>()) + 2.0 * a.tail<3>().dot(b.tail<3>());
}

/// Frobenius norm of a symmetric tensor stored with tensor components.
inline double tensor_norm(const Vec6& a) { return std::sqrt(contract(a, a)); }

/// Maps an engineering-strain Voigt vector to the deviator of the strain
/// tensor (tensor components). Axial block is I - 1/3 11, shear diagonal 1/2.
inline Mat6 deviatoric_projector() {
  Mat6 P = Mat6::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / 3.0;
  for (int i = 3; i < 6; ++i) P(i, i) = 0.5;
  return P;
}

struct PressureDeviator {
  double p = 0.0;  // mean stress, tension positive
  Stress s;
};

PressureDeviator pressure_deviator(const Stress& sigma);

/// q = sqrt(3/2 s:s).
double von_mises_stress(const Stress& sigma);

/// Equivalent (von Mises) strain with engineering shear inputs.
double von_mises_strain(const Strain& eps);

}  // namespace incde::mech
