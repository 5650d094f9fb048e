#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "incde/core/voigt.hpp"

namespace incde {

/// Strain-driven constitutive update used by the FE solver.
///
/// Internal state is a flat array of doubles owned by the caller, so a
/// solver can keep committed and trial copies side by side and roll back
/// a failed iteration by simply discarding the trial copy.
class MaterialModel {
 public:
  virtual ~MaterialModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t state_size() const = 0;
  virtual void init_state(std::span<double> state) const = 0;

  /// Stress at `eps_new` reached from `committed`. The updated state is
  /// written to `trial`; `committed` is never modified. When `tangent` is
  /// non-null it receives d(sigma)/d(eps_new).
  virtual mech::Stress update(std::span<const double> committed, const mech::Strain& eps_new,
                              std::span<double> trial, mech::Mat6* tangent) const = 0;
};

}  // namespace incde
