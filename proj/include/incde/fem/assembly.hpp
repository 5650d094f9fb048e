#pragma once

#include <array>
#include <vector>

#include "incde/core/material.hpp"
#include "incde/fem/problem.hpp"

namespace incde::fem {

using BMatrix = Eigen::Matrix<double, 3, 8>;  // rows: eps11, eps22, gamma12
using ElementVector = Eigen::Matrix<double, 8, 1>;
using ElementMatrix = Eigen::Matrix<double, 8, 8>;

struct ElementGeometry {
  std::array<BMatrix, 4> B;
  std::array<double, 4> weight;  // Gauss weight times Jacobian determinant
};

std::vector<ElementGeometry> element_geometry(const Mesh& mesh);

/// Full 6-component strain of an in-plane state (eps33 = gamma13 = gamma23 = 0).
mech::Vec6 plane_strain(const BMatrix& B, const ElementVector& ue);
/// [s11, s22, s12] of a 6-component stress.
Eigen::Vector3d in_plane(const mech::Vec6& sigma);
/// In-plane block of a 6x6 tangent (rows/columns 11, 22, 12).
Eigen::Matrix3d in_plane(const mech::Mat6& C);

/// Element DOF indices [2 n0, 2 n0 + 1, ...].
std::array<int, 8> element_dofs(const std::array<int, 4>& e);

/// Equivalent nodal forces of all pressure loads at fractional step tau.
Eigen::VectorXd external_forces(const FeProblem& p, double tau);

/// Evaluates every integration point from the committed states at
/// displacement u. Results are written per element, so the parallel loop is
/// deterministic; global vectors are reduced in element order.
class Assembler {
 public:
  Assembler(const Mesh& mesh, const MaterialModel& material);

  int n_points() const { return 4 * n_elements_; }
  std::size_t state_size() const { return state_size_; }

  struct Result {
    Eigen::VectorXd f_int;        // all DOFs
    Eigen::MatrixXd K;            // free x free, empty unless requested
    std::vector<double> trial;    // point states after the evaluation
    Eigen::MatrixXd stress;       // points x 6
    Eigen::MatrixXd strain;       // points x 6
  };

  /// free_index[d] is the free-DOF position of d or -1 when constrained.
  Result evaluate(const Eigen::VectorXd& u, const std::vector<double>& committed, bool with_tangent,
                  const std::vector<int>& free_index, int n_free) const;

 private:
  const Mesh& mesh_;
  const MaterialModel& material_;
  std::vector<ElementGeometry> geom_;
  int n_elements_;
  std::size_t state_size_;
};

}  // namespace incde::fem
