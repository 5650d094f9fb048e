#include "incde/fem/assembly.hpp"

#include <string>

#include "incde/core/errors.hpp"
#include "incde/core/parallel.hpp"

namespace incde::fem {

std::vector<ElementGeometry> element_geometry(const Mesh& mesh) {
  std::vector<ElementGeometry> out(static_cast<std::size_t>(mesh.n_elements()));
  const auto& gp = gauss_points();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < 4; ++q) {
      const double xi = gp[q][0], eta = gp[q][1];
      Eigen::Matrix<double, 2, 4> dN;
      dN << -(1 - eta), (1 - eta), (1 + eta), -(1 + eta), -(1 - xi), -(1 + xi), (1 + xi), (1 - xi);
      dN *= 0.25;
      Eigen::Matrix<double, 4, 2> X;
      for (int a = 0; a < 4; ++a) X.row(a) = mesh.nodes[mesh.elements[e][a]].transpose();
      const Eigen::Matrix2d J = dN * X;  // d(x, y)/d(xi, eta)
      const double det = J.determinant();
      if (!(det > 0.0)) throw ConfigError("mesh: element " + std::to_string(e) + " has a non-positive Jacobian");
      const Eigen::Matrix<double, 2, 4> dNx = J.inverse() * dN;
      BMatrix B = BMatrix::Zero();
      for (int a = 0; a < 4; ++a) {
        B(0, 2 * a) = dNx(0, a);
        B(1, 2 * a + 1) = dNx(1, a);
        B(2, 2 * a) = dNx(1, a);
        B(2, 2 * a + 1) = dNx(0, a);
      }
      out[e].B[q] = B;
      out[e].weight[q] = det;  // unit Gauss weights
    }
  }
  return out;
}

mech::Vec6 plane_strain(const BMatrix& B, const ElementVector& ue) {
  const Eigen::Vector3d e = B * ue;
  mech::Vec6 v = mech::Vec6::Zero();
  v(0) = e(0);
  v(1) = e(1);
  v(5) = e(2);
  return v;
}

Eigen::Vector3d in_plane(const mech::Vec6& s) { return {s(0), s(1), s(5)}; }

Eigen::Matrix3d in_plane(const mech::Mat6& C) {
  static constexpr int idx[3] = {0, 1, 5};
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = C(idx[i], idx[j]);
  return out;
}

std::array<int, 8> element_dofs(const std::array<int, 4>& e) {
  std::array<int, 8> d{};
  for (int a = 0; a < 4; ++a) {
    d[2 * a] = 2 * e[a];
    d[2 * a + 1] = 2 * e[a] + 1;
  }
  return d;
}

Eigen::VectorXd external_forces(const FeProblem& p, double tau) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(p.mesh.n_dofs());
  for (const PressureLoad& load : p.pressure) {
    const Point& a = p.mesh.nodes[load.edge.n0];
    const Point& b = p.mesh.nodes[load.edge.n1];
    // Outward normal times length is (dy, -dx); pressure acts against it.
    const Eigen::Vector2d nl(b.y() - a.y(), a.x() - b.x());
    const Eigen::Vector2d half = -0.5 * load.pressure * p.multiplier(load.schedule, tau) * nl;
    f.segment<2>(2 * load.edge.n0) += half;
    f.segment<2>(2 * load.edge.n1) += half;
  }
  return f;
}

Assembler::Assembler(const Mesh& mesh, const MaterialModel& material)
    : mesh_(mesh),
      material_(material),
      geom_(element_geometry(mesh)),
      n_elements_(mesh.n_elements()),
      state_size_(material.state_size()) {}

Assembler::Result Assembler::evaluate(const Eigen::VectorXd& u, const std::vector<double>& committed,
                                      bool with_tangent, const std::vector<int>& free_index, int n_free) const {
  const std::size_t S = state_size_;
  Result r;
  r.trial.assign(committed.size(), 0.0);
  r.stress.resize(n_points(), 6);
  r.strain.resize(n_points(), 6);
  std::vector<ElementVector> fe(static_cast<std::size_t>(n_elements_));
  std::vector<ElementMatrix> ke(with_tangent ? static_cast<std::size_t>(n_elements_) : 0);

  parallel_for(static_cast<std::size_t>(n_elements_), [&](std::size_t e) {
    const auto dofs = element_dofs(mesh_.elements[e]);
    ElementVector ue;
    for (int k = 0; k < 8; ++k) ue(k) = u(dofs[k]);
    fe[e].setZero();
    if (with_tangent) ke[e].setZero();
    for (int q = 0; q < 4; ++q) {
      const std::size_t ip = 4 * e + static_cast<std::size_t>(q);
      const BMatrix& B = geom_[e].B[q];
      const mech::Vec6 eps = plane_strain(B, ue);
      mech::Mat6 C;
      mech::Stress sigma;
      try {
        sigma = material_.update(std::span<const double>(committed.data() + ip * S, S), mech::Strain(eps),
                                 std::span<double>(r.trial.data() + ip * S, S), with_tangent ? &C : nullptr);
      } catch (const NumericalError& err) {
        throw NumericalError("element " + std::to_string(e) + " point " + std::to_string(q) + ": " + err.what());
      }
      r.stress.row(static_cast<Eigen::Index>(ip)) = sigma.vec().transpose();
      r.strain.row(static_cast<Eigen::Index>(ip)) = eps.transpose();
      fe[e].noalias() += geom_[e].weight[q] * B.transpose() * in_plane(sigma.vec());
      if (with_tangent) ke[e].noalias() += geom_[e].weight[q] * B.transpose() * in_plane(C) * B;
    }
  });

  r.f_int = Eigen::VectorXd::Zero(mesh_.n_dofs());
  if (with_tangent) r.K = Eigen::MatrixXd::Zero(n_free, n_free);
  for (int e = 0; e < n_elements_; ++e) {
    const auto dofs = element_dofs(mesh_.elements[e]);
    for (int a = 0; a < 8; ++a) {
      r.f_int(dofs[a]) += fe[e](a);
      if (!with_tangent || free_index[dofs[a]] < 0) continue;
      for (int b = 0; b < 8; ++b)
        if (free_index[dofs[b]] >= 0) r.K(free_index[dofs[a]], free_index[dofs[b]]) += ke[e](a, b);
    }
  }
  return r;
}

}  // namespace incde::fem
