#include "incde/fem/mesh.hpp"

#include <cmath>
#include <map>
#include <string>

#include "incde/core/errors.hpp"

namespace incde::fem {

const std::array<std::array<double, 2>, 4>& gauss_points() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<std::array<double, 2>, 4> pts{{{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  return pts;
}

namespace {

double jacobian_det(const Mesh& m, const std::array<int, 4>& e, double xi, double eta) {
  const double dn_dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
  const double dn_deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  for (int a = 0; a < 4; ++a) {
    const Point& p = m.nodes[e[a]];
    J(0, 0) += dn_dxi[a] * p.x();
    J(0, 1) += dn_dxi[a] * p.y();
    J(1, 0) += dn_deta[a] * p.x();
    J(1, 1) += dn_deta[a] * p.y();
  }
  return J.determinant();
}

double signed_area(const std::vector<Point>& nodes, const std::array<int, 4>& e) {
  double a = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Point& p = nodes[e[k]];
    const Point& q = nodes[e[(k + 1) % 4]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

}  // namespace

void Mesh::validate() const {
  if (nodes.empty() || elements.empty()) throw ConfigError("mesh: no nodes or elements");
  for (const Point& p : nodes)
    if (!p.allFinite()) throw ConfigError("mesh: non-finite node coordinate");
  for (int e = 0; e < n_elements(); ++e) {
    for (int n : elements[e])
      if (n < 0 || n >= n_nodes()) throw ConfigError("mesh: element " + std::to_string(e) + " has an invalid node");
    for (const auto& g : gauss_points())
      if (!(jacobian_det(*this, elements[e], g[0], g[1]) > 0.0))
        throw ConfigError("mesh: element " + std::to_string(e) + " has a non-positive Jacobian");
  }
}

std::vector<BoundaryEdge> Mesh::boundary_edges() const {
  std::map<std::pair<int, int>, int> count;
  for (const auto& e : elements)
    for (int k = 0; k < 4; ++k) ++count[std::minmax(e[k], e[(k + 1) % 4])];
  std::vector<BoundaryEdge> out;
  for (int i = 0; i < n_elements(); ++i)
    for (int k = 0; k < 4; ++k) {
      const int a = elements[i][k], b = elements[i][(k + 1) % 4];
      if (count[std::minmax(a, b)] == 1) out.push_back({i, a, b});
    }
  return out;
}

std::vector<int> Mesh::nodes_where(const std::function<bool(const Point&)>& pred) const {
  std::vector<int> out;
  for (int i = 0; i < n_nodes(); ++i)
    if (pred(nodes[i])) out.push_back(i);
  return out;
}

std::vector<BoundaryEdge> Mesh::edges_where(const std::function<bool(const Point&)>& pred) const {
  std::vector<BoundaryEdge> out;
  for (const BoundaryEdge& e : boundary_edges())
    if (pred(nodes[e.n0]) && pred(nodes[e.n1])) out.push_back(e);
  return out;
}

int MeshBuilder::node_id(const Point& p) {
  // Linear scan is fine for the mesh sizes used here (a few thousand nodes).
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if ((nodes_[i] - p).norm() <= tol_) return static_cast<int>(i);
  nodes_.push_back(p);
  return static_cast<int>(nodes_.size()) - 1;
}

void MeshBuilder::add_grid(const std::vector<Point>& grid, int nu, int nv) {
  if (nu <= 0 || nv <= 0 || grid.size() != static_cast<std::size_t>((nu + 1) * (nv + 1)))
    throw ConfigError("mesh builder: grid size does not match its counts");
  std::vector<int> id(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) id[k] = node_id(grid[k]);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const int a = j * (nu + 1) + i;
      std::array<int, 4> e{id[a], id[a + 1], id[a + nu + 2], id[a + nu + 1]};
      if (signed_area(nodes_, e) < 0.0) std::swap(e[1], e[3]);
      elements_.push_back(e);
    }
}

void MeshBuilder::add_rect(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<Point> g;
  for (double y : ys)
    for (double x : xs) g.emplace_back(x, y);
  add_grid(g, static_cast<int>(xs.size()) - 1, static_cast<int>(ys.size()) - 1);
}

void MeshBuilder::add_arc_patch(const Point& center, double r, double a0, double a1, const Point& p0, const Point& p1,
                                int nt, int nr, double ratio) {
  const std::vector<double> rho = graded(0.0, 1.0, nr, ratio);
  std::vector<Point> g;
  for (int j = 0; j <= nr; ++j)
    for (int i = 0; i <= nt; ++i) {
      const double s = static_cast<double>(i) / nt;
      const double a = a0 + s * (a1 - a0);
      const Point inner = center + r * Point(std::cos(a), std::sin(a));
      const Point outer = p0 + s * (p1 - p0);
      g.push_back((1.0 - rho[j]) * inner + rho[j] * outer);
    }
  add_grid(g, nt, nr);
}

Mesh MeshBuilder::build() const {
  Mesh m{nodes_, elements_};
  m.validate();
  return m;
}

std::vector<double> linspace(double a, double b, int n) { return graded(a, b, n, 1.0); }

std::vector<double> graded(double a, double b, int n, double ratio) {
  if (n <= 0) throw ConfigError("mesh: element counts must be positive");
  if (!(ratio > 0.0)) throw ConfigError("mesh: grading ratio must be positive");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  const double q = n > 1 ? std::pow(ratio, 1.0 / (n - 1)) : 1.0;
  double total = 0.0, h = 1.0;
  for (int k = 0; k < n; ++k, h *= q) total += h;
  out[0] = a;
  h = 1.0;
  double acc = 0.0;
  for (int k = 0; k < n; ++k, h *= q) {
    acc += h;
    out[k + 1] = a + (b - a) * acc / total;
  }
  out[n] = b;
  return out;
}

}  // namespace incde::fem
