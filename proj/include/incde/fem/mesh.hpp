#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace incde::fem {

using Point = Eigen::Vector2d;

/// Edge of one element, ordered as the element traverses it (counter-clockwise),
/// so the outward normal is (dy, -dx) / length.
struct BoundaryEdge {
  int element = -1;
  int n0 = -1, n1 = -1;
};

/// Plane 4-node quadrilaterals, nodes counter-clockwise, lengths in mm.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 4>> elements;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_dofs() const { return 2 * n_nodes(); }

  /// Throws ConfigError unless every index is valid and the Jacobian
  /// determinant is positive at every Gauss point.
  void validate() const;
  /// Edges used by exactly one element.
  std::vector<BoundaryEdge> boundary_edges() const;
  std::vector<int> nodes_where(const std::function<bool(const Point&)>& pred) const;
  std::vector<BoundaryEdge> edges_where(const std::function<bool(const Point&)>& pred) const;
};

/// Incrementally builds a conforming mesh from structured patches; nodes
/// closer than `tol` are merged, so patches sharing an edge discretization
/// stitch together.
class MeshBuilder {
 public:
  explicit MeshBuilder(double tol = 1e-9) : tol_(tol) {}

  /// Structured patch from a (nu + 1) x (nv + 1) grid of points, grid(i, j)
  /// at index j * (nu + 1) + i. Element orientation is fixed to CCW.
  void add_grid(const std::vector<Point>& grid, int nu, int nv);
  /// Tensor grid of the given coordinate lists.
  void add_rect(const std::vector<double>& xs, const std::vector<double>& ys);
  /// Patch between a circular arc (center, r, from angle a0 to a1, radians)
  /// and a straight segment p0 -> p1, linearly interpolated along nr radial
  /// layers; `ratio` is the last/first radial size ratio (geometric grading).
  void add_arc_patch(const Point& center, double r, double a0, double a1, const Point& p0, const Point& p1, int nt,
                     int nr, double ratio = 1.0);

  Mesh build() const;

 private:
  int node_id(const Point& p);

  double tol_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 4>> elements_;
};

/// n + 1 points from a to b.
std::vector<double> linspace(double a, double b, int n);
/// n + 1 points from a to b whose last/first interval ratio is `ratio`.
std::vector<double> graded(double a, double b, int n, double ratio);

/// 2x2 Gauss rule on [-1, 1]^2: points and unit weights.
const std::array<std::array<double, 2>, 4>& gauss_points();

}  // namespace incde::fem
