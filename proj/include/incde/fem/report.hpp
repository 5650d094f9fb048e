#pragma once

#include <filesystem>
#include <vector>

#include "incde/core/json_util.hpp"
#include "incde/fem/solver.hpp"

namespace incde::fem {

/// Physical coordinates of every integration point, element-major.
std::vector<Point> integration_point_coordinates(const Mesh& mesh);

/// Per-node displacement and per-point von Mises stress / strain errors of a
/// surrogate run against a reference run over steps 1..T. Each entry is the
/// norm of the error time series divided by the largest reference time-series
/// norm over the node or point set.
struct EmaxFields {
  std::vector<double> displacement;
  std::vector<double> stress;
  std::vector<double> strain;
  double displacement_scale = 0.0;  // the normalizing maxima
  double stress_scale = 0.0;
  double strain_scale = 0.0;
};

/// Throws ConfigError on mismatched step counts or field shapes.
EmaxFields emax_fields(const BvpResult& reference, const BvpResult& surrogate);

struct FieldSummary {
  double max = 0.0, mean = 0.0;
};
FieldSummary summarize(const std::vector<double>& v);

/// Writes meta.json (run description and mesh), steps.csv, and the
/// u.f64 ((T+1) x dofs), stress.f64 and strain.f64 ((T+1) x points x 6) dumps.
void save_bvp(const BvpResult& r, const Mesh& mesh, const std::filesystem::path& dir);
/// Reads a dump back; `mesh` receives the stored mesh when non-null.
BvpResult load_bvp(const std::filesystem::path& dir, Mesh* mesh = nullptr);

/// Writes emax_nodes.csv, emax_points.csv, reactions.csv and summary.json;
/// returns the summary.
Json write_comparison(const BvpResult& reference, const BvpResult& surrogate, const Mesh& mesh,
                      const std::filesystem::path& dir);

}  // namespace incde::fem
