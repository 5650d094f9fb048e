#include "incde/fem/report.hpp"

#include <algorithm>
#include <cmath>

#include "incde/core/binary_io.hpp"
#include "incde/core/csv.hpp"
#include "incde/core/voigt.hpp"

namespace incde::fem {

namespace {

constexpr int kFormatVersion = 1;

void require_shapes(const BvpResult& a, const BvpResult& b) {
  if (a.u.size() != b.u.size() || a.stress.size() != b.stress.size() || a.u.size() < 2)
    throw ConfigError("comparison: runs have different step counts (or no steps)");
  if (a.u.front().size() != b.u.front().size() || a.stress.front().rows() != b.stress.front().rows())
    throw ConfigError("comparison: runs have different meshes");
}

/// Error-norm / max-reference-norm over a set, time series over steps 1..T.
template <class Value>
std::vector<double> emax(std::size_t n_items, std::size_t n_steps, const Value& value, double& scale) {
  std::vector<double> err(n_items, 0.0);
  std::vector<double> ref(n_items, 0.0);
  for (std::size_t i = 0; i < n_items; ++i)
    for (std::size_t t = 1; t < n_steps; ++t) {
      const auto [r, s] = value(i, t);
      err[i] += (s - r).squaredNorm();
      ref[i] += r.squaredNorm();
    }
  scale = std::sqrt(*std::max_element(ref.begin(), ref.end()));
  for (double& e : err) e = scale > 0.0 ? std::sqrt(e) / scale : (e > 0.0 ? INFINITY : 0.0);
  return err;
}

}  // namespace

std::vector<Point> integration_point_coordinates(const Mesh& mesh) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(mesh.n_elements()) * 4);
  for (const auto& e : mesh.elements)
    for (const auto& g : gauss_points()) {
      const double xi = g[0], eta = g[1];
      const double n[4] = {(1 - xi) * (1 - eta) / 4, (1 + xi) * (1 - eta) / 4, (1 + xi) * (1 + eta) / 4,
                           (1 - xi) * (1 + eta) / 4};
      Point p = Point::Zero();
      for (int a = 0; a < 4; ++a) p += n[a] * mesh.nodes[e[a]];
      out.push_back(p);
    }
  return out;
}

EmaxFields emax_fields(const BvpResult& ref, const BvpResult& sur) {
  require_shapes(ref, sur);
  const std::size_t T = ref.u.size();
  const std::size_t n_nodes = static_cast<std::size_t>(ref.u.front().size()) / 2;
  const std::size_t n_points = static_cast<std::size_t>(ref.stress.front().rows());
  EmaxFields f;
  f.displacement = emax(n_nodes, T, [&](std::size_t i, std::size_t t) {
    return std::pair<Eigen::Vector2d, Eigen::Vector2d>(ref.u[t].segment<2>(2 * i), sur.u[t].segment<2>(2 * i));
  }, f.displacement_scale);
  auto scalar = [](double v) { return Eigen::Matrix<double, 1, 1>(v); };
  f.stress = emax(n_points, T, [&](std::size_t i, std::size_t t) {
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    return std::pair(scalar(mech::von_mises_stress(mech::Stress(ref.stress[t].row(r).transpose()))),
                     scalar(mech::von_mises_stress(mech::Stress(sur.stress[t].row(r).transpose()))));
  }, f.stress_scale);
  f.strain = emax(n_points, T, [&](std::size_t i, std::size_t t) {
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    return std::pair(scalar(mech::von_mises_strain(mech::Strain(ref.strain[t].row(r).transpose()))),
                     scalar(mech::von_mises_strain(mech::Strain(sur.strain[t].row(r).transpose()))));
  }, f.strain_scale);
  return f;
}

FieldSummary summarize(const std::vector<double>& v) {
  FieldSummary s;
  if (v.empty()) return s;
  for (double x : v) {
    s.max = std::max(s.max, x);
    s.mean += x;
  }
  s.mean /= static_cast<double>(v.size());
  return s;
}

void save_bvp(const BvpResult& r, const Mesh& mesh, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json nodes = Json::array();
  for (const Point& p : mesh.nodes) nodes.push_back({p.x(), p.y()});
  const Json meta = {{"format", "incde-bvp"},
                     {"version", kFormatVersion},
                     {"name", r.name},
                     {"material", r.material},
                     {"completed", r.completed},
                     {"failed_step", r.failed_step},
                     {"failure", r.failure},
                     {"seconds", r.seconds},
                     {"n_records", r.u.size()},
                     {"n_dofs", mesh.n_dofs()},
                     {"n_points", mesh.n_elements() * 4},
                     {"dtype", "float64"},
                     {"endianness", "little"},
                     {"mesh", {{"nodes", nodes}, {"elements", mesh.elements}}}};
  write_json_file((dir / "meta.json").string(), meta);

  CsvWriter steps(dir / "steps.csv", {"step", "iterations", "bisections", "r0", "residual", "control_displacement",
                                      "reaction", "equilibrium_error"});
  for (const StepRecord& s : r.steps)
    steps.row({double(s.step), double(s.iterations), double(s.bisections), s.r0, s.residual,
               s.control_displacement, s.reaction, s.equilibrium_error});

  std::vector<double> u, sig, eps;
  for (const auto& v : r.u) u.insert(u.end(), v.data(), v.data() + v.size());
  // Row-major point x component within each record.
  auto flatten = [](const std::vector<Eigen::MatrixXd>& m, std::vector<double>& out) {
    for (const auto& a : m)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back(a(i, c));
  };
  flatten(r.stress, sig);
  flatten(r.strain, eps);
  write_f64(dir / "u.f64", u);
  write_f64(dir / "stress.f64", sig);
  write_f64(dir / "strain.f64", eps);
}

BvpResult load_bvp(const std::filesystem::path& dir, Mesh* mesh) {
  const std::string ctx = (dir / "meta.json").string();
  const Json meta = read_json_file(ctx);
  if (json_require<std::string>(meta, "format", ctx) != "incde-bvp") throw ConfigError(ctx + ": not a BVP dump");
  if (json_require<int>(meta, "version", ctx) != kFormatVersion) throw ConfigError(ctx + ": unsupported version");
  BvpResult r;
  r.name = json_require<std::string>(meta, "name", ctx);
  r.material = json_require<std::string>(meta, "material", ctx);
  r.completed = json_require<bool>(meta, "completed", ctx);
  r.failed_step = json_require<int>(meta, "failed_step", ctx);
  r.failure = json_require<std::string>(meta, "failure", ctx);
  r.seconds = json_get_or(meta, "seconds", 0.0, ctx);
  const auto n_rec = json_require<std::size_t>(meta, "n_records", ctx);
  const auto n_dofs = json_require<std::size_t>(meta, "n_dofs", ctx);
  const auto n_pts = json_require<std::size_t>(meta, "n_points", ctx);
  if (mesh) {
    const Json m = json_require<Json>(meta, "mesh", ctx);
    mesh->nodes.clear();
    for (const auto& xy : json_require<std::vector<std::array<double, 2>>>(m, "nodes", ctx))
      mesh->nodes.emplace_back(xy[0], xy[1]);
    mesh->elements = json_require<std::vector<std::array<int, 4>>>(m, "elements", ctx);
    if (mesh->n_dofs() != static_cast<int>(n_dofs)) throw ConfigError(ctx + ": mesh does not match n_dofs");
  }
  const auto u = read_f64(dir / "u.f64", n_rec * n_dofs);
  const auto sig = read_f64(dir / "stress.f64", n_rec * n_pts * 6);
  const auto eps = read_f64(dir / "strain.f64", n_rec * n_pts * 6);
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;
  for (std::size_t t = 0; t < n_rec; ++t) {
    r.u.push_back(Eigen::Map<const Eigen::VectorXd>(u.data() + t * n_dofs, static_cast<Eigen::Index>(n_dofs)));
    r.stress.emplace_back(Eigen::Map<const RowMat>(sig.data() + t * n_pts * 6, static_cast<Eigen::Index>(n_pts), 6));
    r.strain.emplace_back(Eigen::Map<const RowMat>(eps.data() + t * n_pts * 6, static_cast<Eigen::Index>(n_pts), 6));
  }
  const CsvTable steps = read_csv(dir / "steps.csv");
  for (const auto& row : steps.rows) {
    StepRecord s;
    s.step = std::stoi(row.at(0));
    s.iterations = std::stoi(row.at(1));
    s.bisections = std::stoi(row.at(2));
    s.r0 = std::stod(row.at(3));
    s.residual = std::stod(row.at(4));
    s.control_displacement = std::stod(row.at(5));
    s.reaction = std::stod(row.at(6));
    s.equilibrium_error = std::stod(row.at(7));
    r.steps.push_back(s);
  }
  if (r.steps.size() + 1 != n_rec) throw ConfigError(dir.string() + ": steps.csv does not match the field dumps");
  return r;
}

Json write_comparison(const BvpResult& ref, const BvpResult& sur, const Mesh& mesh, const std::filesystem::path& dir) {
  const EmaxFields f = emax_fields(ref, sur);
  if (static_cast<int>(f.displacement.size()) != mesh.n_nodes()) throw ConfigError("comparison: mesh mismatch");
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "emax_nodes.csv", {"node", "x", "y", "emax_displacement"});
    for (int i = 0; i < mesh.n_nodes(); ++i)
      w.row({double(i), mesh.nodes[i].x(), mesh.nodes[i].y(), f.displacement[i]});
  }
  {
    const auto xy = integration_point_coordinates(mesh);
    CsvWriter w(dir / "emax_points.csv", {"point", "element", "gauss", "x", "y", "emax_stress", "emax_strain"});
    for (std::size_t i = 0; i < xy.size(); ++i)
      w.row({double(i), double(i / 4), double(i % 4), xy[i].x(), xy[i].y(), f.stress[i], f.strain[i]});
  }
  {
    CsvWriter w(dir / "reactions.csv", {"step", "control_reference", "reaction_reference", "control_surrogate",
                                        "reaction_surrogate"});
    w.row({0.0, 0.0, 0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < ref.steps.size() && k < sur.steps.size(); ++k)
      w.row({double(ref.steps[k].step), ref.steps[k].control_displacement, ref.steps[k].reaction,
             sur.steps[k].control_displacement, sur.steps[k].reaction});
  }
  auto entry = [](const std::vector<double>& v, double scale) {
    const FieldSummary s = summarize(v);
    return Json{{"max", s.max}, {"mean", s.mean}, {"scale", scale}};
  };
  const Json summary = {{"reference", ref.material},
                        {"surrogate", sur.material},
                        {"steps", ref.steps.size()},
                        {"emax_displacement", entry(f.displacement, f.displacement_scale)},
                        {"emax_stress", entry(f.stress, f.stress_scale)},
                        {"emax_strain", entry(f.strain, f.strain_scale)}};
  write_json_file((dir / "summary.json").string(), summary);
  return summary;
}

}  // namespace incde::fem
