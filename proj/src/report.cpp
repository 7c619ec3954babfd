#include "afc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "afc/mesh_io.hpp"

namespace afc {

namespace {

std::string cell(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return "";
  return format_double(*v);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

MetricsRow metrics_row(const LevelRecord& r, bool with_seconds) {
  MetricsRow row;
  row.level = r.level;
  row.dofs = r.dofs;
  row.eta = r.eta;
  row.eta1 = r.eta1;
  row.eta2 = r.eta2;
  row.eta3 = r.eta3;
  if (r.error) {
    row.err_l2 = r.error->l2;
    row.err_h1 = r.error->h1_semi;
    row.err_energy = r.error->energy;
  }
  row.effectivity = r.effectivity();
  row.smear = r.smear;
  row.osc = r.osc;
  row.iterations = r.solve.iterations;
  row.rejections = r.solve.rejections;
  if (with_seconds) row.seconds = r.seconds;
  return row;
}

std::string format_metrics_row(const MetricsRow& r) {
  std::ostringstream s;
  s << r.level << ',' << r.dofs << ',' << format_double(r.eta) << ',' << format_double(r.eta1) << ','
    << format_double(r.eta2) << ',' << format_double(r.eta3) << ',' << cell(r.err_l2) << ',' << cell(r.err_h1)
    << ',' << cell(r.err_energy) << ',' << cell(r.effectivity) << ',' << cell(r.smear) << ','
    << format_double(r.osc) << ',' << r.iterations << ',' << r.rejections << ',' << cell(r.seconds);
  return s.str();
}

void write_metrics_csv(std::span<const LevelRecord> levels, std::ostream& out, bool with_seconds) {
  out << kMetricsHeader << '\n';
  for (const LevelRecord& r : levels) out << format_metrics_row(metrics_row(r, with_seconds)) << '\n';
}

void write_vtk(const Mesh& mesh, std::span<const double> u, std::ostream& out, const std::string& field) {
  if (u.size() != mesh.num_vertices()) throw std::invalid_argument("write_vtk: field size mismatch");
  out << "# vtk DataFile Version 2.0\n" << field << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point2& p : mesh.vertices()) out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const Triangle& t : mesh.cells()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out << "5\n";
  out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS " << field << " double 1\nLOOKUP_TABLE default\n";
  for (double v : u) out << format_double(v) << '\n';
}

std::filesystem::path level_vtk_path(const std::filesystem::path& dir, int level) {
  char name[32];
  std::snprintf(name, sizeof name, "level_%03d.vtk", level);
  return dir / name;
}

void write_outputs(const AdaptiveTrace& trace, const std::filesystem::path& dir, const OutputOptions& options) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(trace.levels, out, options.with_seconds);
  }
  {
    auto out = open_out(dir / "timing.csv");
    out << "level,dofs,seconds\n";
    for (const LevelRecord& r : trace.levels) out << r.level << ',' << r.dofs << ',' << format_double(r.seconds) << '\n';
  }
  for (const LevelSnapshot& snap : trace.snapshots) {
    auto out = open_out(level_vtk_path(dir, snap.level));
    write_vtk(snap.mesh, snap.solution, out);
  }
  if (trace.final_mesh.num_cells() > 0) write_mesh(trace.final_mesh, dir / "mesh.nodes", dir / "mesh.elements");
  auto out = open_out(dir / "manifest.json");
  out << (options.manifest_json.empty() ? "{}" : options.manifest_json) << '\n';
}

}  // namespace afc
