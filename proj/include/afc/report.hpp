#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afc/adapt.hpp"
#include "afc/mesh.hpp"

namespace afc {

inline constexpr const char* kMetricsHeader =
    "level,dofs,eta,eta1,eta2,eta3,err_l2,err_h1,err_energy,effectivity,smear,osc,iters,rejects,seconds";
inline constexpr int kMetricsSchemaVersion = 1;

struct MetricsRow {
  int level = 0;
  long dofs = 0;
  double eta = 0.0, eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
  std::optional<double> err_l2, err_h1, err_energy, effectivity, smear;
  double osc = 0.0;
  int iterations = 0;
  int rejections = 0;
  std::optional<double> seconds;
};

MetricsRow metrics_row(const LevelRecord& record, bool with_seconds);
std::string format_metrics_row(const MetricsRow& row);
void write_metrics_csv(std::span<const LevelRecord> levels, std::ostream& out, bool with_seconds);

// Legacy VTK 2.0 ASCII unstructured grid with one point scalar field.
void write_vtk(const Mesh& mesh, std::span<const double> u, std::ostream& out, const std::string& field = "u");
std::filesystem::path level_vtk_path(const std::filesystem::path& dir, int level);

struct OutputOptions {
  bool with_seconds = false;  // fill the seconds column of metrics.csv
  std::string manifest_json;  // run description, written verbatim to manifest.json
};

// metrics.csv, timing.csv, final mesh (mesh.nodes / mesh.elements), one VTK
// file per stored snapshot and manifest.json.
void write_outputs(const AdaptiveTrace& trace, const std::filesystem::path& dir, const OutputOptions& options);

}  // namespace afc
