#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "afc/config.hpp"
#include "afc/mesh_io.hpp"
#include "afc/problems.hpp"

namespace {

int run_grids(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (afc::GridId g : {afc::GridId::Grid1, afc::GridId::Grid2, afc::GridId::Grid3, afc::GridId::Grid4,
                        afc::GridId::Hemker}) {
    const afc::Mesh mesh = afc::make_root_grid(g);
    const std::string stem = "grid" + afc::grid_name(g);
    afc::write_mesh(mesh, dir / (stem + ".nodes"), dir / (stem + ".elements"));
    std::cout << stem << ": " << mesh.num_vertices() << " vertices, " << mesh.num_cells() << " cells\n";
  }
  return 0;
}

int run_check(const std::filesystem::path& nodes, const std::filesystem::path& elements) {
  afc::Mesh mesh;
  try {
    mesh = afc::read_mesh(nodes, elements);
  } catch (const std::exception& e) {
    std::cout << "FAIL load: " << e.what() << '\n';
    return 1;
  }
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << '\n';
    ok = ok && pass;
  };
  report("conforming load", true, std::to_string(mesh.num_vertices()) + " vertices, " +
                                      std::to_string(mesh.num_cells()) + " cells");
  const auto hanging = afc::hanging_vertices(mesh);
  report("no hanging vertices", hanging.empty(), std::to_string(hanging.size()) + " found");
  bool angles = true, positive = true;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const afc::CellGeometry g = mesh.cell_geometry(c);
    positive = positive && g.area > 0.0 && g.inscribed_diameter <= g.diameter;
    angles = angles && std::abs(g.angles[0] + g.angles[1] + g.angles[2] - std::numbers::pi) <= 1e-12;
  }
  report("positive areas and rho_K <= h_K", positive);
  report("angle sums", angles);
  const afc::PointLocator locator(mesh);
  int misplaced = 0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c)
    if (locator.locate(mesh.barycenter(c)) != c) ++misplaced;
  report("barycenter location", misplaced == 0, std::to_string(misplaced) + " misplaced");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive algebraically stabilized P1 finite elements for convection-diffusion-reaction"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the adaptive loop for case x grid x method combinations");
  std::string config_file;
  run->add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
  // Every config key doubles as a flag; values are kept in command-line order.
  std::vector<std::pair<std::string, std::vector<std::string>>> flag_values;
  flag_values.reserve(afc::config_keys().size());
  for (const auto& key : afc::config_keys()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    flag_values.emplace_back(key, std::vector<std::string>{});
    run->add_option("--" + flag, flag_values.back().second, "override '" + key + "'");
  }

  auto* grids = app.add_subcommand("grids", "Write the root meshes in the text mesh format");
  std::string grid_dir = "grids";
  grids->add_option("--out", grid_dir, "output directory");

  auto* check = app.add_subcommand("check", "Run the mesh invariant checks on a mesh file pair");
  std::string nodes, elements;
  check->add_option("nodes", nodes, "node file")->required()->check(CLI::ExistingFile);
  check->add_option("elements", elements, "element file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grids) return run_grids(grid_dir);
    if (*check) return run_check(nodes, elements);

    afc::ConfigEntries file;
    if (!config_file.empty()) file = afc::read_config_file(config_file);
    if (const char* out = std::getenv("AFC_OUT"); out && *out) file.emplace_back("output", out);
    afc::ConfigEntries flags;
    for (const auto& [key, values] : flag_values)
      for (const auto& v : values) flags.emplace_back(key, v);
    const afc::RunConfig config = afc::parse_config(file, flags);
    return afc::run_matrix(config, std::cout);
  } catch (const afc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
