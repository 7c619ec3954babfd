#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afc/adapt.hpp"
#include "afc/problems.hpp"
#include "afc/stabilize.hpp"

namespace afc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::vector<std::string> cases{"boundary_layer"};
  std::vector<GridId> grids;  // empty: each case's default grid
  std::vector<Method> methods{Method::Bjk};
  AdaptiveConfig adaptive;
  std::optional<double> epsilon;
  std::filesystem::path output = "afc_runs";
  bool write_vtk = true;
  bool record_timing = false;  // seconds column in metrics.csv
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Keys accepted in config files and as --key flags (dashes and underscores
// are interchangeable).
const std::vector<std::string>& config_keys();

// `key = value` lines; `#` starts a comment.
ConfigEntries read_config_file(std::istream& in);
ConfigEntries read_config_file(const std::filesystem::path& path);

// Applies file entries first, then flags. Throws ConfigError on unknown keys,
// unknown cases/grids/methods and malformed numbers.
RunConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags);
void apply_entry(RunConfig& config, const std::string& key, const std::string& value);

std::string manifest_json(const RunConfig& config, const std::string& case_name, GridId grid, Method method,
                          const AdaptiveTrace* trace);

std::filesystem::path run_directory(const RunConfig& config, const std::string& case_name, GridId grid,
                                    Method method);

// Runs every case x grid x method combination, each in its own directory.
// Returns 0 iff every level of every run converged.
int run_matrix(const RunConfig& config, std::ostream& log);

}  // namespace afc
