#include "afc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "afc/mesh_io.hpp"
#include "afc/report.hpp"

namespace afc {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream s(v);
  std::string item;
  while (std::getline(s, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("malformed number for '" + key + "': '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("malformed integer for '" + key + "': '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("malformed boolean for '" + key + "': '" + v + "'");
}

std::string valid_methods() {
  std::string s;
  for (Method m : {Method::Bjk, Method::Mc, Method::Muas, Method::Smuas, Method::Bbk, Method::None})
    s += (s.empty() ? "" : ", ") + std::string(method_name(m));
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "case",          "grid",           "method",         "dof_budget",     "ref_tol",
      "min_ref",       "initial_uniform_steps",            "residual_factor", "max_iterations",
      "omega_init",    "omega_shrink",   "omega_grow",     "grow_after",     "bbk_exponent",
      "epsilon",       "output",         "cutline_intervals", "vtk",          "record_timing"};
  return keys;
}

ConfigEntries read_config_file(std::istream& in) {
  ConfigEntries out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_config_file(in);
}

void apply_entry(RunConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "case") {
    c.cases = split_list(value);
    for (const auto& name : c.cases) case_by_name(name);  // validates
  } else if (key == "grid") {
    c.grids.clear();
    for (const auto& g : split_list(value)) {
      const auto id = parse_grid(g);
      if (!id) throw ConfigError("unknown grid '" + g + "' (valid: 1, 2, 3, 4, hemker)");
      c.grids.push_back(*id);
    }
  } else if (key == "method") {
    c.methods.clear();
    for (const auto& m : split_list(value)) {
      const auto id = parse_method(m);
      if (!id) throw ConfigError("unknown method '" + m + "' (valid: " + valid_methods() + ")");
      c.methods.push_back(*id);
    }
  } else if (key == "dof_budget") {
    c.adaptive.marking.dof_budget = to_long(key, value);
  } else if (key == "ref_tol") {
    c.adaptive.marking.ref_tol = to_double(key, value);
  } else if (key == "min_ref") {
    c.adaptive.marking.min_ref = to_double(key, value);
  } else if (key == "initial_uniform_steps") {
    c.adaptive.marking.initial_uniform_steps = static_cast<int>(to_long(key, value));
  } else if (key == "residual_factor") {
    c.adaptive.solver.residual_factor = to_double(key, value);
  } else if (key == "max_iterations") {
    c.adaptive.solver.max_iterations = static_cast<int>(to_long(key, value));
  } else if (key == "omega_init") {
    c.adaptive.solver.omega_init = to_double(key, value);
  } else if (key == "omega_shrink") {
    c.adaptive.solver.omega_shrink = to_double(key, value);
  } else if (key == "omega_grow") {
    c.adaptive.solver.omega_grow = to_double(key, value);
  } else if (key == "grow_after") {
    c.adaptive.solver.grow_after = static_cast<int>(to_long(key, value));
  } else if (key == "bbk_exponent") {
    c.adaptive.solver.bbk_exponent = to_double(key, value);
  } else if (key == "epsilon") {
    c.epsilon = to_double(key, value);
  } else if (key == "output") {
    c.output = value;
  } else if (key == "cutline_intervals") {
    c.adaptive.cutline_intervals = static_cast<int>(to_long(key, value));
  } else if (key == "vtk") {
    c.write_vtk = to_bool(key, value);
  } else if (key == "record_timing") {
    c.record_timing = to_bool(key, value);
  } else {
    std::string list;
    for (const auto& k : config_keys()) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown key '" + raw_key + "' (valid: " + list + ")");
  }
}

RunConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags) {
  RunConfig c;
  try {
    for (const auto& [k, v] : file) apply_entry(c, k, v);
    for (const auto& [k, v] : flags) apply_entry(c, k, v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& m = c.adaptive.marking;
  if (!(m.ref_tol > 0.0 && m.ref_tol < 1.0)) throw ConfigError("ref_tol must lie in (0,1)");
  if (!(m.min_ref > 0.0 && m.min_ref < 1.0)) throw ConfigError("min_ref must lie in (0,1)");
  if (m.initial_uniform_steps < 0) throw ConfigError("initial_uniform_steps must be nonnegative");
  const auto& s = c.adaptive.solver;
  if (!(s.residual_factor > 0.0)) throw ConfigError("residual_factor must be positive");
  if (s.max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (!(s.omega_init > 0.0 && s.omega_init <= 1.0)) throw ConfigError("omega_init must lie in (0,1]");
  if (!(s.omega_shrink > 0.0 && s.omega_shrink < 1.0)) throw ConfigError("omega_shrink must lie in (0,1)");
  if (!(s.omega_grow >= 1.0)) throw ConfigError("omega_grow must be at least 1");
  if (s.grow_after < 1) throw ConfigError("grow_after must be positive");
  if (!(s.bbk_exponent >= 1.0)) throw ConfigError("bbk_exponent must be at least 1");
  if (c.epsilon && !(*c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (c.adaptive.cutline_intervals < 1) throw ConfigError("cutline_intervals must be positive");

  // The budget has to cover the root mesh of every grid that will run.
  for (const auto& name : c.cases) {
    const BenchmarkCase bc = case_by_name(name);
    for (GridId g : c.grids.empty() ? std::vector<GridId>{bc.default_grid} : c.grids) {
      if (std::find(bc.grids.begin(), bc.grids.end(), g) == bc.grids.end())
        throw ConfigError("case '" + name + "' is not defined on grid " + grid_name(g));
      const long root = static_cast<long>(make_root_grid(g, bc.boundary).num_vertices());
      if (m.dof_budget < root)
        throw ConfigError("dof_budget " + std::to_string(m.dof_budget) + " is below the " + std::to_string(root) +
                          " root dofs of grid " + grid_name(g));
    }
  }
  return c;
}

std::string manifest_json(const RunConfig& c, const std::string& case_name, GridId grid, Method method,
                          const AdaptiveTrace* trace) {
  nlohmann::ordered_json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["metrics_header"] = kMetricsHeader;
  j["case"] = case_name;
  j["grid"] = grid_name(grid);
  j["method"] = std::string(method_name(method));
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  const auto& m = c.adaptive.marking;
  j["marking"] = {{"ref_tol", m.ref_tol},
                  {"min_ref", m.min_ref},
                  {"relax", m.relax},
                  {"dof_budget", m.dof_budget},
                  {"initial_uniform_steps", m.initial_uniform_steps}};
  const auto& s = c.adaptive.solver;
  j["solver"] = {{"residual_factor", s.residual_factor}, {"max_iterations", s.max_iterations},
                 {"omega_init", s.omega_init},           {"omega_shrink", s.omega_shrink},
                 {"omega_grow", s.omega_grow},           {"grow_after", s.grow_after},
                 {"omega_min", s.omega_min},             {"bbk_exponent", s.bbk_exponent}};
  const auto& k = c.adaptive.constants;
  j["estimator"] = {{"C_I", k.c_interp}, {"C_F", k.c_face}, {"C", k.c_generic}, {"C_inv", k.c_inverse}};
  j["cutline_intervals"] = c.adaptive.cutline_intervals;
  j["vtk"] = c.write_vtk;
  j["record_timing"] = c.record_timing;
  if (trace) {
    j["levels"] = trace->levels.size();
    j["converged"] = trace->all_converged();
  }
  return j.dump(2);
}

std::filesystem::path run_directory(const RunConfig& c, const std::string& case_name, GridId grid, Method method) {
  return c.output / (case_name + "_grid" + grid_name(grid) + "_" + std::string(method_name(method)));
}

int run_matrix(const RunConfig& c, std::ostream& log) {
  bool all_ok = true;
  for (const auto& name : c.cases) {
    BenchmarkCase bc = case_by_name(name);
    if (c.epsilon) bc.problem.epsilon = *c.epsilon;
    const std::vector<GridId> grids = c.grids.empty() ? std::vector<GridId>{bc.default_grid} : c.grids;
    for (GridId grid : grids) {
      for (Method method : c.methods) {
        const auto dir = run_directory(c, name, grid, method);
        std::filesystem::create_directories(dir);
        log << "run " << name << " grid " << grid_name(grid) << " method " << method_name(method) << " -> "
            << dir.string() << '\n';
        LevelCallback on_level = [&](const LevelView& v) {
          log << "  level " << v.record.level << " dofs " << v.record.dofs << " eta " << format_double(v.record.eta)
              << " iters " << v.record.solve.iterations << " rejects " << v.record.solve.rejections
              << (v.record.solve.converged ? "" : " NOT CONVERGED") << '\n';
          if (c.write_vtk) {
            std::ofstream out(level_vtk_path(dir, v.record.level));
            write_vtk(v.mesh, v.solution, out);
          }
        };
        const AdaptiveTrace trace = run_adaptive(bc, grid, method, c.adaptive, on_level);
        OutputOptions opts;
        opts.with_seconds = c.record_timing;
        opts.manifest_json = manifest_json(c, name, grid, method, &trace);
        write_outputs(trace, dir, opts);
        all_ok = all_ok && trace.all_converged();
      }
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace afc
