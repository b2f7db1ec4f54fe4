#include "fdkp/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdkp/errors.hpp"

namespace fdkp::io {

using nlohmann::json;

namespace {

json canonical_json(const Config& c) {
  // nlohmann::json objects are stored sorted by key, which makes the dump
  // canonical as long as construction order is irrelevant.
  json j;
  j["beta"] = c.params.beta;
  j["delta"] = c.params.delta;
  j["epsilon"] = c.params.epsilon;
  j["theta"] = c.params.theta;
  j["sobolev_s"] = c.params.sobolev_s;
  j["ball_M"] = c.params.ball_m;
  j["eps0"] = c.params.eps0;
  j["fixed_point_tol"] = c.solver.fixed_point_tol;
  j["fixed_point_max_iter"] = c.solver.fixed_point_max_iter;
  j["newton_tol"] = c.solver.newton_tol;
  j["newton_max_iter"] = c.solver.newton_max_iter;
  j["linear_solver_tol"] = c.solver.linear_solver_tol;
  j["linear_solver_max_iter"] = c.solver.linear_solver_max_iter;
  j["jacobian_fd_step"] = c.solver.jacobian_fd_step;
  j["max_damping_halvings"] = c.solver.max_damping_halvings;
  j["reduced_picard"] = c.solver.use_picard;
  j["grid_half_width_x"] = c.grid_half_width_x;
  j["grid_half_width_y"] = c.grid_half_width_y;
  j["grid_points_x"] = c.grid_points_x;
  j["grid_points_y"] = c.grid_points_y;
  j["epsilons"] = c.epsilons;
  j["k_index"] = c.k_index;
  j["out_dir"] = c.out_dir;
  j["report_path"] = c.report_path;
  j["probe_grid_points"] = c.probe_grid_points;
  j["probe_half_width"] = c.probe_half_width;
  j["dispersion_k1_max"] = c.dispersion_k1_max;
  j["dispersion_samples"] = c.dispersion_samples;
  return j;
}

template <typename T>
void read_key(const json& j, const std::string& key, T& target) {
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: key '" + key + "' has the wrong type");
  }
}

}  // namespace

spectral::Grid Config::grid() const {
  return spectral::make_grid(grid_half_width_x, grid_half_width_y, grid_points_x, grid_points_y);
}

void Config::validate() const {
  try {
    params.validate();
    solver.validate();
    grid();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < params.eps0)) {
      throw ConfigError("config: epsilons entries must lie in (0, eps0)");
    }
  }
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) {
      throw ConfigError("config: epsilons must be strictly decreasing");
    }
  }
  if (k_index != 1 && k_index != 2) {
    throw ConfigError("config: k_index must be 1 or 2 (tau tables exist for these only)");
  }
  for (int n : probe_grid_points) {
    if (n < 16 || (n & (n - 1)) != 0) {
      throw ConfigError("config: probe_grid_points must be powers of two >= 16");
    }
  }
  if (!(probe_half_width > 0.0)) throw ConfigError("config: probe_half_width must be positive");
  if (!(dispersion_k1_max > 0.0) || dispersion_samples < 2) {
    throw ConfigError("config: dispersion sampling must have k1_max > 0 and samples >= 2");
  }
}

std::string Config::to_json() const { return canonical_json(*this).dump(2); }

std::uint64_t Config::hash() const {
  const std::string dump = canonical_json(*this).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char byte : dump) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  return h;
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be a flat JSON object");

  Config c;
  const json canonical = canonical_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!canonical.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (value.is_object()) throw ConfigError("config: key '" + key + "' must be flat");
  }

  auto opt = [&](const char* key) { return j.contains(key); };
  if (opt("beta")) read_key(j, "beta", c.params.beta);
  if (opt("delta")) read_key(j, "delta", c.params.delta);
  if (opt("epsilon")) read_key(j, "epsilon", c.params.epsilon);
  if (opt("theta")) read_key(j, "theta", c.params.theta);
  if (opt("sobolev_s")) read_key(j, "sobolev_s", c.params.sobolev_s);
  if (opt("ball_M")) read_key(j, "ball_M", c.params.ball_m);
  if (opt("eps0")) read_key(j, "eps0", c.params.eps0);
  if (opt("fixed_point_tol")) read_key(j, "fixed_point_tol", c.solver.fixed_point_tol);
  if (opt("fixed_point_max_iter")) read_key(j, "fixed_point_max_iter", c.solver.fixed_point_max_iter);
  if (opt("newton_tol")) read_key(j, "newton_tol", c.solver.newton_tol);
  if (opt("newton_max_iter")) read_key(j, "newton_max_iter", c.solver.newton_max_iter);
  if (opt("linear_solver_tol")) read_key(j, "linear_solver_tol", c.solver.linear_solver_tol);
  if (opt("linear_solver_max_iter")) read_key(j, "linear_solver_max_iter", c.solver.linear_solver_max_iter);
  if (opt("jacobian_fd_step")) read_key(j, "jacobian_fd_step", c.solver.jacobian_fd_step);
  if (opt("max_damping_halvings")) read_key(j, "max_damping_halvings", c.solver.max_damping_halvings);
  if (opt("reduced_picard")) read_key(j, "reduced_picard", c.solver.use_picard);
  if (opt("grid_half_width_x")) read_key(j, "grid_half_width_x", c.grid_half_width_x);
  if (opt("grid_half_width_y")) read_key(j, "grid_half_width_y", c.grid_half_width_y);
  if (opt("grid_points_x")) read_key(j, "grid_points_x", c.grid_points_x);
  if (opt("grid_points_y")) read_key(j, "grid_points_y", c.grid_points_y);
  if (opt("epsilons")) read_key(j, "epsilons", c.epsilons);
  if (opt("k_index")) read_key(j, "k_index", c.k_index);
  if (opt("out_dir")) read_key(j, "out_dir", c.out_dir);
  if (opt("report_path")) read_key(j, "report_path", c.report_path);
  if (opt("probe_grid_points")) read_key(j, "probe_grid_points", c.probe_grid_points);
  if (opt("probe_half_width")) read_key(j, "probe_half_width", c.probe_half_width);
  if (opt("dispersion_k1_max")) read_key(j, "dispersion_k1_max", c.dispersion_k1_max);
  if (opt("dispersion_samples")) read_key(j, "dispersion_samples", c.dispersion_samples);

  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace fdkp::io
