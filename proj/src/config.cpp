#include "dfs/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dfs {

using json = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  std::set<std::string> wanted(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!wanted.count(k)) throw ConfigError(join(path, k), "unknown field");
  for (const char* k : keys)
    if (!j.contains(k)) throw ConfigError(join(path, k), "missing field");
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_double(j[i], index_path(path, i)));
  return out;
}

RMat get_matrix(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw ConfigError(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " array");
  RMat m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = get_doubles(j[r], index_path(path, r));
    if (row.size() != n) throw ConfigError(index_path(path, r), "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
  }
  return m;
}

void check_coupling_matrix(const RMat& m, const std::string& path) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (m(r, r) != 0.0)
      throw ConfigError(path, "diagonal entry [" + std::to_string(r) + "][" + std::to_string(r) + "] must be zero");
    for (Eigen::Index c = r + 1; c < m.cols(); ++c)
      if (m(r, c) != m(c, r))
        throw ConfigError(path, "not symmetric at [" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
}

json matrix_json(const RMat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

void Config::validate() const {
  const std::size_t n = system.n_spins();
  if (n == 0) throw ConfigError("spin_system.nu_hz", "at least one spin required");
  if (n > 12) throw ConfigError("spin_system.nu_hz", "at most 12 spins supported");
  if (static_cast<std::size_t>(system.d.rows()) != n || static_cast<std::size_t>(system.d.cols()) != n)
    throw ConfigError("spin_system.d_hz", "size does not match nu_hz");
  if (static_cast<std::size_t>(system.j.rows()) != n || static_cast<std::size_t>(system.j.cols()) != n)
    throw ConfigError("spin_system.j_hz", "size does not match nu_hz");
  check_coupling_matrix(system.d, "spin_system.d_hz");
  check_coupling_matrix(system.j, "spin_system.j_hz");
  try {
    system.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("spin_system", e.what());
  }

  const std::string ep = "ensemble";
  if (ensemble.known_unc_hz < 0.0) throw ConfigError(ep + ".known_unc_hz", "must be >= 0");
  if (ensemble.unknown_unc_hz < 0.0) throw ConfigError(ep + ".unknown_unc_hz", "must be >= 0");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < ensemble.unknown_centers.size(); ++i) {
    const auto& c = ensemble.unknown_centers[i];
    const std::string path = index_path(ep + ".unknown_centers", i);
    if (c.a < 1 || c.b < 1 || c.a > n || c.b > n || c.a == c.b)
      throw ConfigError(path + ".spins", "must name two distinct spins in 1.." + std::to_string(n));
    if (!seen.insert(std::minmax(c.a, c.b)).second) throw ConfigError(path + ".spins", "duplicate pair");
  }
  if (ensemble.eps_values.empty()) throw ConfigError(ep + ".eps_values", "must not be empty");
  for (std::size_t i = 0; i < ensemble.eps_values.size(); ++i)
    if (!(ensemble.eps_values[i] > 0.0)) throw ConfigError(index_path(ep + ".eps_values", i), "must be > 0");
  if (ensemble.n_members == 0) throw ConfigError(ep + ".n_members", "must be >= 1");

  try {
    grape.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("grape", e.what());
  }
  if (grape.max_iters == 0) throw ConfigError("grape.max_iters", "must be >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("grape.threshold", "must lie in (0, 1]");
  if (!(readout_threshold > 0.0 && readout_threshold <= 1.0))
    throw ConfigError("grape.readout_threshold", "must lie in (0, 1]");

  const std::string xp = "experiment";
  if (experiment.mode != "ideal" && experiment.mode != "synthesized")
    throw ConfigError(xp + ".mode", "expected \"ideal\" or \"synthesized\"");
  if (experiment.sweep_half_width_hz < 0.0) throw ConfigError(xp + ".sweep_half_width_hz", "must be >= 0");
  if (experiment.sweep_wide_half_width_hz < experiment.sweep_half_width_hz)
    throw ConfigError(xp + ".sweep_wide_half_width_hz", "must be >= sweep_half_width_hz");
  if (experiment.sigma_phi.empty()) throw ConfigError(xp + ".sigma_phi", "must not be empty");
  for (std::size_t i = 0; i < experiment.sigma_phi.size(); ++i)
    if (experiment.sigma_phi[i] < 0.0) throw ConfigError(index_path(xp + ".sigma_phi", i), "must be >= 0");
  if (experiment.duration_scan_s.empty()) throw ConfigError(xp + ".duration_scan_s", "must not be empty");
  for (std::size_t i = 0; i < experiment.duration_scan_s.size(); ++i) {
    if (!(experiment.duration_scan_s[i] >= grape.dt))
      throw ConfigError(index_path(xp + ".duration_scan_s", i), "must be at least one step (grape.dt_s)");
    if (i > 0 && !(experiment.duration_scan_s[i] > experiment.duration_scan_s[i - 1]))
      throw ConfigError(index_path(xp + ".duration_scan_s", i), "durations must be ascending");
  }
  if (!(experiment.duration_threshold > 0.0 && experiment.duration_threshold <= 1.0))
    throw ConfigError(xp + ".duration_threshold", "must lie in (0, 1]");
  if (experiment.scan_max_iters == 0) throw ConfigError(xp + ".scan_max_iters", "must be >= 1");
}

Ensemble Config::build_ensemble() const { return make_ensemble(system, ensemble); }

double Config::threshold_for(const std::string& target) const {
  return target.rfind("readout_", 0) == 0 ? readout_threshold : threshold;
}

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "syntax error at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  expect_keys(root, "", {"spin_system", "ensemble", "grape", "experiment"});
  Config cfg;

  const json& s = root["spin_system"];
  expect_keys(s, "spin_system", {"nu_hz", "d_hz", "j_hz"});
  cfg.system.nu = get_doubles(s["nu_hz"], "spin_system.nu_hz");
  const std::size_t n = cfg.system.nu.size();
  if (n == 0 || n > 12) throw ConfigError("spin_system.nu_hz", "expected 1 to 12 spins");
  cfg.system.d = get_matrix(s["d_hz"], "spin_system.d_hz", n);
  cfg.system.j = get_matrix(s["j_hz"], "spin_system.j_hz", n);

  const json& e = root["ensemble"];
  expect_keys(e, "ensemble",
              {"known_unc_hz", "unknown_unc_hz", "unknown_centers", "eps_values", "n_members", "seed"});
  cfg.ensemble.known_unc_hz = get_double(e["known_unc_hz"], "ensemble.known_unc_hz");
  cfg.ensemble.unknown_unc_hz = get_double(e["unknown_unc_hz"], "ensemble.unknown_unc_hz");
  const json& centers = e["unknown_centers"];
  if (!centers.is_array()) throw ConfigError("ensemble.unknown_centers", "expected an array");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const std::string path = index_path("ensemble.unknown_centers", i);
    expect_keys(centers[i], path, {"spins", "hz"});
    const json& spins = centers[i]["spins"];
    if (!spins.is_array() || spins.size() != 2) throw ConfigError(path + ".spins", "expected two spin labels");
    cfg.ensemble.unknown_centers.push_back({get_uint(spins[0], path + ".spins[0]"),
                                            get_uint(spins[1], path + ".spins[1]"),
                                            get_double(centers[i]["hz"], path + ".hz")});
  }
  cfg.ensemble.eps_values = get_doubles(e["eps_values"], "ensemble.eps_values");
  cfg.ensemble.n_members = get_uint(e["n_members"], "ensemble.n_members");
  cfg.ensemble.seed = get_uint(e["seed"], "ensemble.seed");

  const json& g = root["grape"];
  expect_keys(g, "grape",
              {"n_steps", "dt_s", "max_iters", "tol", "amp_max_hz", "seed", "step_size", "target_fidelity",
               "threshold", "readout_threshold"});
  cfg.grape.n_steps = get_uint(g["n_steps"], "grape.n_steps");
  cfg.grape.dt = get_double(g["dt_s"], "grape.dt_s");
  cfg.grape.max_iters = get_uint(g["max_iters"], "grape.max_iters");
  cfg.grape.tol = get_double(g["tol"], "grape.tol");
  cfg.grape.amp_max = get_double(g["amp_max_hz"], "grape.amp_max_hz");
  cfg.grape.seed = get_uint(g["seed"], "grape.seed");
  cfg.grape.step_size = get_double(g["step_size"], "grape.step_size");
  cfg.grape.target_fidelity = get_double(g["target_fidelity"], "grape.target_fidelity");
  cfg.threshold = get_double(g["threshold"], "grape.threshold");
  cfg.readout_threshold = get_double(g["readout_threshold"], "grape.readout_threshold");

  const json& x = root["experiment"];
  expect_keys(x, "experiment",
              {"mode", "sweep_half_width_hz", "sweep_wide_half_width_hz", "sigma_phi", "scan_durations",
               "duration_scan_s", "duration_threshold", "scan_max_iters"});
  cfg.experiment.mode = get_string(x["mode"], "experiment.mode");
  cfg.experiment.sweep_half_width_hz = get_double(x["sweep_half_width_hz"], "experiment.sweep_half_width_hz");
  cfg.experiment.sweep_wide_half_width_hz =
      get_double(x["sweep_wide_half_width_hz"], "experiment.sweep_wide_half_width_hz");
  cfg.experiment.sigma_phi = get_doubles(x["sigma_phi"], "experiment.sigma_phi");
  cfg.experiment.scan_durations = get_bool(x["scan_durations"], "experiment.scan_durations");
  cfg.experiment.duration_scan_s = get_doubles(x["duration_scan_s"], "experiment.duration_scan_s");
  cfg.experiment.duration_threshold = get_double(x["duration_threshold"], "experiment.duration_threshold");
  cfg.experiment.scan_max_iters = get_uint(x["scan_max_iters"], "experiment.scan_max_iters");

  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const Config& cfg) {
  json root;
  root["spin_system"] = {{"nu_hz", cfg.system.nu}, {"d_hz", matrix_json(cfg.system.d)},
                         {"j_hz", matrix_json(cfg.system.j)}};
  json centers = json::array();
  for (const auto& c : cfg.ensemble.unknown_centers) centers.push_back({{"spins", {c.a, c.b}}, {"hz", c.hz}});
  root["ensemble"] = {{"known_unc_hz", cfg.ensemble.known_unc_hz},
                      {"unknown_unc_hz", cfg.ensemble.unknown_unc_hz},
                      {"unknown_centers", centers},
                      {"eps_values", cfg.ensemble.eps_values},
                      {"n_members", cfg.ensemble.n_members},
                      {"seed", cfg.ensemble.seed}};
  root["grape"] = {{"n_steps", cfg.grape.n_steps},
                   {"dt_s", cfg.grape.dt},
                   {"max_iters", cfg.grape.max_iters},
                   {"tol", cfg.grape.tol},
                   {"amp_max_hz", cfg.grape.amp_max},
                   {"seed", cfg.grape.seed},
                   {"step_size", cfg.grape.step_size},
                   {"target_fidelity", cfg.grape.target_fidelity},
                   {"threshold", cfg.threshold},
                   {"readout_threshold", cfg.readout_threshold}};
  root["experiment"] = {{"mode", cfg.experiment.mode},
                        {"sweep_half_width_hz", cfg.experiment.sweep_half_width_hz},
                        {"sweep_wide_half_width_hz", cfg.experiment.sweep_wide_half_width_hz},
                        {"sigma_phi", cfg.experiment.sigma_phi},
                        {"scan_durations", cfg.experiment.scan_durations},
                        {"duration_scan_s", cfg.experiment.duration_scan_s},
                        {"duration_threshold", cfg.experiment.duration_threshold},
                        {"scan_max_iters", cfg.experiment.scan_max_iters}};
  return root.dump(2) + "\n";
}

std::string config_hash(const Config& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Config default_config() {
  Config cfg;
  cfg.system = cnb_nominal();
  cfg.ensemble.unknown_centers = cnb_unknown_centers();
  cfg.validate();
  return cfg;
}

}  // namespace dfs
