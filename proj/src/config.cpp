#include "weylherm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weylherm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& message) {
  throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& path, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(path, line, key + ": expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& path, int line, const std::string& key,
              const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(path, line, key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& path, int line, const std::string& key,
                const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(path, line, key + ": expected true/false, got '" + value + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* scheme_name(DerivScheme s) {
  switch (s) {
    case DerivScheme::central4: return "central4";
    case DerivScheme::central2: return "central2";
    case DerivScheme::spectral_fourier: return "spectral_fourier";
  }
  return "?";
}

} // namespace

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("fnv1a_file: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h = fnv1a(buf, static_cast<std::size_t>(is.gcount()), h);
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

PotentialModel ExperimentConfig::make_potential() const {
  if (potential_kind == "harmonic") return PotentialModel::harmonic();
  if (potential_kind == "quartic") return PotentialModel::quartic(chi);
  throw std::invalid_argument("potential.kind: unknown kind '" + potential_kind + "'");
}

InitialData ExperimentConfig::make_initial() const {
  if (initial_kind == "coherent_state") return InitialData::coherent_state(sigma_x);
  throw std::invalid_argument("initial.kind: unknown kind '" + initial_kind + "'");
}

void ExperimentConfig::validate() const {
  if (experiment != "simulate" && experiment != "converge" && experiment != "hbar_sweep" &&
      experiment != "periodicity")
    throw std::invalid_argument("experiment.kind: unknown experiment '" + experiment + "'");
  make_potential();
  make_initial();
  if (chi < 0.0) throw std::invalid_argument("potential.chi: must be >= 0");
  if (grid.n_points < 8) throw std::invalid_argument("grid.nx: must be >= 8");
  grid.validate();
  if (n_modes < 0) throw std::invalid_argument("basis.n_modes: must be >= 0");
  if (quad_order < 0) throw std::invalid_argument("basis.quad_order: must be >= 0");
  if (sigma_x <= 0.0) throw std::invalid_argument("initial.sigma_x: must be > 0");
  if (nm_max < 0 || nm_max > 3) throw std::invalid_argument("output.nm_max: must lie in 0..3");
  for (const auto& f : formats)
    if (f != "csv" && f != "snapshot")
      throw std::invalid_argument("output.formats: unknown format '" + f + "'");
  evo.validate();

  if (experiment == "converge") {
    if (mode_list.empty()) throw std::invalid_argument("converge.mode_list: must be non-empty");
    for (std::size_t i = 0; i + 1 < mode_list.size(); ++i)
      if (mode_list[i] >= mode_list[i + 1])
        throw std::invalid_argument("converge.mode_list: must be strictly increasing");
    if (mode_list.front() < 0) throw std::invalid_argument("converge.mode_list: modes must be >= 0");
    if (reference_modes <= mode_list.back())
      throw std::invalid_argument("converge.reference_modes: must exceed every entry of converge.mode_list");
  }
  if (experiment == "hbar_sweep") {
    if (hbar_list.size() < 3)
      throw std::invalid_argument("sweep.hbar_list: need at least 3 values");
    for (double h : hbar_list) (void)HbarValue{h};
    if (sweep_t_final <= 0.0) throw std::invalid_argument("sweep.t_final: must be > 0");
  }
  if (experiment == "periodicity" && potential_kind != "harmonic")
    throw std::invalid_argument("potential.kind: the periodicity experiment requires 'harmonic'");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "experiment.kind = " << experiment << "\n";
  os << upstream_canonical();
  os << "basis.n_modes = " << n_modes << "\n";
  os << "output.nm_max = " << nm_max << "\n";
  os << "output.formats = ";
  for (std::size_t i = 0; i < formats.size(); ++i) os << (i ? "," : "") << formats[i];
  os << "\n";
  os << "converge.mode_list = ";
  for (std::size_t i = 0; i < mode_list.size(); ++i) os << (i ? "," : "") << mode_list[i];
  os << "\n";
  os << "converge.reference_modes = " << reference_modes << "\n";
  os << "sweep.hbar_list = ";
  for (std::size_t i = 0; i < hbar_list.size(); ++i) os << (i ? "," : "") << fmt(hbar_list[i]);
  os << "\n";
  os << "sweep.t_final = " << fmt(sweep_t_final) << "\n";
  return os.str();
}

std::string ExperimentConfig::upstream_canonical() const {
  std::ostringstream os;
  os << "potential.kind = " << potential_kind << "\n";
  os << "potential.chi = " << fmt(chi) << "\n";
  os << "grid.x_min = " << fmt(grid.x_min) << "\n";
  os << "grid.x_max = " << fmt(grid.x_max) << "\n";
  os << "grid.nx = " << grid.n_points << "\n";
  os << "grid.scheme = " << scheme_name(grid.scheme) << "\n";
  os << "basis.quad_order = " << quad_order << "\n";
  os << "evolution.model = " << (evo.model == Model::von_neumann ? "von_neumann" : "semiclassical") << "\n";
  os << "evolution.scheme = " << (evo.scheme == TimeScheme::rk4 ? "rk4" : "implicit_midpoint") << "\n";
  os << "evolution.dt = " << fmt(evo.dt) << "\n";
  os << "evolution.t_final = " << fmt(evo.t_final) << "\n";
  os << "evolution.hbar = " << fmt(evo.hbar) << "\n";
  os << "evolution.safety_factor = " << fmt(evo.safety_factor) << "\n";
  os << "evolution.force_dt = " << (evo.force_dt ? "true" : "false") << "\n";
  os << "evolution.midpoint_tol = " << fmt(evo.midpoint_tol) << "\n";
  os << "evolution.midpoint_max_iter = " << evo.midpoint_max_iter << "\n";
  os << "evolution.snapshot_every = " << evo.snapshot_every << "\n";
  os << "initial.kind = " << initial_kind << "\n";
  os << "initial.sigma_x = " << fmt(sigma_x) << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::checksum() const {
  const std::string c = canonical();
  return fnv1a(c.data(), c.size());
}

std::uint64_t ExperimentConfig::upstream_checksum() const {
  std::ostringstream os;
  os << upstream_canonical() << "reference_modes = " << reference_modes << "\n";
  const std::string c = os.str();
  return fnv1a(c.data(), c.size());
}

ExperimentConfig parse_config(const std::string& path, const std::string& experiment_override,
                              bool full_scale) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("parse_config: cannot open " + path);

  ExperimentConfig cfg;
  cfg.evo.model = Model::von_neumann;
  cfg.evo.scheme = TimeScheme::rk4;
  cfg.evo.dt = 5e-4;
  cfg.evo.t_final = 2.0 * kPi;
  cfg.evo.hbar = 0.1;

  const std::string exp_hint =
      !experiment_override.empty() ? experiment_override : std::string();
  if (full_scale && (exp_hint.empty() || exp_hint == "converge")) {
    // published benchmark scale: dx = 1e-3, dt = 1e-4, reference N = 500
    cfg.grid.n_points = 8000;
    cfg.evo.dt = 1e-4;
    cfg.evo.snapshot_every = 1000;
    cfg.reference_modes = 500;
    cfg.mode_list = {20, 30, 40, 50, 60, 70};
  }

  std::string raw;
  int lineno = 0;
  bool experiment_from_file = false;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(path, lineno, "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(path, lineno, "expected 'section.key = value'");

    if (key == "experiment.kind") {
      cfg.experiment = value;
      experiment_from_file = true;
    } else if (key == "potential.kind") {
      cfg.potential_kind = value;
    } else if (key == "potential.chi") {
      cfg.chi = parse_double(path, lineno, key, value);
    } else if (key == "grid.x_min") {
      cfg.grid.x_min = parse_double(path, lineno, key, value);
    } else if (key == "grid.x_max") {
      cfg.grid.x_max = parse_double(path, lineno, key, value);
    } else if (key == "grid.nx") {
      cfg.grid.n_points = parse_int(path, lineno, key, value);
      if (cfg.grid.n_points <= 0) fail(path, lineno, "grid.nx: must be positive");
    } else if (key == "grid.scheme") {
      if (value == "central4")
        cfg.grid.scheme = DerivScheme::central4;
      else if (value == "central2")
        cfg.grid.scheme = DerivScheme::central2;
      else if (value == "spectral_fourier")
        cfg.grid.scheme = DerivScheme::spectral_fourier;
      else
        fail(path, lineno, "grid.scheme: unknown scheme '" + value + "'");
    } else if (key == "basis.n_modes") {
      cfg.n_modes = parse_int(path, lineno, key, value);
    } else if (key == "basis.quad_order") {
      cfg.quad_order = parse_int(path, lineno, key, value);
    } else if (key == "evolution.model") {
      if (value == "von_neumann")
        cfg.evo.model = Model::von_neumann;
      else if (value == "semiclassical")
        cfg.evo.model = Model::semiclassical;
      else
        fail(path, lineno, "evolution.model: unknown model '" + value + "'");
    } else if (key == "evolution.scheme") {
      if (value == "rk4")
        cfg.evo.scheme = TimeScheme::rk4;
      else if (value == "implicit_midpoint")
        cfg.evo.scheme = TimeScheme::implicit_midpoint;
      else
        fail(path, lineno, "evolution.scheme: unknown scheme '" + value + "'");
    } else if (key == "evolution.dt") {
      cfg.evo.dt = parse_double(path, lineno, key, value);
    } else if (key == "evolution.t_final") {
      cfg.evo.t_final = parse_double(path, lineno, key, value);
    } else if (key == "evolution.hbar") {
      cfg.evo.hbar = parse_double(path, lineno, key, value);
    } else if (key == "evolution.safety_factor") {
      cfg.evo.safety_factor = parse_double(path, lineno, key, value);
    } else if (key == "evolution.force_dt") {
      cfg.evo.force_dt = parse_bool(path, lineno, key, value);
    } else if (key == "evolution.midpoint_tol") {
      cfg.evo.midpoint_tol = parse_double(path, lineno, key, value);
    } else if (key == "evolution.midpoint_max_iter") {
      cfg.evo.midpoint_max_iter = parse_int(path, lineno, key, value);
    } else if (key == "evolution.snapshot_every") {
      cfg.evo.snapshot_every = parse_int(path, lineno, key, value);
    } else if (key == "initial.kind") {
      cfg.initial_kind = value;
    } else if (key == "initial.sigma_x") {
      cfg.sigma_x = parse_double(path, lineno, key, value);
    } else if (key == "output.directory") {
      cfg.out_dir = value;
    } else if (key == "output.formats") {
      cfg.formats = split_list(value);
    } else if (key == "output.nm_max") {
      cfg.nm_max = parse_int(path, lineno, key, value);
    } else if (key == "converge.mode_list") {
      cfg.mode_list.clear();
      for (const auto& item : split_list(value))
        cfg.mode_list.push_back(parse_int(path, lineno, key, item));
    } else if (key == "converge.reference_modes") {
      cfg.reference_modes = parse_int(path, lineno, key, value);
    } else if (key == "sweep.hbar_list") {
      cfg.hbar_list.clear();
      for (const auto& item : split_list(value))
        cfg.hbar_list.push_back(parse_double(path, lineno, key, item));
    } else if (key == "sweep.t_final") {
      cfg.sweep_t_final = parse_double(path, lineno, key, value);
    } else {
      fail(path, lineno, "unknown key '" + key + "'");
    }
  }

  if (!experiment_override.empty()) {
    if (experiment_from_file && cfg.experiment != experiment_override)
      throw std::invalid_argument("parse_config: experiment.kind '" + cfg.experiment +
                                  "' conflicts with the requested subcommand '" +
                                  experiment_override + "'");
    cfg.experiment = experiment_override;
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return cfg;
}

} // namespace weylherm
