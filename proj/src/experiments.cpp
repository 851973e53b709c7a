#include "weylherm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "weylherm/diagnostics.hpp"

namespace weylherm {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << contents;
  if (!os) throw std::runtime_error("write failed for " + path);
}

class ArtifactCollector {
 public:
  explicit ArtifactCollector(const ExperimentConfig& cfg) : cfg_(cfg) {
    fs::create_directories(cfg.out_dir);
    summary_["experiment"] = cfg.experiment;
    summary_["config_checksum"] = hex64(cfg.checksum());
  }

  void add_file(const std::string& path) {
    artifacts_.files.push_back({path, hex64(fnv1a_file(path))});
  }

  json& summary() { return summary_; }

  RunArtifacts finish() {
    json files = json::array();
    for (const auto& f : artifacts_.files) files.push_back({{"path", f.path}, {"checksum", f.checksum}});
    summary_["files"] = files;
    // wall-clock metadata lives only here, outside the deterministic payload
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    summary_["meta"] = {{"generated_at", stamp}};

    const std::string path = join(cfg_.out_dir, cfg_.experiment + "_summary.json");
    write_text(path, summary_.dump(2) + "\n");
    artifacts_.summary_path = path;
    artifacts_.files.push_back({path, hex64(fnv1a_file(path))});
    return artifacts_;
  }

 private:
  const ExperimentConfig& cfg_;
  RunArtifacts artifacts_;
  json summary_;
};

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  for (const auto& f : cfg.formats)
    if (f == format) return true;
  return false;
}

std::string diagnostics_header(int nm_max) {
  std::string h = "t,l2_norm,trace_re,trace_im,parity_residual,boundary_mass";
  for (int m = 1; m <= nm_max; ++m) h += ",n" + std::to_string(m);
  return h + "\n";
}

std::string diagnostics_row(const HermiteState& state, int nm_max) {
  const cplx tr = trace(state);
  std::string row = fmt(state.time) + "," + fmt(l2_norm(state)) + "," + fmt(tr.real()) + "," +
                    fmt(tr.imag()) + "," + fmt(parity_residual(state)) + "," +
                    fmt(boundary_mass_fraction(state));
  for (int m = 1; m <= nm_max; ++m) row += "," + fmt(nm_functional(state, m));
  return row + "\n";
}

} // namespace

RunArtifacts cmd_simulate(const ExperimentConfig& cfg) {
  ArtifactCollector out(cfg);
  const PotentialModel pot = cfg.make_potential();

  std::string csv = diagnostics_header(cfg.nm_max);
  double peak_boundary_mass = 0.0;
  auto observer = [&](const HermiteState& state, long) {
    csv += diagnostics_row(state, cfg.nm_max);
    peak_boundary_mass = std::max(peak_boundary_mass, boundary_mass_fraction(state));
  };

  Propagator prop(cfg.grid, pot, cfg.n_modes, cfg.evo);
  HermiteState final = prop.run(cfg.make_initial().realize(cfg.grid, cfg.n_modes), observer,
                                &std::cerr);

  const std::string csv_path = join(cfg.out_dir, "diagnostics.csv");
  write_text(csv_path, csv);
  out.add_file(csv_path);

  if (wants(cfg, "snapshot")) {
    const std::string snap_path = join(cfg.out_dir, "final_state.snap");
    write_snapshot(snap_path, final, cfg.evo.hbar, cfg.evo.model);
    out.add_file(snap_path);
  }

  if (peak_boundary_mass > 1e-8)
    std::cerr << "weylherm: warning: boundary mass fraction reached " << peak_boundary_mass
              << "; the periodic truncation of the domain is being felt\n";

  out.summary()["metrics"] = {{"t_final", final.time},
                              {"l2_norm", l2_norm(final)},
                              {"trace_re", trace(final).real()},
                              {"trace_im", trace(final).imag()},
                              {"parity_residual", parity_residual(final)},
                              {"peak_boundary_mass", peak_boundary_mass}};
  return out.finish();
}

namespace {

// On-disk reference series: one snapshot file per observer fire, plus a
// manifest keyed by the upstream config checksum.
struct ReferenceSeries {
  std::vector<std::string> paths;
  std::vector<double> times;

  HermiteState load(std::size_t index) const { return read_snapshot(paths.at(index)); }
};

ReferenceSeries compute_or_load_reference(const ExperimentConfig& cfg, ArtifactCollector& out,
                                          bool* reused) {
  const std::string key = hex64(cfg.upstream_checksum());
  const std::string cache_dir = join(cfg.out_dir, "cache/ref_" + key);
  const std::string manifest_path = join(cache_dir, "manifest.json");

  ReferenceSeries series;
  if (fs::exists(manifest_path)) {
    json manifest;
    try {
      std::ifstream is(manifest_path);
      is >> manifest;
    } catch (...) {
      throw std::runtime_error("reference cache manifest is unreadable: " + manifest_path);
    }
    if (manifest.value("upstream_checksum", "") != key)
      throw std::runtime_error("reference cache checksum mismatch under " + cache_dir);
    for (const auto& entry : manifest.at("snapshots")) {
      const std::string p = join(cache_dir, entry.at("file").get<std::string>());
      if (!fs::exists(p)) throw std::runtime_error("reference cache is missing " + p);
      series.paths.push_back(p);
      series.times.push_back(entry.at("t").get<double>());
    }
    *reused = true;
    return series;
  }

  fs::create_directories(cache_dir);
  const PotentialModel pot = cfg.make_potential();
  Propagator prop(cfg.grid, pot, cfg.reference_modes, cfg.evo);

  json snaps = json::array();
  long index = 0;
  auto observer = [&](const HermiteState& state, long) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%06ld.bin", index++);
    const std::string p = join(cache_dir, name);
    write_snapshot(p, state, cfg.evo.hbar, cfg.evo.model);
    snaps.push_back({{"file", name}, {"t", state.time}});
    series.paths.push_back(p);
    series.times.push_back(state.time);
  };
  prop.run(cfg.make_initial().realize(cfg.grid, cfg.reference_modes), observer, &std::cerr);

  json manifest = {{"upstream_checksum", key},
                   {"reference_modes", cfg.reference_modes},
                   {"snapshots", snaps}};
  write_text(manifest_path, manifest.dump(2) + "\n");
  out.add_file(manifest_path);
  *reused = false;
  return series;
}

} // namespace

RunArtifacts cmd_converge(const ExperimentConfig& cfg) {
  ArtifactCollector out(cfg);
  const PotentialModel pot = cfg.make_potential();

  bool cache_reused = false;
  const ReferenceSeries reference = compute_or_load_reference(cfg, out, &cache_reused);

  std::vector<double> errors;
  for (const int n : cfg.mode_list) {
    double worst = 0.0;
    std::size_t index = 0;
    auto observer = [&](const HermiteState& state, long) {
      const HermiteState ref = reference.load(index);
      if (std::abs(ref.time - state.time) > 1e-9 * std::max(1.0, std::abs(state.time)))
        throw std::runtime_error("converge: snapshot times diverged from the cached reference");
      worst = std::max(worst, mode_l2_distance(state, ref, n));
      ++index;
    };
    Propagator prop(cfg.grid, pot, n, cfg.evo);
    prop.run(cfg.make_initial().realize(cfg.grid, n), observer, &std::cerr);
    if (index != reference.paths.size())
      throw std::runtime_error("converge: snapshot count diverged from the cached reference");
    errors.push_back(worst);
  }

  // error table in the shape of the published one: order blank on row one
  std::string csv = "N,error,order\n";
  std::string plot = "# N log10_error\n";
  json rows = json::array();
  std::vector<double> orders;
  for (std::size_t i = 0; i < cfg.mode_list.size(); ++i) {
    std::string order_txt;
    if (i > 0) {
      const double order = order_of_accuracy(errors[i - 1], cfg.mode_list[i - 1], errors[i],
                                             cfg.mode_list[i]);
      orders.push_back(order);
      order_txt = fmt(order);
    }
    csv += std::to_string(cfg.mode_list[i]) + "," + fmt(errors[i]) + "," + order_txt + "\n";
    plot += std::to_string(cfg.mode_list[i]) + " " + fmt(std::log10(errors[i])) + "\n";
    rows.push_back({{"N", cfg.mode_list[i]},
                    {"error", errors[i]},
                    {"order", i > 0 ? json(orders.back()) : json(nullptr)}});
  }

  const std::string csv_path = join(cfg.out_dir, "converge.csv");
  write_text(csv_path, csv);
  out.add_file(csv_path);
  const std::string plot_path = join(cfg.out_dir, "converge_plot.dat");
  write_text(plot_path, plot);
  out.add_file(plot_path);

  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) decreasing &= errors[i + 1] < errors[i];

  out.summary()["metrics"] = {{"rows", rows},
                              {"strictly_decreasing", decreasing},
                              {"reference_modes", cfg.reference_modes},
                              {"reference_cache_reused", cache_reused},
                              {"upstream_checksum", hex64(cfg.upstream_checksum())}};
  return out.finish();
}

RunArtifacts cmd_hbar_sweep(const ExperimentConfig& cfg) {
  ArtifactCollector out(cfg);
  const PotentialModel pot = cfg.make_potential();

  EvolutionConfig evo = cfg.evo;
  evo.t_final = cfg.sweep_t_final;

  std::string csv = "hbar,error\n";
  std::string plot = "# log10_hbar log10_error\n";
  json rows = json::array();
  std::vector<double> log_h, log_e;
  for (const double hbar : cfg.hbar_list) {
    evo.hbar = hbar;
    evo.model = Model::von_neumann;
    Propagator vn(cfg.grid, pot, cfg.n_modes, evo);
    const HermiteState quantum = vn.run(cfg.make_initial().realize(cfg.grid, cfg.n_modes),
                                        nullptr, &std::cerr);
    evo.model = Model::semiclassical;
    Propagator sc(cfg.grid, pot, cfg.n_modes, evo);
    const HermiteState limit = sc.run(cfg.make_initial().realize(cfg.grid, cfg.n_modes),
                                      nullptr, &std::cerr);

    const double err = mode_l2_distance(quantum, limit, cfg.n_modes);
    csv += fmt(hbar) + "," + fmt(err) + "\n";
    rows.push_back({{"hbar", hbar}, {"error", err}});
    if (err > 0.0) {
      log_h.push_back(std::log(hbar));
      log_e.push_back(std::log(err));
      plot += fmt(std::log10(hbar)) + " " + fmt(std::log10(err)) + "\n";
    }
  }

  // least-squares slope of log error against log hbar
  double slope = 0.0;
  if (log_h.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(log_h.size());
    for (std::size_t i = 0; i < log_h.size(); ++i) {
      sx += log_h[i];
      sy += log_e[i];
      sxx += log_h[i] * log_h[i];
      sxy += log_h[i] * log_e[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  const std::string csv_path = join(cfg.out_dir, "hbar_sweep.csv");
  write_text(csv_path, csv);
  out.add_file(csv_path);
  const std::string plot_path = join(cfg.out_dir, "hbar_sweep_plot.dat");
  write_text(plot_path, plot);
  out.add_file(plot_path);

  out.summary()["metrics"] = {{"rows", rows},
                              {"loglog_slope", slope},
                              {"t_final", cfg.sweep_t_final},
                              {"n_modes", cfg.n_modes}};
  return out.finish();
}

RunArtifacts cmd_periodicity(const ExperimentConfig& cfg) {
  if (cfg.potential_kind != "harmonic")
    throw std::invalid_argument("cmd_periodicity: potential.kind must be 'harmonic'");
  ArtifactCollector out(cfg);
  const PotentialModel pot = cfg.make_potential();

  EvolutionConfig evo = cfg.evo;
  evo.t_final = 2.0 * kPi; // one classical period of V = x^2/2

  const HermiteState initial = cfg.make_initial().realize(cfg.grid, cfg.n_modes);
  Propagator prop(cfg.grid, pot, cfg.n_modes, evo);
  const HermiteState final = prop.run(initial, nullptr, &std::cerr);

  const double ret = mode_l2_distance(final, initial, cfg.n_modes) / l2_norm(initial);

  std::string csv = "t_final,return_error\n" + fmt(final.time) + "," + fmt(ret) + "\n";
  const std::string csv_path = join(cfg.out_dir, "periodicity.csv");
  write_text(csv_path, csv);
  out.add_file(csv_path);

  out.summary()["metrics"] = {{"return_error", ret},
                              {"t_final", final.time},
                              {"n_modes", cfg.n_modes},
                              {"dt", evo.dt}};
  return out.finish();
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "simulate") return cmd_simulate(cfg);
  if (cfg.experiment == "converge") return cmd_converge(cfg);
  if (cfg.experiment == "hbar_sweep") return cmd_hbar_sweep(cfg);
  if (cfg.experiment == "periodicity") return cmd_periodicity(cfg);
  throw std::invalid_argument("run_experiment: unknown experiment '" + cfg.experiment + "'");
}

} // namespace weylherm
