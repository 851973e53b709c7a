#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "weylherm/diagnostics.hpp"
#include "weylherm/experiments.hpp"

using namespace weylherm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("weylherm_exp_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig tiny_config(const std::string& experiment, const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.grid.n_points = 128;
  cfg.grid.scheme = DerivScheme::spectral_fourier;
  cfg.n_modes = 10;
  cfg.evo.dt = 2e-3;
  cfg.evo.t_final = 0.3;
  cfg.evo.snapshot_every = 50;
  cfg.out_dir = out_dir;
  cfg.mode_list = {4, 6, 8};
  cfg.reference_modes = 20;
  cfg.hbar_list = {0.4, 0.2, 0.1};
  cfg.sweep_t_final = 0.3;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::map<std::string, std::string>> read_csv(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  std::vector<std::string> cols;
  {
    std::stringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::map<std::string, std::string> row;
    for (const auto& c : cols) {
      std::getline(ls, cell, ',');
      row[c] = cell;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace

TEST_CASE("simulate: diagnostics CSV columns, conservation, determinism") {
  TempDir dir;
  auto cfg = tiny_config("simulate", (dir.path / "a").string());
  cfg.formats = {"csv", "snapshot"};
  cfg.evo.scheme = TimeScheme::implicit_midpoint;
  cfg.nm_max = 1;

  auto artifacts = cmd_simulate(cfg);
  const std::string csv_path = (dir.path / "a/diagnostics.csv").string();
  auto rows = read_csv(csv_path);
  REQUIRE(!rows.empty());
  CHECK(rows.front().count("l2_norm") == 1);
  CHECK(rows.front().count("n1") == 1);

  const double l2_first = std::stod(rows.front().at("l2_norm"));
  const double l2_last = std::stod(rows.back().at("l2_norm"));
  CHECK(std::abs(l2_last - l2_first) <= 1e-10 * l2_first);
  CHECK(std::stod(rows.front().at("trace_re")) == doctest::Approx(1.0).epsilon(1e-6));

  // snapshot written and loadable
  SnapshotInfo info;
  auto final = read_snapshot((dir.path / "a/final_state.snap").string(), &info);
  CHECK(final.time == doctest::Approx(0.3));
  CHECK(info.hbar == cfg.evo.hbar);

  // byte-identical rerun into a fresh directory
  cfg.out_dir = (dir.path / "b").string();
  cmd_simulate(cfg);
  CHECK(slurp(csv_path) == slurp((dir.path / "b/diagnostics.csv").string()));

  // t_final = 0: a single row with trace ~ 1
  cfg.out_dir = (dir.path / "c").string();
  cfg.evo.t_final = 0.0;
  cmd_simulate(cfg);
  auto single = read_csv((dir.path / "c/diagnostics.csv").string());
  CHECK(single.size() == 1);
  CHECK(std::stod(single.front().at("trace_re")) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simulate: the semiclassical model ignores hbar") {
  TempDir dir;
  auto cfg = tiny_config("simulate", (dir.path / "h1").string());
  cfg.evo.model = Model::semiclassical;
  cfg.evo.hbar = 0.1;
  cmd_simulate(cfg);
  cfg.out_dir = (dir.path / "h2").string();
  cfg.evo.hbar = 0.5;
  cmd_simulate(cfg);
  CHECK(slurp((dir.path / "h1/diagnostics.csv").string()) ==
        slurp((dir.path / "h2/diagnostics.csv").string()));
}

TEST_CASE("converge: decreasing errors, blank first order, cache reuse") {
  TempDir dir;
  auto cfg = tiny_config("converge", (dir.path / "c").string());

  auto artifacts = cmd_converge(cfg);
  auto rows = read_csv((dir.path / "c/converge.csv").string());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].at("order").empty()); // mirrors the table's X placeholder
  CHECK(!rows[1].at("order").empty());

  double prev = 1e300;
  for (auto& r : rows) {
    const double e = std::stod(r.at("error"));
    CHECK(e < prev);
    prev = e;
  }

  // second invocation reuses the cached reference and reproduces the table
  const std::string before = slurp((dir.path / "c/converge.csv").string());
  cmd_converge(cfg);
  CHECK(slurp((dir.path / "c/converge.csv").string()) == before);
  const std::string summary = slurp((dir.path / "c/converge_summary.json").string());
  CHECK(summary.find("\"reference_cache_reused\": true") != std::string::npos);

  // changing an upstream knob must not reuse the old reference
  cfg.evo.dt = 1e-3;
  auto artifacts2 = cmd_converge(cfg);
  const std::string summary2 = slurp((dir.path / "c/converge_summary.json").string());
  CHECK(summary2.find("\"reference_cache_reused\": false") != std::string::npos);
}

TEST_CASE("hbar sweep: quartic slope near two, harmonic differences vanish") {
  TempDir dir;
  auto cfg = tiny_config("hbar_sweep", (dir.path / "s").string());
  cfg.n_modes = 16;
  cmd_hbar_sweep(cfg);

  auto rows = read_csv((dir.path / "s/hbar_sweep.csv").string());
  REQUIRE(rows.size() == 3);
  const double e04 = std::stod(rows[0].at("error"));
  const double e02 = std::stod(rows[1].at("error"));
  const double e01 = std::stod(rows[2].at("error"));
  CHECK(e04 / e02 == doctest::Approx(4.0).epsilon(0.2)); // hbar^2 scaling
  CHECK(e02 / e01 == doctest::Approx(4.0).epsilon(0.2));

  const std::string summary = slurp((dir.path / "s/hbar_sweep_summary.json").string());
  const auto pos = summary.find("\"loglog_slope\": ");
  REQUIRE(pos != std::string::npos);
  const double slope = std::stod(summary.substr(pos + 16));
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);

  // harmonic: the two models are the same system
  cfg.potential_kind = "harmonic";
  cfg.out_dir = (dir.path / "sh").string();
  cmd_hbar_sweep(cfg);
  for (auto& r : read_csv((dir.path / "sh/hbar_sweep.csv").string()))
    CHECK(std::stod(r.at("error")) <= 1e-12);
}

TEST_CASE("periodicity: harmonic return error and model gate") {
  TempDir dir;
  auto cfg = tiny_config("periodicity", (dir.path / "p").string());
  cfg.potential_kind = "harmonic";
  cfg.n_modes = 16;
  cfg.evo.scheme = TimeScheme::implicit_midpoint;
  cfg.evo.dt = 2e-3;
  cmd_periodicity(cfg);
  auto rows = read_csv((dir.path / "p/periodicity.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(std::stod(rows[0].at("t_final")) == doctest::Approx(2.0 * kPi));
  CHECK(std::stod(rows[0].at("return_error")) < 5e-3);

  cfg.potential_kind = "quartic";
  CHECK_THROWS_AS(cmd_periodicity(cfg), std::invalid_argument);
}

TEST_CASE("every emitted file is listed in the summary with its checksum") {
  TempDir dir;
  auto cfg = tiny_config("simulate", (dir.path / "files").string());
  cfg.formats = {"csv", "snapshot"};
  auto artifacts = cmd_simulate(cfg);
  REQUIRE(artifacts.files.size() >= 3); // csv, snapshot, summary
  for (const auto& f : artifacts.files) {
    CAPTURE(f.path);
    CHECK(fs::exists(f.path));
    CHECK(f.checksum == hex64(fnv1a_file(f.path)));
  }
  CHECK(artifacts.summary_path.ends_with("simulate_summary.json"));
}
