#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylherm/evolution.hpp"
#include "weylherm/grid.hpp"
#include "weylherm/potential.hpp"

namespace weylherm {

// Resolved experiment configuration. File format: UTF-8 lines of
// `section.key = value`, `#` comments, comma-separated lists. Unknown keys
// are errors.
struct ExperimentConfig {
  std::string experiment = "simulate"; // simulate | converge | hbar_sweep | periodicity

  std::string potential_kind = "quartic"; // harmonic | quartic
  double chi = 0.5;

  GridSpec grid; // defaults: [-4, 4), 512 nodes, central4

  int n_modes = 40;
  int quad_order = 0; // 0: module defaults

  EvolutionConfig evo;

  std::string initial_kind = "coherent_state";
  double sigma_x = 0.6;

  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv"}; // csv, snapshot
  int nm_max = 0;                             // 0..3 extra CSV columns n1..n3

  std::vector<int> mode_list = {8, 16, 24, 32, 40};
  int reference_modes = 100;

  std::vector<double> hbar_list = {0.4, 0.2, 0.1};
  double sweep_t_final = 1.0;

  PotentialModel make_potential() const;
  InitialData make_initial() const;
  void validate() const; // throws std::invalid_argument naming the offending key

  // deterministic full dump; the checksum keys caches and summaries
  std::string canonical() const;
  std::uint64_t checksum() const;
  // the subset a reference run depends on (potential, grid, reference basis,
  // evolution, initial data)
  std::string upstream_canonical() const;
  std::uint64_t upstream_checksum() const;
};

// experiment_override, when non-empty, must match any experiment.kind in the
// file; full_scale swaps in the published benchmark defaults for converge
// (explicit file keys still win).
ExperimentConfig parse_config(const std::string& path, const std::string& experiment_override = "",
                              bool full_scale = false);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a_file(const std::string& path);
std::string hex64(std::uint64_t value);

} // namespace weylherm
