#pragma once

#include <string>
#include <vector>

#include "weylherm/config.hpp"

namespace weylherm {

struct EmittedFile {
  std::string path;
  std::string checksum; // FNV-1a 64 of the file contents, hex
};

struct RunArtifacts {
  std::vector<EmittedFile> files; // everything written, summary included
  std::string summary_path;       // JSON record with metrics and pass flags
};

RunArtifacts cmd_simulate(const ExperimentConfig& cfg);
RunArtifacts cmd_converge(const ExperimentConfig& cfg);
RunArtifacts cmd_hbar_sweep(const ExperimentConfig& cfg);
RunArtifacts cmd_periodicity(const ExperimentConfig& cfg);

// dispatch on cfg.experiment
RunArtifacts run_experiment(const ExperimentConfig& cfg);

} // namespace weylherm
