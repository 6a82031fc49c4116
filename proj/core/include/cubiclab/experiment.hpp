#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubiclab/io.hpp"
#include "cubiclab/kernels.hpp"
#include "cubiclab/lattice_enum.hpp"

namespace cubiclab {

struct ExperimentConfig {
  std::string form_path;
  std::optional<std::string> linsys_path;
  std::optional<std::string> decomp_path;
  std::vector<double> tau;
  double eta = 0.05;
  std::vector<double> P_grid;
  std::uint64_t seed = 1;
  std::int64_t series_Q = 20;
  std::vector<double> schedule{4, 8, 16, 32};
  std::size_t samples = 1'000'000;
  EnumOptions enumeration{Strategy::meet_in_middle, 1.0e9, 5.0e10};
  TPolicy kernel_policy = TPolicy::log;
  double kernel_theta = 0.01;
  int h_height = 2;
  bool timings = false;
  Json source;  // the document as read, echoed into reports
};

/// Schema and invariant diagnostics for a config document; paths are
/// resolved relative to `base_dir`. Empty means clean.
std::vector<std::string> validate_config_json(const Json& doc, const std::string& base_dir);
/// Reads the file and validates it, including the referenced documents.
std::vector<std::string> validate_config(const std::string& path);

/// Throws ConfigError with all diagnostics when the config is not clean.
ExperimentConfig load_config(const std::string& path);

/// Hypothesis status of a certified window against "h > threshold".
std::string threshold_status(int lower, int upper, int threshold);

/// N_w(P) against (2 eta)^r S chi_w P^{n-r-3} for every P in the grid, with
/// the h window, hypothesis flags, truncated singular series and the
/// tent-function estimate of chi_w. Deterministic unless timings are on.
Json run_asymptotic_experiment(const ExperimentConfig& cfg);

}  // namespace cubiclab
