#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dgama {

/// Experiment description, loadable from a `key = value` text file. Only
/// p, n, T and seed are required; everything else defaults to the reference
/// configuration (lambda = 0.15, t0 = 10, K = 1, W = 1, delta = 0.25).
struct ExperimentConfig {
  int p = 0;
  int n = 0;
  int T = 0;
  std::uint64_t seed = 0;

  int K = 1;
  int W = 1;
  int t0 = 10;
  double lambda = 0.15;
  double edge_prob = 0.4;
  double delta = 0.25;

  /// "adaptive" or "constant". In constant mode `zeta_value` <= 0 means the
  /// value is picked automatically at t0.
  std::string zeta_mode = "adaptive";
  double zeta_value = 0.0;

  std::string topology = "generate";  // path or "generate"
  std::string stream = "generate";    // path or "generate"
  std::string out = ".";

  /// "auto", "none", or comma list of {theorem1, eq18, corollary2}.
  std::string bounds = "auto";

  double gamma_star_tol = 1e-10;
  bool trace_rounds = false;
  bool plot_script = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& source_name);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);

/// Bound names selected by the config, resolving "auto" against the zeta
/// mode (theorem1 needs a constant step size).
std::vector<std::string> selected_bounds(const ExperimentConfig& cfg);

}  // namespace dgama
