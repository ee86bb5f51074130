#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgama/analysis.hpp"
#include "dgama/config.hpp"
#include "dgama/simulation.hpp"

namespace dgama {

/// Runs one experiment and writes trajectory.csv, bounds.csv, summary.csv,
/// the stream and (when generated) the ground-truth matrices into cfg.out.
/// Outputs are byte-identical across runs of the same config.
void run_experiment(const ExperimentConfig& cfg);

/// Replays an exported sample stream. Errors if the column count differs
/// from `expected_p`.
DataStream replay_stream(const std::string& path, int expected_p);

struct SweepCell {
  int K = 0;
  int W = 0;
  std::uint64_t seed = 0;
  double mean_final_gamma_err = 0.0;
  double mean_t11_gamma_err = 0.0;
  bool improved_all_agents = false;  // every agent's error at T below its t0+1 value
  double mean_gap_t20_40 = 0.0;      // mean ||Gamma_i - Gamma_cent|| over t in [20, 40]
  double cent_final_gamma_err = 0.0;
};

/// Grid sweep over (K, W) pairs and `num_seeds` consecutive seeds starting at
/// base.seed. Ground truth, oracle fixed point and stream are shared per
/// seed across the grid.
std::vector<SweepCell> run_sweep(const ExperimentConfig& base,
                                 const std::vector<int>& Ks,
                                 const std::vector<int>& Ws, int num_seeds);

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells);

struct ProbeOptions {
  int warmup = 25;
  int rounds = 50;
  std::uint64_t seed = 1;
};

/// Frozen-data consensus probe: runs the probe, checks the consensus-rate
/// bound with the topology's measured (c, sigma), and writes probe.csv and
/// probe_bounds.csv into out_dir.
BoundReport probe_consensus(const Topology& topo, const ProbeOptions& opts,
                            const std::string& out_dir);

/// Process exit code for an error class: 2 config, 3 observability,
/// 4 positive-definiteness, 5 convergence, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace dgama
