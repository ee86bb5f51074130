#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "dgama/config.hpp"
#include "dgama/consensus.hpp"
#include "dgama/model.hpp"
#include "dgama/network.hpp"

namespace dgama {

struct SimulationParams {
  int K = 1;
  int W = 1;
  int t0 = 10;
  int T = 40;
  double lambda = 0.15;
  ZetaPolicy zeta;
  bool zeta_auto_constant = false;  // constant mode, value picked at t0
  double gamma_star_tol = 1e-10;
  bool record_matrices = false;
  bool trace_rounds = false;
};

struct AgentStepLog {
  double gamma_err = std::numeric_limits<double>::quiet_NaN();
  double s_err_star = std::numeric_limits<double>::quiet_NaN();
  double s_err_t = std::numeric_limits<double>::quiet_NaN();
  double zeta = std::numeric_limits<double>::quiet_NaN();
  double lambda_min_gamma = std::numeric_limits<double>::quiet_NaN();
  double gamma_dist_cent = std::numeric_limits<double>::quiet_NaN();
  double s_eig_min = std::numeric_limits<double>::quiet_NaN();
  double s_eig_max = std::numeric_limits<double>::quiet_NaN();
};

struct TraceRow {
  int t = 0;
  int w = 0;
  int agent = 0;
  double err_t = 0.0;
  double err_star = 0.0;
};

struct StepLog {
  int t = 0;
  std::vector<AgentStepLog> agent;
  double cent_gamma_err = std::numeric_limits<double>::quiet_NaN();
  double cent_s_err_star = std::numeric_limits<double>::quiet_NaN();
  double cent_e_norm = std::numeric_limits<double>::quiet_NaN();
  double max_pair_gamma_dist = std::numeric_limits<double>::quiet_NaN();
  // Filled only when record_matrices is set.
  std::vector<SymMatrix> gamma_snapshot;
  std::vector<SymMatrix> s_snapshot;
  SymMatrix cent_gamma_snapshot;
};

/// Everything the bound evaluators need from a finished run.
struct RunHistory {
  int n = 0, p = 0, T = 0, t0 = 10, K = 1, W = 1;
  double lambda = 0.15;
  bool constant_zeta = false;
  double zeta_value = std::numeric_limits<double>::quiet_NaN();
  bool has_ground_truth = false;

  double sigma = std::numeric_limits<double>::quiet_NaN();
  double c = std::numeric_limits<double>::quiet_NaN();

  std::vector<StepLog> steps;  // index t-1
  std::vector<TraceRow> trace;

  // Extremes for the theory boxes: eigenvalues of every covariance estimate
  // (all agents, all rounds, t >= t0) and of every dual iterate plus the
  // oracle fixed point.
  double s_eig_inf = std::numeric_limits<double>::infinity();
  double s_eig_sup = -std::numeric_limits<double>::infinity();
  double s_star_eig_min = std::numeric_limits<double>::quiet_NaN();
  double s_star_eig_max = std::numeric_limits<double>::quiet_NaN();
  double s_star_diag_max = std::numeric_limits<double>::quiet_NaN();
  EigBox gamma_box;

  double max_dual_feasibility_excess = 0.0;
  bool lambda_validity_warning = false;
};

struct SimulationState {
  Topology topo;
  std::vector<AgentState> agents;
  RoundBuffer buffer;
  std::optional<GroundTruth> gt;
  DataStream stream;
  SimulationParams params;
  OnlineCovariance cent_cov;
  SolverState cent_solver;
  int t = 0;
  RunHistory history;
};

/// Assembles a simulation from parts. Checks joint observability before any
/// work and fills sigma/c from the consensus-rate analysis.
SimulationState init_simulation(const Topology& topo,
                                std::optional<GroundTruth> gt, DataStream stream,
                                const SimulationParams& params);

/// One time step: W COM rounds, then the solver phase (initialization at t0,
/// K warm-started dual updates afterwards), then metric logging.
void step(SimulationState& sim);

/// Full trajectory for a config: builds or loads the topology, ground truth
/// and stream, computes the oracle fixed point, and runs T steps.
SimulationState run(const ExperimentConfig& cfg);

/// run() without the config plumbing; used by sweeps and tests that inject
/// their own parts.
SimulationState run_with(const Topology& topo, std::optional<GroundTruth> gt,
                         DataStream stream, const SimulationParams& params);

}  // namespace dgama
