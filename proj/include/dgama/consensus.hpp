#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dgama/network.hpp"
#include "dgama/solver.hpp"

namespace dgama {

/// One agent's view of the world: its observability mask (own variables plus
/// one-hop neighbors'), the masked local covariance recursion, its current
/// covariance estimate, and its solver iterates.
struct AgentState {
  int id = 0;
  std::vector<std::uint8_t> mask;
  SymMatrix s_local;
  SymMatrix s_est;
  std::vector<double> chi;
  SolverState solver;
  bool solver_ready = false;
};

/// Synchronized round state: mats[i] holds agent i's estimate after round w
/// of time step t. At w == 0 the matrices are the previous step's final
/// round. All agents read one round and write the next, so sequential and
/// parallel execution produce identical results.
struct RoundBuffer {
  std::vector<SymMatrix> mats;
  int t = 0;
  int w = 0;
};

/// Merge the agent's own data with neighbor messages into the masked data
/// vector: chi[j] = x_j where some source provides variable j, 0 elsewhere.
/// Sources that disagree on a shared variable (bitwise) raise
/// InconsistentData.
std::vector<double> build_chi(
    int p, const std::vector<std::pair<int, double>>& own_data,
    const std::vector<std::vector<std::pair<int, double>>>& neighbor_data);

/// Masked covariance recursion
/// s_local = ((t-1) V S_prev V + chi chi^T) / t, where V keeps the entries
/// observable by the agent. Entries outside the observable block are zero.
SymMatrix local_cov_update(const AgentState& agent, const SymMatrix& prev_final,
                           int t);

/// First-round fusion: observable entries come from the local recursion,
/// unobservable entries are the closed-neighborhood average of the previous
/// step's final estimates. `nbhd_prev` must be ordered by agent index and
/// include the agent's own matrix.
SymMatrix fuse_first_round(const AgentState& agent, const SymMatrix& s_local,
                           const std::vector<const SymMatrix*>& nbhd_prev);

/// Later-round fusion: observable entries are frozen from the agent's own
/// previous round; unobservable entries average the closed neighborhood's
/// previous-round estimates.
SymMatrix fuse_round(const AgentState& agent, const SymMatrix& own_prev,
                     const std::vector<const SymMatrix*>& nbhd_prev);

/// One synchronized COM round for every agent. Round 1 exchanges raw data,
/// runs the local recursion and first-round fusion; later rounds fuse
/// estimates only. Advances buf.w by one.
void com(const Topology& topo, std::vector<AgentState>& agents,
         const std::vector<double>& x_t, RoundBuffer& buf);

std::vector<AgentState> make_agents(const Topology& topo);

struct ProbeRow {
  int w = 0;
  int agent = 0;
  double err_t = 0.0;
  double err_star = 0.0;
};

/// Frozen-data probe log: per-agent errors against the centralized sample
/// covariance S_t at a fixed time step, over consensus rounds w = 1..W.
struct ProbeHistory {
  int t_star = 0;
  int n = 0;
  int p = 0;
  std::vector<double> s0_err;  // per-agent ||S_{i,t}^0 - S_t||_F
  std::vector<ProbeRow> rows;
};

/// Runs `warmup` ordinary time steps (one round each), then holds the data
/// fixed at step warmup+1 and fuses for `rounds` rounds, logging errors
/// against the centralized covariance.
ProbeHistory frozen_data_probe(const Topology& topo, int warmup, int rounds,
                               std::uint64_t seed, double edge_prob = 0.4);

}  // namespace dgama
