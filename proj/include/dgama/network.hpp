#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgama/matrix.hpp"
#include "dgama/rng.hpp"

namespace dgama {

/// Agent communication graph plus per-agent directly-observed variables.
/// `adj` is an n-by-n symmetric 0/1 matrix with zero diagonal; `observed[i]`
/// lists the variable indices agent i measures itself (sorted).
struct Topology {
  int n = 0;
  int p = 0;
  std::vector<std::vector<std::uint8_t>> adj;
  std::vector<std::vector<int>> observed;
};

/// Reads the text format: `agents N`, `vars P`, `edge i j`, and cumulative
/// `observe agent var [var...]` lines; `#` starts a comment. Validates the
/// result (including connectivity).
Topology load_topology(const std::string& path);
Topology parse_topology(const std::string& text, const std::string& source_name);

/// Shape checks plus connectivity of the communication graph. Disconnected
/// graphs are rejected with ValidationError.
void validate_topology(const Topology& topo);
bool is_connected(const Topology& topo);

std::vector<int> neighbors(const Topology& topo, int agent);
/// Neighbors plus the agent itself, sorted.
std::vector<int> closed_neighborhood(const Topology& topo, int agent);

/// Variables agent can see directly or through one-hop neighbors, sorted.
std::vector<int> observable_set(const Topology& topo, int agent);
/// Same as observable_set, as a 0/1 indicator over all p variables.
std::vector<std::uint8_t> observability_mask(const Topology& topo, int agent);

/// Index of the unordered pair (l, m), l <= m, into a packed triangular
/// array of length p (p + 1) / 2.
int pair_index(int p, int l, int m);

struct ObservabilityReport {
  bool jointly_observable = false;
  /// Per covariance entry (packed by pair_index): agents observing it.
  std::vector<std::vector<int>> leaders;
  double sigma = 0.0;
  double c = 1.0;
};

ObservabilityReport check_joint_observability(const Topology& topo);

/// Follower averaging block for one leader/follower partition. Row i (a
/// follower) carries weight 1/|closed neighborhood| on each member of its
/// closed neighborhood; p_ff keeps the follower columns.
struct PffBlock {
  std::vector<int> leaders;
  std::vector<int> followers;
  Matrix p_ff;
};

PffBlock build_pff_partition(const Topology& topo, const std::vector<int>& leaders);
/// Partition derived from observability of covariance entry (l, m).
PffBlock build_pff(const Topology& topo, int l, int m);

/// Scalar consensus dynamics for one partition: every agent starts at 0,
/// leaders snap to the exact value 1 at round 1, followers average their
/// closed neighborhood's previous-round values. Returns the per-round agent
/// values for w = 1..rounds.
std::vector<std::vector<double>> partition_probe(const Topology& topo,
                                                 const std::vector<int>& leaders,
                                                 int rounds);

/// Fills sigma (max spectral radius over the distinct follower blocks) and
/// the empirical amplification constant c (max over partitions, probe rounds
/// and followers of |error| / sigma^w, floored at 1).
ObservabilityReport consensus_rate(const Topology& topo, int probe_rounds = 50);

/// Random connected topology: a random spanning tree plus extra edges with
/// probability `extra_edge_prob`; each variable is assigned to one random
/// agent and agents pick up further variables with probability 0.15.
/// Redraws until the result is jointly observable.
Topology random_topology(int n, int p, double extra_edge_prob, Rng& rng,
                         int max_tries = 1000);

}  // namespace dgama
