#include "dgama/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dgama {

namespace {

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

Topology parse_topology(const std::string& text, const std::string& source_name) {
  Topology topo;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_agents = false;
  bool have_vars = false;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, std::vector<int>>> observe_lines;

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    if (key == "agents") {
      if (!(ls >> topo.n) || topo.n < 1)
        throw ParseError(where(source_name, lineno) + ": expected a positive agent count");
      have_agents = true;
    } else if (key == "vars") {
      if (!(ls >> topo.p) || topo.p < 1)
        throw ParseError(where(source_name, lineno) + ": expected a positive variable count");
      have_vars = true;
    } else if (key == "edge") {
      int a, b;
      if (!(ls >> a >> b))
        throw ParseError(where(source_name, lineno) + ": expected 'edge <agent> <agent>'");
      edges.emplace_back(a, b);
    } else if (key == "observe") {
      int agent;
      if (!(ls >> agent))
        throw ParseError(where(source_name, lineno) + ": expected 'observe <agent> <var>...'");
      std::vector<int> vars;
      int v;
      while (ls >> v) vars.push_back(v);
      observe_lines.emplace_back(agent, std::move(vars));
    } else {
      throw ParseError(where(source_name, lineno) + ": unknown directive '" + key + "'");
    }
  }

  if (!have_agents) throw ParseError(source_name + ": missing 'agents' line");
  if (!have_vars) throw ParseError(source_name + ": missing 'vars' line");

  topo.adj.assign(topo.n, std::vector<std::uint8_t>(topo.n, 0));
  topo.observed.assign(topo.n, {});
  for (auto [a, b] : edges) {
    if (a < 0 || a >= topo.n || b < 0 || b >= topo.n || a == b)
      throw ParseError(source_name + ": edge endpoints out of range or self-loop");
    topo.adj[a][b] = 1;
    topo.adj[b][a] = 1;
  }
  for (auto& [agent, vars] : observe_lines) {
    if (agent < 0 || agent >= topo.n)
      throw ParseError(source_name + ": observe line names an unknown agent");
    for (int v : vars) {
      if (v < 0 || v >= topo.p)
        throw ParseError(source_name + ": observed variable index out of range");
      topo.observed[agent].push_back(v);
    }
  }
  for (auto& vars : topo.observed) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }

  validate_topology(topo);
  return topo;
}

Topology load_topology(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_topology(buf.str(), path);
}

bool is_connected(const Topology& topo) {
  if (topo.n == 0) return false;
  std::vector<std::uint8_t> seen(topo.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < topo.n; ++u) {
      if (topo.adj[v][u] && !seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == topo.n;
}

void validate_topology(const Topology& topo) {
  if (topo.n < 1) throw ValidationError("topology: agent count must be positive");
  if (topo.p < 1) throw ValidationError("topology: variable count must be positive");
  if (static_cast<int>(topo.adj.size()) != topo.n)
    throw ValidationError("topology: adjacency row count differs from n");
  for (int i = 0; i < topo.n; ++i) {
    if (static_cast<int>(topo.adj[i].size()) != topo.n)
      throw ValidationError("topology: adjacency is not n-by-n");
    if (topo.adj[i][i] != 0)
      throw ValidationError("topology: adjacency diagonal must be zero");
    for (int j = 0; j < topo.n; ++j)
      if (topo.adj[i][j] != topo.adj[j][i])
        throw ValidationError("topology: adjacency must be symmetric");
  }
  if (static_cast<int>(topo.observed.size()) != topo.n)
    throw ValidationError("topology: observation list count differs from n");
  for (const auto& vars : topo.observed)
    for (int v : vars)
      if (v < 0 || v >= topo.p)
        throw ValidationError("topology: observed variable index out of range");
  if (!is_connected(topo))
    throw ValidationError("topology: communication graph must be connected");
}

std::vector<int> neighbors(const Topology& topo, int agent) {
  std::vector<int> out;
  for (int j = 0; j < topo.n; ++j)
    if (topo.adj[agent][j]) out.push_back(j);
  return out;
}

std::vector<int> closed_neighborhood(const Topology& topo, int agent) {
  std::vector<int> out;
  for (int j = 0; j < topo.n; ++j)
    if (j == agent || topo.adj[agent][j]) out.push_back(j);
  return out;
}

std::vector<int> observable_set(const Topology& topo, int agent) {
  std::set<int> vars(topo.observed[agent].begin(), topo.observed[agent].end());
  for (int j : neighbors(topo, agent))
    vars.insert(topo.observed[j].begin(), topo.observed[j].end());
  return {vars.begin(), vars.end()};
}

std::vector<std::uint8_t> observability_mask(const Topology& topo, int agent) {
  std::vector<std::uint8_t> mask(topo.p, 0);
  for (int v : observable_set(topo, agent)) mask[v] = 1;
  return mask;
}

int pair_index(int p, int l, int m) {
  if (l > m) std::swap(l, m);
  // Row-by-row packing of the upper triangle including the diagonal.
  return l * p - l * (l - 1) / 2 + (m - l);
}

ObservabilityReport check_joint_observability(const Topology& topo) {
  ObservabilityReport rep;
  rep.leaders.assign(static_cast<std::size_t>(topo.p) * (topo.p + 1) / 2, {});

  std::vector<std::vector<std::uint8_t>> masks;
  masks.reserve(topo.n);
  for (int i = 0; i < topo.n; ++i) masks.push_back(observability_mask(topo, i));

  rep.jointly_observable = true;
  for (int l = 0; l < topo.p; ++l) {
    for (int m = l; m < topo.p; ++m) {
      auto& leaders = rep.leaders[pair_index(topo.p, l, m)];
      for (int i = 0; i < topo.n; ++i)
        if (masks[i][l] && masks[i][m]) leaders.push_back(i);
      if (leaders.empty()) rep.jointly_observable = false;
    }
  }
  return rep;
}

PffBlock build_pff_partition(const Topology& topo, const std::vector<int>& leaders) {
  if (leaders.empty())
    throw NoLeader("build_pff: the leader set is empty");

  PffBlock block;
  block.leaders = leaders;
  std::sort(block.leaders.begin(), block.leaders.end());
  std::vector<std::uint8_t> is_leader(topo.n, 0);
  for (int i : block.leaders) is_leader[i] = 1;
  for (int i = 0; i < topo.n; ++i)
    if (!is_leader[i]) block.followers.push_back(i);

  const int nf = static_cast<int>(block.followers.size());
  block.p_ff = Matrix(nf, nf);
  for (int r = 0; r < nf; ++r) {
    int i = block.followers[r];
    std::vector<int> nbhd = closed_neighborhood(topo, i);
    double w = 1.0 / static_cast<double>(nbhd.size());
    for (int c = 0; c < nf; ++c) {
      int j = block.followers[c];
      if (j == i || topo.adj[i][j]) block.p_ff(r, c) = w;
    }
  }
  return block;
}

PffBlock build_pff(const Topology& topo, int l, int m) {
  std::vector<std::uint8_t> need_l(topo.n, 0);
  std::vector<int> leaders;
  for (int i = 0; i < topo.n; ++i) {
    auto mask = observability_mask(topo, i);
    if (mask[l] && mask[m]) leaders.push_back(i);
  }
  return build_pff_partition(topo, leaders);
}

std::vector<std::vector<double>> partition_probe(const Topology& topo,
                                                 const std::vector<int>& leaders,
                                                 int rounds) {
  std::vector<std::uint8_t> is_leader(topo.n, 0);
  for (int i : leaders) is_leader[i] = 1;

  std::vector<std::vector<double>> trace;
  trace.reserve(static_cast<std::size_t>(rounds));
  std::vector<double> v(topo.n, 0.0);
  for (int w = 1; w <= rounds; ++w) {
    std::vector<double> next(topo.n, 0.0);
    for (int i = 0; i < topo.n; ++i) {
      if (is_leader[i]) {
        next[i] = 1.0;
        continue;
      }
      std::vector<int> nbhd = closed_neighborhood(topo, i);
      double sum = 0.0;
      for (int j : nbhd) sum += v[j];
      next[i] = sum / static_cast<double>(nbhd.size());
    }
    v = std::move(next);
    trace.push_back(v);
  }
  return trace;
}

ObservabilityReport consensus_rate(const Topology& topo, int probe_rounds) {
  ObservabilityReport rep = check_joint_observability(topo);

  // Entries sharing a leader/follower partition share the averaging dynamics;
  // deduplicate before analyzing.
  std::set<std::vector<int>> partitions;
  for (const auto& leaders : rep.leaders) {
    if (leaders.empty())
      throw NoLeader("consensus_rate: some covariance entry has no observer");
    partitions.insert(leaders);
  }

  rep.sigma = 0.0;
  for (const auto& leaders : partitions) {
    PffBlock block = build_pff_partition(topo, leaders);
    if (block.followers.empty()) continue;
    rep.sigma = std::max(rep.sigma, spectral_radius(block.p_ff));
  }

  rep.c = 1.0;
  if (rep.sigma > 0.0) {
    for (const auto& leaders : partitions) {
      PffBlock block = build_pff_partition(topo, leaders);
      if (block.followers.empty()) continue;
      auto trace = partition_probe(topo, leaders, probe_rounds);
      double sig_w = 1.0;
      for (int w = 1; w <= probe_rounds; ++w) {
        sig_w *= rep.sigma;
        double max_err = 0.0;
        for (int i : block.followers)
          max_err = std::max(max_err, std::abs(trace[w - 1][i] - 1.0));
        // Initial follower errors are 1, so the per-agent ratio is the error
        // itself over sigma^w. Stop once the probe hits the floating-point
        // floor; ratios beyond that point are rounding noise.
        if (max_err <= 1e-13) break;
        rep.c = std::max(rep.c, max_err / sig_w);
      }
    }
  }
  return rep;
}

Topology random_topology(int n, int p, double extra_edge_prob, Rng& rng,
                         int max_tries) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Topology topo;
    topo.n = n;
    topo.p = p;
    topo.adj.assign(n, std::vector<std::uint8_t>(n, 0));
    topo.observed.assign(n, {});

    // Random spanning tree: attach each new vertex to a uniformly chosen
    // earlier one.
    for (int v = 1; v < n; ++v) {
      int u = static_cast<int>(rng.uniform01() * v);
      if (u >= v) u = v - 1;
      topo.adj[u][v] = topo.adj[v][u] = 1;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!topo.adj[i][j] && rng.bernoulli(extra_edge_prob))
          topo.adj[i][j] = topo.adj[j][i] = 1;

    for (int v = 0; v < p; ++v) {
      int owner = static_cast<int>(rng.uniform01() * n);
      if (owner >= n) owner = n - 1;
      topo.observed[owner].push_back(v);
      for (int i = 0; i < n; ++i)
        if (i != owner && rng.bernoulli(0.15)) topo.observed[i].push_back(v);
    }
    for (auto& vars : topo.observed) {
      std::sort(vars.begin(), vars.end());
      vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    }

    if (check_joint_observability(topo).jointly_observable) {
      validate_topology(topo);
      return topo;
    }
  }
  throw NonConvergence("random_topology: no jointly observable draw within the retry cap");
}

}  // namespace dgama
