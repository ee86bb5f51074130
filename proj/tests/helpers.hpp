#pragma once

#include <string>
#include <vector>

#include "dgama/matrix.hpp"
#include "dgama/network.hpp"
#include "dgama/rng.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(DGAMA_SOURCE_DIR) + "/data/" + name;
}

inline dgama::SymMatrix random_sym(int p, dgama::Rng& rng, double scale = 1.0) {
  dgama::SymMatrix m(p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) m.set(i, j, scale * rng.uniform(-1.0, 1.0));
  return m;
}

// B B^T + 0.1 I with B random: symmetric positive definite by construction.
inline dgama::SymMatrix random_spd(int p, dgama::Rng& rng) {
  std::vector<std::vector<double>> b(p, std::vector<double>(p));
  for (auto& row : b)
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  dgama::SymMatrix m(p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k < p; ++k) s += b[i][k] * b[j][k];
      m.set(i, j, i == j ? s + 0.1 : s);
    }
  }
  return m;
}

inline dgama::SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  dgama::SymMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) m.set(i, j, rows[i][j]);
  return m;
}

// Three agents on a path 0-1-2, all observing everything. Used with explicit
// leader/follower partitions.
inline dgama::Topology path3_topology() {
  dgama::Topology topo;
  topo.n = 3;
  topo.p = 2;
  topo.adj = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  topo.observed = {{0, 1}, {0, 1}, {0, 1}};
  return topo;
}

inline dgama::Topology fig1_topology() {
  return dgama::load_topology(data_path("fig1.topology"));
}

// Single fully-observing agent; the degenerate network.
inline dgama::Topology solo_topology(int p) {
  dgama::Topology topo;
  topo.n = 1;
  topo.p = p;
  topo.adj = {{0}};
  topo.observed.resize(1);
  for (int v = 0; v < p; ++v) topo.observed[0].push_back(v);
  return topo;
}

inline bool bits_equal(const dgama::SymMatrix& a, const dgama::SymMatrix& b) {
  if (a.dim() != b.dim()) return false;
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) {
    // memcmp-level comparison: distinguish 0.0 from -0.0, NaNs never pass
    if (!(x[k] == y[k]) || std::signbit(x[k]) != std::signbit(y[k])) return false;
  }
  return true;
}

}  // namespace testutil
