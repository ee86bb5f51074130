#include "dgama/consensus.hpp"

#include <cmath>

#include "dgama/model.hpp"

namespace dgama {

std::vector<double> build_chi(
    int p, const std::vector<std::pair<int, double>>& own_data,
    const std::vector<std::vector<std::pair<int, double>>>& neighbor_data) {
  std::vector<double> chi(static_cast<std::size_t>(p), 0.0);
  std::vector<std::uint8_t> have(static_cast<std::size_t>(p), 0);

  auto absorb = [&](const std::vector<std::pair<int, double>>& src) {
    for (auto [j, v] : src) {
      if (j < 0 || j >= p)
        throw DimensionMismatch("build_chi: variable index out of range");
      if (have[j]) {
        if (chi[j] != v)
          throw InconsistentData("build_chi: sources disagree on a shared variable");
        continue;
      }
      have[j] = 1;
      chi[j] = v;
    }
  };

  absorb(own_data);
  for (const auto& src : neighbor_data) absorb(src);
  return chi;
}

SymMatrix local_cov_update(const AgentState& agent, const SymMatrix& prev_final,
                           int t) {
  const int p = prev_final.dim();
  SymMatrix out(p);
  const double tm1 = static_cast<double>(t - 1);
  const double td = static_cast<double>(t);
  for (int l = 0; l < p; ++l) {
    for (int m = l; m < p; ++m) {
      // The mask keeps the expression identical to the centralized recursion
      // on observable entries, bit for bit.
      double masked_prev =
          (agent.mask[l] && agent.mask[m]) ? prev_final(l, m) : 0.0;
      out.set(l, m, (tm1 * masked_prev + agent.chi[l] * agent.chi[m]) / td);
    }
  }
  return out;
}

namespace {

double neighborhood_average(const std::vector<const SymMatrix*>& nbhd, int l,
                            int m) {
  double sum = 0.0;
  for (const SymMatrix* s : nbhd) sum += (*s)(l, m);
  return sum / static_cast<double>(nbhd.size());
}

}  // namespace

SymMatrix fuse_first_round(const AgentState& agent, const SymMatrix& s_local,
                           const std::vector<const SymMatrix*>& nbhd_prev) {
  const int p = s_local.dim();
  for (const SymMatrix* s : nbhd_prev)
    if (s->dim() != p)
      throw DimensionMismatch("fuse_first_round: neighbor matrix dimension differs");

  SymMatrix out(p);
  for (int l = 0; l < p; ++l)
    for (int m = l; m < p; ++m)
      out.set(l, m, (agent.mask[l] && agent.mask[m])
                        ? s_local(l, m)
                        : neighborhood_average(nbhd_prev, l, m));
  return out;
}

SymMatrix fuse_round(const AgentState& agent, const SymMatrix& own_prev,
                     const std::vector<const SymMatrix*>& nbhd_prev) {
  const int p = own_prev.dim();
  for (const SymMatrix* s : nbhd_prev)
    if (s->dim() != p)
      throw DimensionMismatch("fuse_round: neighbor matrix dimension differs");

  SymMatrix out(p);
  for (int l = 0; l < p; ++l)
    for (int m = l; m < p; ++m)
      out.set(l, m, (agent.mask[l] && agent.mask[m])
                        ? own_prev(l, m)
                        : neighborhood_average(nbhd_prev, l, m));
  return out;
}

void com(const Topology& topo, std::vector<AgentState>& agents,
         const std::vector<double>& x_t, RoundBuffer& buf) {
  const int n = topo.n;
  if (static_cast<int>(x_t.size()) != topo.p)
    throw DimensionMismatch("com: sample dimension differs from p");

  const int w = buf.w + 1;
  std::vector<SymMatrix> next(static_cast<std::size_t>(n));

  if (w == 1) {
    // Data exchange: each agent packages its own measured variables.
    std::vector<std::vector<std::pair<int, double>>> messages(n);
    for (int i = 0; i < n; ++i)
      for (int v : topo.observed[i]) messages[i].emplace_back(v, x_t[v]);

    for (int i = 0; i < n; ++i) {
      std::vector<std::vector<std::pair<int, double>>> from_neighbors;
      for (int j : neighbors(topo, i)) from_neighbors.push_back(messages[j]);
      agents[i].chi = build_chi(topo.p, messages[i], from_neighbors);
      agents[i].s_local = local_cov_update(agents[i], buf.mats[i], buf.t);

      std::vector<const SymMatrix*> nbhd;
      for (int j : closed_neighborhood(topo, i)) nbhd.push_back(&buf.mats[j]);
      next[i] = fuse_first_round(agents[i], agents[i].s_local, nbhd);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      std::vector<const SymMatrix*> nbhd;
      for (int j : closed_neighborhood(topo, i)) nbhd.push_back(&buf.mats[j]);
      next[i] = fuse_round(agents[i], buf.mats[i], nbhd);
    }
  }

  buf.mats = std::move(next);
  buf.w = w;
  for (int i = 0; i < n; ++i) agents[i].s_est = buf.mats[i];
}

std::vector<AgentState> make_agents(const Topology& topo) {
  std::vector<AgentState> agents(static_cast<std::size_t>(topo.n));
  for (int i = 0; i < topo.n; ++i) {
    agents[i].id = i;
    agents[i].mask = observability_mask(topo, i);
    agents[i].s_local = SymMatrix(topo.p);
    agents[i].s_est = SymMatrix(topo.p);
    agents[i].chi.assign(static_cast<std::size_t>(topo.p), 0.0);
  }
  return agents;
}

ProbeHistory frozen_data_probe(const Topology& topo, int warmup, int rounds,
                               std::uint64_t seed, double edge_prob) {
  GroundTruth gt = gen_er_precision(topo.p, edge_prob, seed);
  DataStream stream = sample_gaussian(gt, warmup + 1, seed + 1);

  std::vector<AgentState> agents = make_agents(topo);
  RoundBuffer buf;
  buf.mats.assign(static_cast<std::size_t>(topo.n), SymMatrix(topo.p));
  OnlineCovariance cent(topo.p);

  for (int t = 1; t <= warmup; ++t) {
    cent = online_cov_update(cent, stream.samples[t - 1]);
    buf.t = t;
    buf.w = 0;
    com(topo, agents, stream.samples[t - 1], buf);
  }

  const int t_star = warmup + 1;
  cent = online_cov_update(cent, stream.samples[t_star - 1]);

  ProbeHistory hist;
  hist.t_star = t_star;
  hist.n = topo.n;
  hist.p = topo.p;
  for (int i = 0; i < topo.n; ++i)
    hist.s0_err.push_back(frob_dist(buf.mats[i], cent.s));

  buf.t = t_star;
  buf.w = 0;
  for (int w = 1; w <= rounds; ++w) {
    com(topo, agents, stream.samples[t_star - 1], buf);
    for (int i = 0; i < topo.n; ++i) {
      ProbeRow row;
      row.w = w;
      row.agent = i;
      row.err_t = frob_dist(buf.mats[i], cent.s);
      row.err_star = frob_dist(buf.mats[i], gt.covariance_true);
      hist.rows.push_back(row);
    }
  }
  return hist;
}

}  // namespace dgama
