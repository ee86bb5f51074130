#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dgama/analysis.hpp"
#include "dgama/simulation.hpp"
#include "helpers.hpp"

using namespace dgama;

namespace {

SimulationParams paper_params(int K = 1, int W = 1) {
  SimulationParams prm;
  prm.K = K;
  prm.W = W;
  prm.t0 = 10;
  prm.T = 40;
  prm.lambda = 0.15;
  return prm;
}

GroundTruth make_gt(int p, std::uint64_t seed, double lambda, double tol = 1e-10) {
  GroundTruth gt = gen_er_precision(p, 0.4, seed);
  gt.gamma_star = compute_gamma_star(gt.covariance_true, lambda, tol);
  return gt;
}

}  // namespace

TEST_CASE("a single fully-observing agent is bit-identical to standalone OGAMA") {
  Topology topo = testutil::solo_topology(5);
  GroundTruth gt = make_gt(5, 7, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 8);

  SimulationParams prm = paper_params();
  prm.record_matrices = true;
  SimulationState sim = run_with(topo, gt, stream, prm);

  OnlineCovariance cov(5);
  SolverState st;
  for (int t = 1; t <= 40; ++t) {
    cov = online_cov_update(cov, stream.samples[t - 1]);
    if (t >= prm.t0) st = ogama_step(st, cov.s, t, prm.K, prm.t0, prm.lambda);
    const StepLog& log = sim.history.steps[t - 1];
    CHECK(testutil::bits_equal(log.s_snapshot[0], cov.s));
    if (t >= prm.t0) {
      CHECK(testutil::bits_equal(log.gamma_snapshot[0], st.gamma));
      CHECK(testutil::bits_equal(log.cent_gamma_snapshot, st.gamma));
    }
  }
}

TEST_CASE("simulation rejects unobservable configurations before running") {
  Topology topo;
  topo.n = 2;
  topo.p = 3;
  topo.adj = {{0, 1}, {1, 0}};
  topo.observed = {{0}, {1}};  // variable 2 unobserved
  GroundTruth gt = make_gt(3, 3, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 4);
  CHECK_THROWS_AS(run_with(topo, gt, stream, paper_params()), NotJointlyObservable);
}

TEST_CASE("K = 0 leaves the dual variable frozen after t0") {
  Topology topo = testutil::fig1_topology();
  GroundTruth gt = make_gt(5, 7, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 8);

  SimulationParams prm = paper_params(0, 1);
  prm.record_matrices = true;
  SimulationState sim = run_with(topo, gt, stream, prm);

  const auto& at_t0 = sim.history.steps[prm.t0 - 1].gamma_snapshot;
  for (int t = prm.t0; t <= 40; ++t) {
    const auto& snap = sim.history.steps[t - 1].gamma_snapshot;
    for (int i = 0; i < topo.n; ++i) CHECK(testutil::bits_equal(snap[i], at_t0[i]));
  }
}

TEST_CASE("paper-scale run: errors decrease and agents agree") {
  Topology topo = testutil::fig1_topology();
  GroundTruth gt = make_gt(5, 7, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 8);

  SimulationState sim = run_with(topo, gt, stream, paper_params());
  const RunHistory& h = sim.history;

  const StepLog& first = h.steps[10];  // t = 11
  const StepLog& last = h.steps.back();
  for (int i = 0; i < topo.n; ++i)
    CHECK(last.agent[i].gamma_err < first.agent[i].gamma_err);

  // agreement trend: last-quarter mean pairwise gap below first-quarter mean
  std::vector<double> gaps;
  for (const StepLog& s : h.steps)
    if (s.t >= h.t0) gaps.push_back(s.max_pair_gamma_dist);
  std::size_t q = gaps.size() / 4;
  REQUIRE(q > 0);
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    head += gaps[i];
    tail += gaps[gaps.size() - 1 - i];
  }
  CHECK(tail < head);

  CHECK(h.max_dual_feasibility_excess == 0.0);
}

TEST_CASE("identical parameters give identical histories") {
  Topology topo = testutil::fig1_topology();
  GroundTruth gt = make_gt(5, 11, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 12);

  SimulationState a = run_with(topo, gt, stream, paper_params());
  SimulationState b = run_with(topo, gt, stream, paper_params());
  REQUIRE(a.history.steps.size() == b.history.steps.size());
  auto same = [](double u, double v) {
    return (std::isnan(u) && std::isnan(v)) || u == v;
  };
  for (std::size_t k = 0; k < a.history.steps.size(); ++k) {
    const StepLog& x = a.history.steps[k];
    const StepLog& y = b.history.steps[k];
    for (int i = 0; i < topo.n; ++i) {
      CHECK(same(x.agent[i].gamma_err, y.agent[i].gamma_err));
      CHECK(same(x.agent[i].s_err_t, y.agent[i].s_err_t));
      CHECK(same(x.agent[i].zeta, y.agent[i].zeta));
    }
  }
}

TEST_CASE("positive-definiteness failures abort with context") {
  Topology topo = testutil::solo_topology(3);
  GroundTruth gt = make_gt(3, 5, 0.15);

  // rank-one data stream: the sample covariance stays singular, and with
  // lambda = 0 the initial dual variable is singular too
  DataStream stream;
  stream.p = 3;
  stream.samples.assign(40, {1.0, 0.0, 0.0});

  SimulationParams prm = paper_params();
  prm.lambda = 0.0;
  try {
    run_with(topo, gt, stream, prm);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("constant-zeta mode freezes the step size") {
  Topology topo = testutil::fig1_topology();
  GroundTruth gt = make_gt(5, 7, 0.15);
  DataStream stream = sample_gaussian(gt, 40, 8);

  SimulationParams prm = paper_params();
  prm.zeta = ZetaPolicy::constant(0.0);
  prm.zeta_auto_constant = true;
  SimulationState sim = run_with(topo, gt, stream, prm);
  const RunHistory& h = sim.history;
  REQUIRE(h.constant_zeta);
  CHECK(h.zeta_value > 0.0);
  for (const StepLog& s : h.steps)
    if (s.t >= h.t0)
      for (const auto& a : s.agent) CHECK(a.zeta == h.zeta_value);
}

TEST_CASE("theorem 1 bound holds on a constant-zeta run") {
  Topology topo = testutil::fig1_topology();
  GroundTruth gt = make_gt(5, 7, 0.15, 1e-12);
  DataStream stream = sample_gaussian(gt, 40, 8);

  SimulationParams prm = paper_params();
  prm.zeta = ZetaPolicy::constant(0.0);
  prm.zeta_auto_constant = true;
  SimulationState sim = run_with(topo, gt, stream, prm);

  BoundReport rep = theorem1_check(sim.history);
  CHECK(rep.rows.size() == 4u * 30u);
  CHECK(rep.all_satisfied());
}

TEST_CASE("config-driven run wires everything together") {
  ExperimentConfig cfg;
  cfg.p = 5;
  cfg.n = 4;
  cfg.T = 40;
  cfg.seed = 7;
  cfg.topology = testutil::data_path("fig1.topology");
  SimulationState sim = run(cfg);
  CHECK(sim.history.steps.size() == 40);
  CHECK(sim.history.has_ground_truth);
  CHECK(sim.history.sigma < 1.0);
}
