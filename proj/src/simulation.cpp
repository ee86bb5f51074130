#include "dgama/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "dgama/csv.hpp"
#include "dgama/log.hpp"

namespace dgama {

SimulationState init_simulation(const Topology& topo,
                                std::optional<GroundTruth> gt, DataStream stream,
                                const SimulationParams& params) {
  validate_topology(topo);
  ObservabilityReport obs = check_joint_observability(topo);
  if (!obs.jointly_observable)
    throw NotJointlyObservable(
        "simulation: some covariance entry is observable by no agent");
  obs = consensus_rate(topo);

  if (static_cast<int>(stream.samples.size()) < params.T)
    throw DimensionMismatch("simulation: stream is shorter than T");
  if (stream.p != topo.p)
    throw DimensionMismatch("simulation: stream dimension differs from topology");

  SimulationState sim;
  sim.topo = topo;
  sim.gt = std::move(gt);
  sim.stream = std::move(stream);
  sim.params = params;
  sim.agents = make_agents(topo);
  sim.buffer.mats.assign(static_cast<std::size_t>(topo.n), SymMatrix(topo.p));
  sim.cent_cov = OnlineCovariance(topo.p);

  RunHistory& h = sim.history;
  h.n = topo.n;
  h.p = topo.p;
  h.T = params.T;
  h.t0 = params.t0;
  h.K = params.K;
  h.W = params.W;
  h.lambda = params.lambda;
  h.constant_zeta = (params.zeta.mode == ZetaPolicy::Mode::constant);
  if (h.constant_zeta && !params.zeta_auto_constant) h.zeta_value = params.zeta.value;
  h.sigma = obs.sigma;
  h.c = obs.c;
  h.has_ground_truth = sim.gt.has_value();
  if (sim.gt) {
    std::vector<double> ev = eig_sym(sim.gt->covariance_true);
    h.s_star_eig_min = ev.front();
    h.s_star_eig_max = ev.back();
    double dmax = 0.0;
    for (int j = 0; j < topo.p; ++j)
      dmax = std::max(dmax, sim.gt->covariance_true(j, j));
    h.s_star_diag_max = dmax;
    h.gamma_box.absorb(lambda_min(sim.gt->gamma_star),
                       lambda_max(sim.gt->gamma_star));
  }
  return sim;
}

namespace {

void solver_phase(SimulationState& sim, int t) {
  SimulationParams& prm = sim.params;
  const double lambda = prm.lambda;

  // Constant step size with no explicit value: freeze it at t0 from the
  // smallest initial dual eigenvalue across agents and the centralized
  // reference.
  if (t == prm.t0 && prm.zeta.mode == ZetaPolicy::Mode::constant &&
      prm.zeta_auto_constant) {
    double lmin = lambda_min(sim.cent_cov.s) + lambda;
    for (const AgentState& a : sim.agents)
      lmin = std::min(lmin, lambda_min(a.s_est) + lambda);
    if (!(lmin > 0.0))
      throw NotPositiveDefinite(
          "simulation: initial dual variable would not be positive definite at t0");
    prm.zeta.value = prm.zeta.safety * lmin * lmin;
    sim.history.zeta_value = prm.zeta.value;
    log_debug("auto constant zeta = " + csv_double(prm.zeta.value));
  }

  try {
    sim.cent_solver = ogama_step(sim.cent_solver, sim.cent_cov.s, t, prm.K,
                                 prm.t0, lambda, prm.zeta,
                                 &sim.history.gamma_box);
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(std::string(e.what()) +
                              " (centralized reference, t=" + std::to_string(t) + ")");
  }

  for (AgentState& a : sim.agents) {
    if (t == prm.t0 && prm.lambda >= lambda_min(a.s_est) / sim.topo.p)
      sim.history.lambda_validity_warning = true;
    try {
      a.solver = ogama_step(a.solver, a.s_est, t, prm.K, prm.t0, lambda,
                            prm.zeta, &sim.history.gamma_box);
      a.solver_ready = true;
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite(std::string(e.what()) + " (agent " +
                                std::to_string(a.id) + ", t=" + std::to_string(t) +
                                ")");
    }
  }
}

}  // namespace

void step(SimulationState& sim) {
  const int t = ++sim.t;
  const SimulationParams& prm = sim.params;
  if (t > prm.T) throw ValidationError("step: simulation already ran T steps");
  const std::vector<double>& x = sim.stream.samples[t - 1];

  double prev_cent_err_star = std::numeric_limits<double>::quiet_NaN();
  SymMatrix prev_cent = sim.cent_cov.s;
  sim.cent_cov = online_cov_update(sim.cent_cov, x);

  RunHistory& h = sim.history;
  StepLog log;
  log.t = t;
  log.agent.resize(sim.topo.n);
  log.cent_e_norm = frob_dist(sim.cent_cov.s, prev_cent);
  (void)prev_cent_err_star;

  sim.buffer.t = t;
  sim.buffer.w = 0;
  for (int w = 1; w <= prm.W; ++w) {
    com(sim.topo, sim.agents, x, sim.buffer);
    for (int i = 0; i < sim.topo.n; ++i) {
      if (t >= prm.t0) {
        std::vector<double> ev = eig_sym(sim.buffer.mats[i]);
        h.s_eig_inf = std::min(h.s_eig_inf, ev.front());
        h.s_eig_sup = std::max(h.s_eig_sup, ev.back());
        if (w == prm.W) {
          log.agent[i].s_eig_min = ev.front();
          log.agent[i].s_eig_max = ev.back();
        }
      }
      if (prm.trace_rounds) {
        TraceRow row;
        row.t = t;
        row.w = w;
        row.agent = i;
        row.err_t = frob_dist(sim.buffer.mats[i], sim.cent_cov.s);
        if (sim.gt)
          row.err_star = frob_dist(sim.buffer.mats[i], sim.gt->covariance_true);
        h.trace.push_back(row);
      }
    }
  }

  if (t >= prm.t0) solver_phase(sim, t);

  if (sim.gt)
    log.cent_s_err_star = frob_dist(sim.cent_cov.s, sim.gt->covariance_true);

  for (int i = 0; i < sim.topo.n; ++i) {
    AgentState& a = sim.agents[i];
    AgentStepLog& al = log.agent[i];
    al.s_err_t = frob_dist(a.s_est, sim.cent_cov.s);
    if (sim.gt) al.s_err_star = frob_dist(a.s_est, sim.gt->covariance_true);
    if (a.solver_ready) {
      if (sim.gt) al.gamma_err = frob_dist(a.solver.gamma, sim.gt->gamma_star);
      al.zeta = a.solver.zeta;
      al.lambda_min_gamma = lambda_min(a.solver.gamma);
      al.gamma_dist_cent = frob_dist(a.solver.gamma, sim.cent_solver.gamma);
      if (t > prm.t0) {
        // Dual feasibility is exact by construction; record any excess.
        double excess = 0.0;
        for (int l = 0; l < sim.topo.p; ++l)
          for (int m = l; m < sim.topo.p; ++m)
            excess = std::max(excess, std::abs(a.solver.gamma(l, m) - a.s_est(l, m)) -
                                          prm.lambda);
        h.max_dual_feasibility_excess =
            std::max(h.max_dual_feasibility_excess, excess);
      }
    }
  }
  if (t >= prm.t0) {
    if (sim.gt)
      log.cent_gamma_err = frob_dist(sim.cent_solver.gamma, sim.gt->gamma_star);
    double max_pair = 0.0;
    for (int i = 0; i < sim.topo.n; ++i)
      for (int j = i + 1; j < sim.topo.n; ++j)
        max_pair = std::max(max_pair, frob_dist(sim.agents[i].solver.gamma,
                                                sim.agents[j].solver.gamma));
    log.max_pair_gamma_dist = max_pair;
  }

  if (prm.record_matrices) {
    for (const AgentState& a : sim.agents) {
      log.gamma_snapshot.push_back(a.solver.gamma);
      log.s_snapshot.push_back(a.s_est);
    }
    log.cent_gamma_snapshot = sim.cent_solver.gamma;
  }

  h.steps.push_back(std::move(log));
}

SimulationState run_with(const Topology& topo, std::optional<GroundTruth> gt,
                         DataStream stream, const SimulationParams& params) {
  SimulationState sim =
      init_simulation(topo, std::move(gt), std::move(stream), params);
  for (int t = 1; t <= params.T; ++t) step(sim);
  return sim;
}

SimulationState run(const ExperimentConfig& cfg) {
  validate_config(cfg);

  Topology topo;
  if (cfg.topology == "generate") {
    Rng rng(cfg.seed + 2);
    topo = random_topology(cfg.n, cfg.p, 0.3, rng);
  } else {
    topo = load_topology(cfg.topology);
  }
  if (topo.n != cfg.n)
    throw ValidationError("config: topology agent count differs from n");
  if (topo.p != cfg.p)
    throw ValidationError("config: topology variable count differs from p");

  std::optional<GroundTruth> gt;
  DataStream stream;
  if (cfg.stream == "generate") {
    gt = gen_er_precision(cfg.p, cfg.edge_prob, cfg.seed);
    gt->gamma_star =
        compute_gamma_star(gt->covariance_true, cfg.lambda, cfg.gamma_star_tol);
    stream = sample_gaussian(*gt, cfg.T, cfg.seed + 1);
  } else {
    stream.p = cfg.p;
    stream.seed = 0;
    stream.samples = read_stream_csv(cfg.stream);
    if (!stream.samples.empty() &&
        static_cast<int>(stream.samples.front().size()) != cfg.p)
      throw DimensionMismatch("replayed stream column count differs from p");
  }

  SimulationParams prm;
  prm.K = cfg.K;
  prm.W = cfg.W;
  prm.t0 = cfg.t0;
  prm.T = cfg.T;
  prm.lambda = cfg.lambda;
  prm.gamma_star_tol = cfg.gamma_star_tol;
  prm.trace_rounds = cfg.trace_rounds;
  if (cfg.zeta_mode == "constant") {
    prm.zeta = ZetaPolicy::constant(cfg.zeta_value);
    prm.zeta_auto_constant = !(cfg.zeta_value > 0.0);
  } else {
    prm.zeta = ZetaPolicy::adaptive();
  }

  return run_with(topo, std::move(gt), std::move(stream), prm);
}

}  // namespace dgama
