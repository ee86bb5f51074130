#include "dgama/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dgama/csv.hpp"
#include "dgama/log.hpp"

namespace fs = std::filesystem;

namespace dgama {

namespace {

void write_trajectory_csv(const std::string& path, const RunHistory& hist) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "t,agent,gamma_err,s_err_star,s_err_t,centralized_gamma_err,zeta,"
       "lambda_min_gamma\n";
  for (const StepLog& s : hist.steps) {
    for (int i = 0; i < static_cast<int>(s.agent.size()); ++i) {
      const AgentStepLog& a = s.agent[i];
      f << s.t << ',' << i << ',' << csv_double(a.gamma_err) << ','
        << csv_double(a.s_err_star) << ',' << csv_double(a.s_err_t) << ','
        << csv_double(s.cent_gamma_err) << ',' << csv_double(a.zeta) << ','
        << csv_double(a.lambda_min_gamma) << '\n';
    }
  }
}

void write_rounds_csv(const std::string& path, const RunHistory& hist) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "t,w,agent,err_to_St,err_to_Sstar\n";
  for (const TraceRow& r : hist.trace)
    f << r.t << ',' << r.w << ',' << r.agent << ',' << csv_double(r.err_t)
      << ',' << csv_double(r.err_star) << '\n';
}

void write_summary_csv(const std::string& path, const RunHistory& hist,
                       const std::vector<BoundReport>& reports) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "key,value\n";
  auto row = [&](const std::string& k, const std::string& v) {
    f << k << ',' << v << '\n';
  };
  auto drow = [&](const std::string& k, double v) { row(k, csv_double(v)); };

  row("n", std::to_string(hist.n));
  row("p", std::to_string(hist.p));
  row("T", std::to_string(hist.T));
  row("t0", std::to_string(hist.t0));
  row("K", std::to_string(hist.K));
  row("W", std::to_string(hist.W));
  drow("lambda", hist.lambda);
  row("zeta_mode", hist.constant_zeta ? "constant" : "adaptive");
  drow("zeta", hist.zeta_value);
  drow("sigma", hist.sigma);
  drow("c", hist.c);
  drow("c_sigma_w", hist.c * std::pow(hist.sigma, hist.W));
  drow("s_eig_inf", hist.s_eig_inf);
  drow("s_eig_sup", hist.s_eig_sup);
  drow("gamma_eig_min", hist.gamma_box.lo);
  drow("gamma_eig_max", hist.gamma_box.hi);
  drow("max_dual_feasibility_excess", hist.max_dual_feasibility_excess);
  row("lambda_validity_warning", hist.lambda_validity_warning ? "1" : "0");

  if (!hist.steps.empty()) {
    const StepLog& last = hist.steps.back();
    drow("centralized_final_gamma_err", last.cent_gamma_err);
    for (int i = 0; i < static_cast<int>(last.agent.size()); ++i) {
      drow("final_gamma_err_agent" + std::to_string(i), last.agent[i].gamma_err);
      drow("final_s_err_star_agent" + std::to_string(i), last.agent[i].s_err_star);
    }
  }
  for (const BoundReport& rep : reports) {
    row("bound_" + rep.name + "_satisfied", rep.all_satisfied() ? "1" : "0");
    for (const auto& [k, v] : rep.constants) drow("bound_" + rep.name + "_" + k, v);
  }
}

void write_plot_script(const std::string& path, int n) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "set datafile separator ','\n"
       "set logscale y\n"
       "set xlabel 't'\n"
       "set ylabel 'dual error'\n"
       "plot \\\n";
  for (int i = 0; i < n; ++i)
    f << "  'trajectory.csv' using 1:($2==" << i
      << " ? $3 : 1/0) with lines title 'agent " << i << "', \\\n";
  f << "  'trajectory.csv' using 1:($2==0 ? $6 : 1/0) with lines lw 2 "
       "title 'centralized'\n";
}

}  // namespace

DataStream replay_stream(const std::string& path, int expected_p) {
  DataStream ds;
  ds.p = expected_p;
  ds.samples = read_stream_csv(path);
  if (!ds.samples.empty() &&
      static_cast<int>(ds.samples.front().size()) != expected_p)
    throw DimensionMismatch("replayed stream column count differs from p");
  return ds;
}

void run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  fs::create_directories(cfg.out);

  ExperimentConfig run_cfg = cfg;
  run_cfg.trace_rounds = cfg.trace_rounds;
  SimulationState sim = run(run_cfg);
  const RunHistory& hist = sim.history;

  std::vector<BoundReport> reports;
  for (const std::string& name : selected_bounds(cfg)) {
    if (!hist.has_ground_truth) {
      log_info("skipping bound '" + name + "': run has no ground truth");
      continue;
    }
    if (name == "theorem1") reports.push_back(theorem1_check(hist));
    if (name == "eq18") reports.push_back(eq18_check(hist));
    if (name == "corollary2") reports.push_back(corollary2_check(hist, cfg.delta));
  }

  fs::path out(cfg.out);
  write_trajectory_csv((out / "trajectory.csv").string(), hist);
  write_bounds_csv((out / "bounds.csv").string(), reports);
  write_summary_csv((out / "summary.csv").string(), hist, reports);
  write_stream_csv((out / "stream.csv").string(), sim.stream.samples);
  if (sim.gt) {
    write_matrix_csv((out / "precision_true.csv").string(), sim.gt->precision_true);
    write_matrix_csv((out / "covariance_true.csv").string(), sim.gt->covariance_true);
    write_matrix_csv((out / "gamma_star.csv").string(), sim.gt->gamma_star);
  }
  if (cfg.trace_rounds) write_rounds_csv((out / "rounds.csv").string(), hist);
  if (cfg.plot_script) write_plot_script((out / "plot.gp").string(), hist.n);
  log_info("experiment outputs written to " + out.string());
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& base,
                                 const std::vector<int>& Ks,
                                 const std::vector<int>& Ws, int num_seeds) {
  validate_config(base);
  std::vector<SweepCell> cells;

  for (int s = 0; s < num_seeds; ++s) {
    std::uint64_t seed = base.seed + static_cast<std::uint64_t>(s);

    Topology topo;
    if (base.topology == "generate") {
      Rng rng(seed + 2);
      topo = random_topology(base.n, base.p, 0.3, rng);
    } else {
      topo = load_topology(base.topology);
    }

    GroundTruth gt = gen_er_precision(base.p, base.edge_prob, seed);
    gt.gamma_star =
        compute_gamma_star(gt.covariance_true, base.lambda, base.gamma_star_tol);
    DataStream stream = sample_gaussian(gt, base.T, seed + 1);

    for (int K : Ks) {
      for (int W : Ws) {
        SimulationParams prm;
        prm.K = K;
        prm.W = W;
        prm.t0 = base.t0;
        prm.T = base.T;
        prm.lambda = base.lambda;
        prm.gamma_star_tol = base.gamma_star_tol;
        if (base.zeta_mode == "constant") {
          prm.zeta = ZetaPolicy::constant(base.zeta_value);
          prm.zeta_auto_constant = !(base.zeta_value > 0.0);
        }
        SimulationState sim = run_with(topo, gt, stream, prm);
        const RunHistory& h = sim.history;

        SweepCell cell;
        cell.K = K;
        cell.W = W;
        cell.seed = seed;
        const StepLog& last = h.steps.back();
        const StepLog& first_upd = h.steps[base.t0];  // t = t0 + 1
        double fsum = 0.0, esum = 0.0;
        bool improved = true;
        for (int i = 0; i < h.n; ++i) {
          fsum += last.agent[i].gamma_err;
          esum += first_upd.agent[i].gamma_err;
          if (!(last.agent[i].gamma_err < first_upd.agent[i].gamma_err))
            improved = false;
        }
        cell.mean_final_gamma_err = fsum / h.n;
        cell.mean_t11_gamma_err = esum / h.n;
        cell.improved_all_agents = improved;
        cell.cent_final_gamma_err = last.cent_gamma_err;

        double gap = 0.0;
        int count = 0;
        for (const StepLog& st : h.steps) {
          if (st.t < 20 || st.t > 40) continue;
          for (const AgentStepLog& a : st.agent) {
            if (!std::isnan(a.gamma_dist_cent)) {
              gap += a.gamma_dist_cent;
              ++count;
            }
          }
        }
        cell.mean_gap_t20_40 = count ? gap / count : 0.0;
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "K,W,seed,mean_final_gamma_err,mean_t11_gamma_err,improved_all_agents,"
       "mean_gap_t20_40,cent_final_gamma_err\n";
  for (const SweepCell& c : cells)
    f << c.K << ',' << c.W << ',' << c.seed << ','
      << csv_double(c.mean_final_gamma_err) << ','
      << csv_double(c.mean_t11_gamma_err) << ',' << (c.improved_all_agents ? 1 : 0)
      << ',' << csv_double(c.mean_gap_t20_40) << ','
      << csv_double(c.cent_final_gamma_err) << '\n';
}

BoundReport probe_consensus(const Topology& topo, const ProbeOptions& opts,
                            const std::string& out_dir) {
  validate_topology(topo);
  ObservabilityReport obs = check_joint_observability(topo);
  if (!obs.jointly_observable)
    throw NotJointlyObservable("probe: topology is not jointly observable");
  obs = consensus_rate(topo);

  ProbeHistory probe = frozen_data_probe(topo, opts.warmup, opts.rounds, opts.seed);
  BoundReport rep = lemma1_check(probe, obs.c, obs.sigma);

  fs::create_directories(out_dir);
  fs::path out(out_dir);
  {
    std::ofstream f(out / "probe.csv");
    if (!f) throw Error("cannot write probe.csv");
    f << "t,w,agent,err_to_St,err_to_Sstar\n";
    for (const ProbeRow& r : probe.rows)
      f << probe.t_star << ',' << r.w << ',' << r.agent << ','
        << csv_double(r.err_t) << ',' << csv_double(r.err_star) << '\n';
  }
  write_bounds_csv((out / "probe_bounds.csv").string(), {rep});
  return rep;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e))
    return 2;
  if (dynamic_cast<const NotJointlyObservable*>(&e) ||
      dynamic_cast<const NoLeader*>(&e))
    return 3;
  if (dynamic_cast<const NotPositiveDefinite*>(&e)) return 4;
  if (dynamic_cast<const NonConvergence*>(&e)) return 5;
  return 1;
}

}  // namespace dgama
