#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgama/csv.hpp"
#include "dgama/harness.hpp"
#include "dgama/log.hpp"
#include "dgama/model.hpp"

namespace {

std::vector<int> parse_grid_values(const std::vector<std::string>& tokens,
                                   const std::string& key, int fallback) {
  for (const std::string& tok : tokens) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw dgama::ParseError("--grid expects KEY=v1,v2 tokens, got '" + tok + "'");
    if (tok.substr(0, eq) != key) continue;
    std::vector<int> out;
    std::string rest = tok.substr(eq + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      std::string cell = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      out.push_back(std::stoi(cell));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (out.empty())
      throw dgama::ParseError("--grid " + key + " lists no values");
    return out;
  }
  return {fallback};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed online sparse inverse covariance estimation"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  std::string run_config, run_out;
  std::int64_t run_seed = -1;
  run_cmd->add_option("--config", run_config, "config file")->required();
  run_cmd->add_option("--seed", run_seed, "override the config seed");
  run_cmd->add_option("--out", run_out, "override the output directory");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over K, W and seeds");
  std::string sweep_config, sweep_out;
  std::vector<std::string> grid_tokens;
  int sweep_seeds = 20;
  sweep_cmd->add_option("--config", sweep_config, "config file")->required();
  sweep_cmd->add_option("--grid", grid_tokens, "grid tokens, e.g. K=1,2 W=1,2");
  sweep_cmd->add_option("--seeds", sweep_seeds, "number of consecutive seeds");
  sweep_cmd->add_option("--out", sweep_out, "override the output directory");

  // probe-consensus
  auto* probe_cmd =
      app.add_subcommand("probe-consensus", "frozen-data consensus-rate probe");
  std::string probe_topology, probe_out = ".";
  dgama::ProbeOptions popts;
  std::int64_t probe_seed = 1;
  probe_cmd->add_option("--topology", probe_topology, "topology file")->required();
  probe_cmd->add_option("--warmup", popts.warmup, "warm-up time steps");
  probe_cmd->add_option("--rounds", popts.rounds, "fusion rounds at the frozen step");
  probe_cmd->add_option("--seed", probe_seed, "probe data seed");
  probe_cmd->add_option("--out", probe_out, "output directory");

  // gamma-star
  auto* gs_cmd = app.add_subcommand("gamma-star",
                                    "oracle fixed point for a generated instance");
  int gs_p = 5;
  double gs_lambda = 0.15, gs_edge_prob = 0.4, gs_tol = 1e-10;
  std::int64_t gs_seed = 1;
  std::string gs_out;
  gs_cmd->add_option("--p", gs_p, "dimension")->required();
  gs_cmd->add_option("--lambda", gs_lambda, "l1 penalty")->required();
  gs_cmd->add_option("--seed", gs_seed, "generator seed")->required();
  gs_cmd->add_option("--edge-prob", gs_edge_prob, "edge probability");
  gs_cmd->add_option("--tol", gs_tol, "fixed-point tolerance");
  gs_cmd->add_option("--out", gs_out, "write the matrix here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      dgama::ExperimentConfig cfg = dgama::load_config(run_config);
      if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
      if (!run_out.empty()) cfg.out = run_out;
      dgama::run_experiment(cfg);
    } else if (*sweep_cmd) {
      dgama::ExperimentConfig cfg = dgama::load_config(sweep_config);
      if (!sweep_out.empty()) cfg.out = sweep_out;
      std::vector<int> Ks = parse_grid_values(grid_tokens, "K", cfg.K);
      std::vector<int> Ws = parse_grid_values(grid_tokens, "W", cfg.W);
      auto cells = dgama::run_sweep(cfg, Ks, Ws, sweep_seeds);
      std::filesystem::create_directories(cfg.out);
      dgama::write_sweep_csv(cfg.out + "/sweep.csv", cells);
      dgama::log_info("sweep written to " + cfg.out + "/sweep.csv");
    } else if (*probe_cmd) {
      popts.seed = static_cast<std::uint64_t>(probe_seed);
      dgama::Topology topo = dgama::load_topology(probe_topology);
      dgama::BoundReport rep = dgama::probe_consensus(topo, popts, probe_out);
      double c = 0, sigma = 0;
      for (auto& [k, v] : rep.constants) {
        if (k == "c") c = v;
        if (k == "sigma") sigma = v;
      }
      std::printf("sigma=%s c=%s bound %s\n", dgama::csv_double(sigma).c_str(),
                  dgama::csv_double(c).c_str(),
                  rep.all_satisfied() ? "satisfied" : "violated");
      if (!rep.all_satisfied()) return 1;
    } else if (*gs_cmd) {
      dgama::GroundTruth gt =
          dgama::gen_er_precision(gs_p, gs_edge_prob, static_cast<std::uint64_t>(gs_seed));
      dgama::SymMatrix gamma_star =
          dgama::compute_gamma_star(gt.covariance_true, gs_lambda, gs_tol);
      if (gs_out.empty()) {
        for (int i = 0; i < gamma_star.dim(); ++i) {
          for (int j = 0; j < gamma_star.dim(); ++j)
            std::printf("%s%s", j ? "," : "", dgama::csv_double(gamma_star(i, j)).c_str());
          std::printf("\n");
        }
      } else {
        dgama::write_matrix_csv(gs_out, gamma_star);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return dgama::exit_code_for(e);
  }
  return 0;
}
