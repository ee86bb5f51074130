#pragma once

#include <string>
#include <vector>

#include "dgama/consensus.hpp"
#include "dgama/simulation.hpp"

namespace dgama {

struct BoundRow {
  std::string bound;
  int t = 0;  // time step, or the round index for consensus-rate checks
  int agent = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// Absolute slack applied when comparing measured values against bounds.
inline constexpr double kBoundSlack = 1e-9;

struct BoundReport {
  std::string name;
  std::vector<BoundRow> rows;
  std::vector<std::pair<std::string, double>> constants;

  bool all_satisfied() const;
  void add_constant(const std::string& key, double value);
};

/// Per-iteration dual contraction factor max(|1 - zeta/a^2|, |1 - zeta/b^2|).
double beta(double zeta, double a, double b);

/// Eigenvalue box constants from a run. `a`/`b` follow the theory recipe
/// (extremes of the true covariance and of every logged estimate, widened by
/// p * lambda); when that box is vacuous (a <= 0) the empirical dual-iterate
/// box is substituted and `lemma_box_valid` is false.
struct AbBox {
  double a = 0.0;
  double b = 0.0;
  bool lemma_box_valid = false;
  double a_theory = 0.0;
  double b_theory = 0.0;
};

AbBox ab_box(const RunHistory& hist);

/// Right-hand side of the dual-error bound at (agent, t):
/// beta^{K(t-t0)} ||Gamma_{t0} - Gamma*|| +
/// 2 sum_m beta^{K-m} sum_l beta^{K(t-l)} ||S_{i,l}^W - S*||.
double theorem1_rhs(const RunHistory& hist, int agent, int t, double a, double b,
                    double zeta, int K, int t0);

/// Evaluates the dual-error bound at every logged step t in (t0, T] for all
/// agents. Requires a constant-zeta run with ground truth.
BoundReport theorem1_check(const RunHistory& hist);

/// First logged t >= t0 from which the sample-covariance concentration
/// inequality ||S_t - S*|| <= 40 p max_j S*(j,j) (1/t)^{1/2-delta} holds for
/// every later logged step.
int find_t_bar(const RunHistory& hist, double delta);

/// Asymptotic-rate envelope at (agent, t >= t_bar+1).
double corollary2_rhs(const RunHistory& hist, int agent, int t, double delta,
                      int t_bar, double c, double sigma, int W, int K,
                      double beta_val, double s_star_diag_max, int p);

BoundReport corollary2_check(const RunHistory& hist, double delta);

/// Consensus-rate bound on a frozen-data probe:
/// ||S_{i,t}^w - S_t|| <= c sigma^w ||S_{i,t}^0 - S_t|| for every probed w.
BoundReport lemma1_check(const ProbeHistory& probe, double c, double sigma);

/// Covariance error recursion
/// ||S_{i,t}^W - S*|| <= ||S_t - S*|| + sum_j (c sigma^W)^{t+1-j} ||e_j||,
/// checked at every logged t. Only meaningful when c sigma^W < 1; otherwise
/// the report carries the constants and no rows.
BoundReport eq18_check(const RunHistory& hist);

void write_bounds_csv(const std::string& path,
                      const std::vector<BoundReport>& reports);

}  // namespace dgama
