#include "dgama/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dgama/csv.hpp"

namespace dgama {

bool BoundReport::all_satisfied() const {
  for (const BoundRow& r : rows)
    if (!r.satisfied) return false;
  return true;
}

void BoundReport::add_constant(const std::string& key, double value) {
  constants.emplace_back(key, value);
}

double beta(double zeta, double a, double b) {
  if (!(a > 0.0) || !(a <= b))
    throw InvalidBox("beta: need 0 < a <= b");
  if (!(zeta > 0.0)) throw InvalidBox("beta: need zeta > 0");
  return std::max(std::abs(1.0 - zeta / (a * a)),
                  std::abs(1.0 - zeta / (b * b)));
}

namespace {

const AgentStepLog& agent_log(const RunHistory& hist, int t, int agent) {
  if (t < 1 || t > static_cast<int>(hist.steps.size()))
    throw MissingLog("history has no step t=" + std::to_string(t));
  const StepLog& s = hist.steps[t - 1];
  if (agent < 0 || agent >= static_cast<int>(s.agent.size()))
    throw MissingLog("history has no agent " + std::to_string(agent));
  return s.agent[agent];
}

double require(double v, const std::string& what) {
  if (std::isnan(v)) throw MissingLog("history is missing " + what);
  return v;
}

double geom_sum(double beta_val, int K) {
  // sum_{m=1}^{K} beta^{K-m} = 1 + beta + ... + beta^{K-1}
  double s = 0.0;
  double pw = 1.0;
  for (int m = 0; m < K; ++m) {
    s += pw;
    pw *= beta_val;
  }
  return s;
}

}  // namespace

AbBox ab_box(const RunHistory& hist) {
  if (!hist.has_ground_truth)
    throw MissingLog("ab_box: run has no ground truth");
  if (!std::isfinite(hist.s_eig_inf) || !std::isfinite(hist.s_eig_sup))
    throw MissingLog("ab_box: no covariance eigenvalue logs for t >= t0");

  AbBox box;
  double pl = static_cast<double>(hist.p) * hist.lambda;
  box.a_theory = std::min(hist.s_star_eig_min, hist.s_eig_inf) - pl;
  box.b_theory = std::max(hist.s_star_eig_max, hist.s_eig_sup) + pl;

  if (box.a_theory > 0.0) {
    box.a = box.a_theory;
    box.b = box.b_theory;
    box.lemma_box_valid = true;
  } else {
    if (!std::isfinite(hist.gamma_box.lo) || !std::isfinite(hist.gamma_box.hi))
      throw MissingLog("ab_box: no dual-iterate eigenvalue logs");
    box.a = hist.gamma_box.lo;
    box.b = hist.gamma_box.hi;
    box.lemma_box_valid = false;
  }
  return box;
}

double theorem1_rhs(const RunHistory& hist, int agent, int t, double a, double b,
                    double zeta, int K, int t0) {
  double bv = beta(zeta, a, b);
  double g0 = require(agent_log(hist, t0, agent).gamma_err,
                      "gamma error at t0 for agent " + std::to_string(agent));

  double rhs = std::pow(bv, static_cast<double>(K) * (t - t0)) * g0;
  double bK = std::pow(bv, static_cast<double>(K));
  double inner = 0.0;  // sum_l beta^{K(t-l)} ||S_{i,l}^W - S*||
  for (int l = t0 + 1; l <= t; ++l) {
    double serr = require(agent_log(hist, l, agent).s_err_star,
                          "covariance error at t=" + std::to_string(l));
    inner = bK * inner;
    // running form keeps the weight beta^{K(t-l)} on term l
    inner += serr;
  }
  rhs += 2.0 * geom_sum(bv, K) * inner;
  return rhs;
}

BoundReport theorem1_check(const RunHistory& hist) {
  if (!hist.constant_zeta)
    throw MissingLog("theorem1_check: run did not use a constant step size");
  AbBox box = ab_box(hist);
  double zeta = require(hist.zeta_value, "constant zeta value");
  double bv = beta(zeta, box.a, box.b);

  BoundReport rep;
  rep.name = "theorem1";
  rep.add_constant("a", box.a);
  rep.add_constant("b", box.b);
  rep.add_constant("beta", bv);
  rep.add_constant("zeta", zeta);
  rep.add_constant("lemma_box_valid", box.lemma_box_valid ? 1.0 : 0.0);

  // Running evaluation: rhs(t) = beta^K * rhs(t-1) ... expanded per agent to
  // avoid re-summing the whole prefix at every t.
  double bK = std::pow(bv, static_cast<double>(hist.K));
  double g = 2.0 * geom_sum(bv, hist.K);
  for (int i = 0; i < hist.n; ++i) {
    double g0 = require(agent_log(hist, hist.t0, i).gamma_err,
                        "gamma error at t0");
    double first = g0;
    double inner = 0.0;
    for (int t = hist.t0 + 1; t <= hist.T; ++t) {
      first *= bK;
      inner = bK * inner +
              require(agent_log(hist, t, i).s_err_star, "covariance error");
      double rhs = first + g * inner;
      double lhs = require(agent_log(hist, t, i).gamma_err, "gamma error");
      rep.rows.push_back(
          {rep.name, t, i, lhs, rhs, lhs <= rhs + kBoundSlack});
    }
  }
  return rep;
}

int find_t_bar(const RunHistory& hist, double delta) {
  if (!(delta > 0.0) || !(delta < 0.5))
    throw InvalidDelta("find_t_bar: delta must lie in (0, 1/2)");
  if (!hist.has_ground_truth) throw MissingLog("find_t_bar: no ground truth");

  double coeff = 40.0 * hist.p * hist.s_star_diag_max;
  double expo = 0.5 - delta;
  int T = static_cast<int>(hist.steps.size());

  int t_bar = -1;
  for (int t = T; t >= hist.t0; --t) {
    double lhs = hist.steps[t - 1].cent_s_err_star;
    if (std::isnan(lhs)) throw MissingLog("find_t_bar: missing covariance error");
    if (lhs <= coeff * std::pow(1.0 / t, expo))
      t_bar = t;
    else
      break;
  }
  return t_bar;
}

double corollary2_rhs(const RunHistory& hist, int agent, int t, double delta,
                      int t_bar, double c, double sigma, int W, int K,
                      double beta_val, double s_star_diag_max, int p) {
  if (!(delta > 0.0) || !(delta < 0.5))
    throw InvalidDelta("corollary2_rhs: delta must lie in (0, 1/2)");
  if (t < t_bar + 1)
    throw ValidationError("corollary2_rhs: t must be at least t_bar + 1");

  double alpha = c * std::pow(sigma, static_cast<double>(W));
  double expo = 0.5 - delta;
  double coeff = 40.0 * p * s_star_diag_max;

  double g_tbar = require(agent_log(hist, t_bar, agent).gamma_err,
                          "gamma error at t_bar");
  double s_tbar = require(agent_log(hist, t_bar, agent).s_err_t,
                          "covariance error vs S_t at t_bar");

  double bK = std::pow(beta_val, static_cast<double>(K));
  double alpha_pow = 1.0;  // alpha^{l - t_bar}
  double q = 0.0;          // sum_j alpha^{l+1-j} (1/(j-1))^{1/2-delta}
  double outer = 0.0;      // sum_l beta^{K(t-l)} h(l)
  for (int l = t_bar + 1; l <= t; ++l) {
    alpha_pow *= alpha;
    q = alpha * (q + std::pow(1.0 / (l - 1), expo));
    double h = alpha_pow * s_tbar +
               coeff * (std::pow(1.0 / l, expo) + 2.0 * q);
    outer = bK * outer + h;
  }
  return std::pow(beta_val, static_cast<double>(K) * (t + 1 - t_bar)) * g_tbar +
         2.0 * geom_sum(beta_val, K) * outer;
}

BoundReport corollary2_check(const RunHistory& hist, double delta) {
  if (!hist.constant_zeta)
    throw MissingLog("corollary2_check: run did not use a constant step size");
  AbBox box = ab_box(hist);
  double zeta = require(hist.zeta_value, "constant zeta value");
  double bv = beta(zeta, box.a, box.b);
  int t_bar = find_t_bar(hist, delta);

  BoundReport rep;
  rep.name = "corollary2";
  rep.add_constant("a", box.a);
  rep.add_constant("b", box.b);
  rep.add_constant("beta", bv);
  rep.add_constant("c", hist.c);
  rep.add_constant("sigma", hist.sigma);
  rep.add_constant("delta", delta);
  rep.add_constant("t_bar", static_cast<double>(t_bar));
  rep.add_constant("lemma_box_valid", box.lemma_box_valid ? 1.0 : 0.0);
  if (t_bar < 0) return rep;  // concentration never took hold; nothing to check

  double alpha = hist.c * std::pow(hist.sigma, static_cast<double>(hist.W));
  double expo = 0.5 - delta;
  double coeff = 40.0 * hist.p * hist.s_star_diag_max;
  double bK = std::pow(bv, static_cast<double>(hist.K));
  double g = 2.0 * geom_sum(bv, hist.K);

  for (int i = 0; i < hist.n; ++i) {
    double g_tbar = require(agent_log(hist, t_bar, i).gamma_err,
                            "gamma error at t_bar");
    double s_tbar = require(agent_log(hist, t_bar, i).s_err_t,
                            "covariance error vs S_t at t_bar");
    double first = bK * g_tbar;  // becomes beta^{K(t+1-t_bar)} g after the update below
    double alpha_pow = 1.0;
    double q = 0.0;
    double outer = 0.0;
    for (int t = t_bar + 1; t <= hist.T; ++t) {
      first *= bK;
      alpha_pow *= alpha;
      q = alpha * (q + std::pow(1.0 / (t - 1), expo));
      double h = alpha_pow * s_tbar + coeff * (std::pow(1.0 / t, expo) + 2.0 * q);
      outer = bK * outer + h;
      double rhs = first + g * outer;
      double lhs = require(agent_log(hist, t, i).gamma_err, "gamma error");
      rep.rows.push_back({rep.name, t, i, lhs, rhs, lhs <= rhs + kBoundSlack});
    }
  }
  return rep;
}

BoundReport lemma1_check(const ProbeHistory& probe, double c, double sigma) {
  BoundReport rep;
  rep.name = "lemma1";
  rep.add_constant("c", c);
  rep.add_constant("sigma", sigma);
  rep.add_constant("t_star", static_cast<double>(probe.t_star));
  if (probe.rows.empty()) throw MissingLog("lemma1_check: probe has no rounds");

  for (const ProbeRow& row : probe.rows) {
    double rhs = c * std::pow(sigma, static_cast<double>(row.w)) *
                 probe.s0_err[row.agent];
    rep.rows.push_back({rep.name, row.w, row.agent, row.err_t, rhs,
                        row.err_t <= rhs + kBoundSlack});
  }
  return rep;
}

BoundReport eq18_check(const RunHistory& hist) {
  if (!hist.has_ground_truth) throw MissingLog("eq18_check: no ground truth");

  double alpha = hist.c * std::pow(hist.sigma, static_cast<double>(hist.W));
  BoundReport rep;
  rep.name = "eq18";
  rep.add_constant("c", hist.c);
  rep.add_constant("sigma", hist.sigma);
  rep.add_constant("W", static_cast<double>(hist.W));
  rep.add_constant("c_sigma_w", alpha);
  if (!(alpha < 1.0)) return rep;  // bound stated only for c sigma^W < 1

  std::vector<double> tail(hist.steps.size() + 1, 0.0);
  for (int t = 1; t <= static_cast<int>(hist.steps.size()); ++t) {
    double e = require(hist.steps[t - 1].cent_e_norm, "centralized increment norm");
    tail[t] = alpha * (tail[t - 1] + e);
  }
  for (int i = 0; i < hist.n; ++i) {
    for (int t = 1; t <= static_cast<int>(hist.steps.size()); ++t) {
      double lhs = require(agent_log(hist, t, i).s_err_star, "covariance error");
      double rhs =
          require(hist.steps[t - 1].cent_s_err_star, "centralized covariance error") +
          tail[t];
      rep.rows.push_back({rep.name, t, i, lhs, rhs, lhs <= rhs + kBoundSlack});
    }
  }
  return rep;
}

void write_bounds_csv(const std::string& path,
                      const std::vector<BoundReport>& reports) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write file: " + path);
  f << "bound,t,agent,lhs,rhs,satisfied\n";
  for (const BoundReport& rep : reports)
    for (const BoundRow& r : rep.rows)
      f << r.bound << ',' << r.t << ',' << r.agent << ','
        << csv_double(r.lhs) << ',' << csv_double(r.rhs) << ','
        << (r.satisfied ? 1 : 0) << '\n';
}

}  // namespace dgama
