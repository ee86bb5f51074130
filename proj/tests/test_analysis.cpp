#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "dgama/analysis.hpp"
#include "dgama/harness.hpp"
#include "helpers.hpp"

using namespace dgama;

namespace {

// Minimal synthetic history: constant covariance logs, linear-decay errors.
RunHistory synthetic_history(int n, int p, int T, int t0) {
  RunHistory h;
  h.n = n;
  h.p = p;
  h.T = T;
  h.t0 = t0;
  h.K = 1;
  h.W = 1;
  h.lambda = 0.15;
  h.constant_zeta = true;
  h.zeta_value = 0.5;
  h.has_ground_truth = true;
  h.sigma = 0.5;
  h.c = 1.0;
  h.s_star_eig_min = 1.0;
  h.s_star_eig_max = 1.0;
  h.s_star_diag_max = 1.0;
  h.s_eig_inf = 1.0;
  h.s_eig_sup = 1.0;
  h.gamma_box.absorb(0.8, 1.4);
  for (int t = 1; t <= T; ++t) {
    StepLog s;
    s.t = t;
    s.agent.resize(n);
    s.cent_s_err_star = 1.0 / t;
    s.cent_e_norm = (t == 1) ? 1.0 : 1.0 / (t * (t - 1.0));
    for (int i = 0; i < n; ++i) {
      if (t >= t0) {
        s.agent[i].gamma_err = 1.0 / t;
        s.agent[i].s_err_t = 0.01 / t;
      }
      s.agent[i].s_err_star = 1.1 / t;
    }
    h.steps.push_back(std::move(s));
  }
  return h;
}

}  // namespace

TEST_CASE("beta closed forms") {
  CHECK(beta(1.0, 1.0, 1.0) == 0.0);
  CHECK(beta(0.5, 1.0, 1.0) == 0.5);
  CHECK(beta(0.9, 1.0, 2.0) == doctest::Approx(0.775));
  CHECK_THROWS_AS(beta(0.5, -1.0, 1.0), InvalidBox);
  CHECK_THROWS_AS(beta(0.5, 2.0, 1.0), InvalidBox);
}

TEST_CASE("beta < 1 exactly when 0 < zeta < 2 a^2") {
  Rng rng(3);
  for (int rep = 0; rep < 300; ++rep) {
    double a = rng.uniform(0.05, 2.0);
    double b = a + rng.uniform(0.0, 2.0);
    double zeta = rng.uniform(1e-4, 3.0 * a * a);
    bool lt = beta(zeta, a, b) < 1.0;
    CHECK(lt == (zeta < 2.0 * a * a));
  }
}

TEST_CASE("ab box from the lemma recipe") {
  RunHistory h = synthetic_history(2, 5, 20, 5);
  // S* = I and all estimates at I with lambda = 0.15, p = 5
  AbBox box = ab_box(h);
  CHECK(box.lemma_box_valid);
  CHECK(box.a == doctest::Approx(0.25));
  CHECK(box.b == doctest::Approx(1.75));

  // lambda = 0 collapses to the observed extremes
  h.lambda = 0.0;
  box = ab_box(h);
  CHECK(box.a == doctest::Approx(1.0));
  CHECK(box.b == doctest::Approx(1.0));

  // large lambda makes the theory box vacuous; empirical box takes over
  h.lambda = 0.5;
  box = ab_box(h);
  CHECK_FALSE(box.lemma_box_valid);
  CHECK(box.a == doctest::Approx(0.8));
  CHECK(box.b == doctest::Approx(1.4));
}

TEST_CASE("theorem1 rhs closed forms") {
  RunHistory h = synthetic_history(1, 5, 30, 10);
  double a = 0.8, b = 1.4, zeta = 0.5;
  double bv = beta(zeta, a, b);

  // empty sums at t0
  CHECK(theorem1_rhs(h, 0, 10, a, b, zeta, 1, 10) ==
        doctest::Approx(h.steps[9].agent[0].gamma_err));

  // K = 1 collapse
  int t = 14;
  double direct = std::pow(bv, t - 10) * h.steps[9].agent[0].gamma_err;
  for (int l = 11; l <= t; ++l)
    direct += 2.0 * std::pow(bv, t - l) * h.steps[l - 1].agent[0].s_err_star;
  CHECK(theorem1_rhs(h, 0, t, a, b, zeta, 1, 10) == doctest::Approx(direct));
}

TEST_CASE("theorem1 rhs grows with any covariance-error input") {
  RunHistory h = synthetic_history(1, 5, 30, 10);
  double base = theorem1_rhs(h, 0, 25, 0.8, 1.4, 0.5, 2, 10);
  for (int l = 11; l <= 25; ++l) {
    RunHistory bumped = h;
    bumped.steps[l - 1].agent[0].s_err_star += 0.1;
    CHECK(theorem1_rhs(bumped, 0, 25, 0.8, 1.4, 0.5, 2, 10) > base);
  }
}

TEST_CASE("theorem1 check flags missing logs") {
  RunHistory h = synthetic_history(1, 5, 30, 10);
  h.constant_zeta = false;
  CHECK_THROWS_AS(theorem1_check(h), MissingLog);
}

TEST_CASE("t_bar scan finds the concentration onset") {
  RunHistory h = synthetic_history(1, 5, 50, 5);
  // errors 1/t vs bound 200 (1/t)^{1/4}: holds from the start
  CHECK(find_t_bar(h, 0.25) == 5);
  CHECK_THROWS_AS(find_t_bar(h, 0.7), InvalidDelta);

  // violate the inequality at the tail: no valid t_bar
  RunHistory bad = synthetic_history(1, 5, 50, 5);
  bad.steps[49].cent_s_err_star = 1e9;
  CHECK(find_t_bar(bad, 0.25) == -1);
}

TEST_CASE("corollary2 reduces to contraction plus concentration when sigma is 0") {
  RunHistory h = synthetic_history(1, 5, 30, 5);
  h.sigma = 0.0;
  int t_bar = 10;
  double bv = 0.5;
  int t = t_bar + 1;
  double rhs = corollary2_rhs(h, 0, t, 0.25, t_bar, 1.0, 0.0, 1, 1, bv, 1.0, 5);
  double expect = std::pow(bv, 2) * h.steps[t_bar - 1].agent[0].gamma_err +
                  2.0 * (40.0 * 5 * 1.0) * std::pow(1.0 / t, 0.25);
  CHECK(rhs == doctest::Approx(expect));
  CHECK_THROWS_AS(corollary2_rhs(h, 0, t, 0.6, t_bar, 1.0, 0.0, 1, 1, bv, 1.0, 5),
                  InvalidDelta);
  CHECK_THROWS_AS(corollary2_rhs(h, 0, t_bar, 0.25, t_bar, 1.0, 0.0, 1, 1, bv, 1.0, 5),
                  ValidationError);
}

TEST_CASE("corollary2 concentration term decays like t^(delta - 1/2)") {
  RunHistory h = synthetic_history(1, 5, 2000, 5);
  h.sigma = 0.0;
  double r1 = corollary2_rhs(h, 0, 1000, 0.01, 10, 1.0, 0.0, 1, 1, 0.5, 1.0, 5);
  double r2 = corollary2_rhs(h, 0, 2000, 0.01, 10, 1.0, 0.0, 1, 1, 0.5, 1.0, 5);
  // with beta = 0.5 the sums are dominated by the newest concentration term
  CHECK(r2 < r1);
  CHECK(r2 / r1 == doctest::Approx(std::pow(0.5, 0.49)).epsilon(0.05));
}

TEST_CASE("lemma1 check on trivial probes") {
  ProbeHistory probe;
  probe.t_star = 5;
  probe.n = 2;
  probe.p = 2;
  probe.s0_err = {1.0, 2.0};
  probe.rows.push_back({1, 0, 0.4, 0.0});
  probe.rows.push_back({1, 1, 0.9, 0.0});
  BoundReport rep = lemma1_check(probe, 1.0, 0.5);
  CHECK(rep.rows[0].satisfied);   // 0.4 <= 0.5
  CHECK(rep.rows[1].satisfied);   // 0.9 <= 1.0

  // all-leader style probe: zero errors satisfied at any rate
  ProbeHistory zero = probe;
  for (auto& r : zero.rows) r.err_t = 0.0;
  CHECK(lemma1_check(zero, 1.0, 0.0).all_satisfied());

  ProbeHistory empty;
  CHECK_THROWS_AS(lemma1_check(empty, 1.0, 0.5), MissingLog);
}

TEST_CASE("eq18 check runs the recursion bound") {
  RunHistory h = synthetic_history(2, 5, 40, 5);
  // alpha = c sigma^W = 0.5; agent errors 1.1/t vs 1/t + tail
  BoundReport rep = eq18_check(h);
  CHECK(!rep.rows.empty());
  // rows exist for every (agent, t)
  CHECK(rep.rows.size() == 2u * 40u);

  h.sigma = 1.0;
  h.c = 2.0;
  BoundReport skipped = eq18_check(h);
  CHECK(skipped.rows.empty());
}

TEST_CASE("bound reports serialize to csv") {
  BoundReport rep;
  rep.name = "demo";
  rep.rows.push_back({"demo", 3, 1, 0.5, 1.0, true});
  std::string path = "test_bounds_out.csv";
  write_bounds_csv(path, {rep});
  std::ifstream f(path);
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  CHECK(header == "bound,t,agent,lhs,rhs,satisfied");
  CHECK(row == "demo,3,1,0.5,1,1");
}
