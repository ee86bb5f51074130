#include "dgama/solver.hpp"

#include <cmath>

namespace dgama {

namespace {

// gamma entry = clipped increment + s entry, nudged by at most a couple of
// ulps so that recomputing |gamma - s| never exceeds lambda. Keeps dual
// feasibility exact in double arithmetic, not just up to rounding.
double feasible_add(double clipped, double s, double lambda) {
  double g = clipped + s;
  while (std::abs(g - s) > lambda) g = std::nextafter(g, s);
  return g;
}

double select_zeta(const ZetaPolicy& zp, double gamma_lambda_min) {
  if (zp.mode == ZetaPolicy::Mode::constant) return zp.value;
  return zp.safety * gamma_lambda_min * gamma_lambda_min;
}

// Eigenvalue extremes of the current dual iterate; doubles as the
// positive-definiteness check.
std::pair<double, double> gamma_extremes(const SymMatrix& gamma) {
  std::vector<double> ev = eig_sym(gamma);
  if (!(ev.front() > 0.0))
    throw NotPositiveDefinite("solver: dual variable lost positive definiteness");
  return {ev.front(), ev.back()};
}

}  // namespace

SymMatrix dual_update(const SymMatrix& gamma, const SymMatrix& s, double zeta,
                      double lambda) {
  if (gamma.dim() != s.dim())
    throw DimensionMismatch("dual_update: gamma and s dimensions differ");
  if (!(zeta > 0.0)) throw ValidationError("dual_update: zeta must be positive");
  if (lambda < 0.0) throw ValidationError("dual_update: lambda must be nonnegative");

  SymMatrix ginv = inverse_spd(gamma);
  SymMatrix out(gamma.dim());
  for (int i = 0; i < gamma.dim(); ++i) {
    for (int j = i; j < gamma.dim(); ++j) {
      double v = gamma(i, j) - s(i, j) + zeta * ginv(i, j);
      out.set(i, j, feasible_add(clip(v, lambda), s(i, j), lambda));
    }
  }
  return out;
}

SymMatrix omega_update(const SymMatrix& gamma) { return inverse_spd(gamma); }

SymMatrix phi_update(const SymMatrix& omega_next, const SymMatrix& gamma,
                     const SymMatrix& s, double zeta, double lambda) {
  if (!(zeta > 0.0)) throw ValidationError("phi_update: zeta must be positive");
  SymMatrix out(gamma.dim());
  for (int i = 0; i < gamma.dim(); ++i) {
    for (int j = i; j < gamma.dim(); ++j) {
      double v = zeta * omega_next(i, j) - s(i, j) + gamma(i, j);
      out.set(i, j, soft_threshold(v, lambda) / zeta);
    }
  }
  return out;
}

double choose_zeta(const SymMatrix& gamma, double safety) {
  double lmin = lambda_min(gamma);
  if (!(lmin > 0.0))
    throw NotPositiveDefinite("choose_zeta: gamma is not positive definite");
  return safety * lmin * lmin;
}

OnlineCovariance online_cov_update(const OnlineCovariance& prev,
                                   const std::vector<double>& x) {
  const int p = prev.s.dim();
  if (static_cast<int>(x.size()) != p)
    throw DimensionMismatch("online_cov_update: sample dimension differs from p");
  OnlineCovariance out(p);
  out.t = prev.t + 1;
  const double tm1 = static_cast<double>(out.t - 1);
  const double td = static_cast<double>(out.t);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j)
      out.s.set(i, j, (tm1 * prev.s(i, j) + x[i] * x[j]) / td);
  return out;
}

SolverState ogama_step(SolverState st, const SymMatrix& s, int t, int K, int t0,
                       double lambda, const ZetaPolicy& zp, EigBox* gamma_box) {
  if (t < t0) throw ValidationError("ogama_step: t < t0");
  if (lambda < 0.0) throw ValidationError("ogama_step: lambda must be nonnegative");
  st.lambda = lambda;

  if (t == t0) {
    st.gamma = s + lambda * SymMatrix::identity(s.dim());
    auto [lo, hi] = gamma_extremes(st.gamma);
    if (gamma_box) gamma_box->absorb(lo, hi);
    st.zeta = select_zeta(zp, lo);
    st.iteration = 0;
    return st;
  }

  for (int k = 0; k < K; ++k) {
    st.gamma = dual_update(st.gamma, s, st.zeta, lambda);
    auto [lo, hi] = gamma_extremes(st.gamma);
    if (gamma_box) gamma_box->absorb(lo, hi);
    st.zeta = select_zeta(zp, lo);
    ++st.iteration;
  }
  st.omega = inverse_spd(st.gamma);
  st.phi = phi_update(st.omega, st.gamma, s, st.zeta, lambda);
  return st;
}

SolverState gama_batch(const SymMatrix& s, double lambda, double tol,
                       long max_iter) {
  if (lambda < 0.0) throw ValidationError("gama_batch: lambda must be nonnegative");

  SolverState st;
  st.lambda = lambda;
  st.gamma = s + lambda * SymMatrix::identity(s.dim());
  st.zeta = choose_zeta(st.gamma);

  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    SymMatrix next = dual_update(st.gamma, s, st.zeta, lambda);
    st.zeta = choose_zeta(next);
    double d = frob_dist(next, st.gamma);
    st.gamma = next;
    ++st.iteration;
    if (d <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergence("gama_batch: iteration cap exceeded before tolerance");

  st.omega = inverse_spd(st.gamma);
  st.phi = phi_update(st.omega, st.gamma, s, st.zeta, lambda);
  return st;
}

}  // namespace dgama
