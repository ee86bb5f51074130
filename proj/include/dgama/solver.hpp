#pragma once

#include <limits>
#include <vector>

#include "dgama/matrix.hpp"

namespace dgama {

/// Iterates of the alternating-minimization solver. `gamma` is the dual
/// variable, `omega` its inverse (the approximately sparse precision
/// estimate), `phi` the soft-thresholded precision estimate.
struct SolverState {
  SymMatrix gamma;
  SymMatrix omega;
  SymMatrix phi;
  double zeta = 0.0;
  double lambda = 0.0;
  long iteration = 0;
};

/// Running sample covariance S_t = ((t-1) S_{t-1} + x x^T) / t.
struct OnlineCovariance {
  SymMatrix s;
  long t = 0;

  OnlineCovariance() = default;
  explicit OnlineCovariance(int p) : s(p) {}
};

/// Step-size selection. Adaptive mode re-chooses zeta = safety *
/// lambda_min(gamma)^2 after every dual update; constant mode keeps one
/// value for the whole run, which is what the convergence bounds assume.
struct ZetaPolicy {
  enum class Mode { adaptive, constant };

  Mode mode = Mode::adaptive;
  double value = 0.0;
  double safety = 0.9;

  static ZetaPolicy adaptive(double safety = 0.9) {
    ZetaPolicy zp;
    zp.mode = Mode::adaptive;
    zp.safety = safety;
    return zp;
  }
  static ZetaPolicy constant(double v) {
    ZetaPolicy zp;
    zp.mode = Mode::constant;
    zp.value = v;
    return zp;
  }
};

/// Accumulates the extreme eigenvalues seen across a run.
struct EigBox {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void absorb(double lmin, double lmax) {
    if (lmin < lo) lo = lmin;
    if (lmax > hi) hi = lmax;
  }
};

/// Clip-based dual update: C_lambda(gamma - s + zeta * gamma^{-1}) + s.
/// The result is dual feasible, |result(i,j) - s(i,j)| <= lambda, exactly in
/// double arithmetic.
SymMatrix dual_update(const SymMatrix& gamma, const SymMatrix& s, double zeta,
                      double lambda);

/// Closed-form primal update: omega = gamma^{-1}.
SymMatrix omega_update(const SymMatrix& gamma);

/// Closed-form primal update:
/// phi = (1/zeta) * S_lambda(zeta * omega_next - s + gamma).
SymMatrix phi_update(const SymMatrix& omega_next, const SymMatrix& gamma,
                     const SymMatrix& s, double zeta, double lambda);

/// safety * lambda_min(gamma)^2; throws NotPositiveDefinite if gamma is not
/// positive definite.
double choose_zeta(const SymMatrix& gamma, double safety = 0.9);

OnlineCovariance online_cov_update(const OnlineCovariance& prev,
                                   const std::vector<double>& x);

/// One OGAMA time step. At t == t0 the dual variable is initialized to
/// s + lambda * I, consuming the whole iteration budget; for t > t0 the dual
/// update runs K times (each followed by step-size selection under the
/// adaptive policy) and omega, phi are refreshed from the final iterate.
/// When `gamma_box` is given it absorbs the eigenvalue extremes of every
/// dual iterate produced.
SolverState ogama_step(SolverState st, const SymMatrix& s, int t, int K, int t0,
                       double lambda, const ZetaPolicy& zp = ZetaPolicy{},
                       EigBox* gamma_box = nullptr);

/// Batch solve for a fixed covariance: iterate the dual update until
/// consecutive iterates are within `tol` in Frobenius distance.
SolverState gama_batch(const SymMatrix& s, double lambda, double tol = 1e-10,
                       long max_iter = 100000);

}  // namespace dgama
