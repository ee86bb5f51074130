#include "dgama/model.hpp"

#include <cmath>

#include "dgama/rng.hpp"
#include "dgama/solver.hpp"

namespace dgama {

GroundTruth gen_er_precision(int p, double edge_prob, std::uint64_t seed) {
  if (p < 2) throw ValidationError("gen_er_precision: p must be at least 2");
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw ValidationError("gen_er_precision: edge_prob must lie in [0, 1]");

  Rng rng(seed);
  GroundTruth gt;
  SymMatrix omega(p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (!rng.bernoulli(edge_prob)) continue;
      double mag = rng.uniform(0.4, 0.8);
      double val = rng.bernoulli(0.5) ? mag : -mag;
      omega.set(i, j, val);
      gt.edge_set.emplace_back(i, j);
    }
  }

  double d = std::abs(eig_sym(omega).front()) + 0.5;
  for (int i = 0; i < p; ++i) omega.set(i, i, d);

  gt.precision_true = omega;
  gt.covariance_true = inverse_spd(omega);
  return gt;
}

DataStream sample_gaussian(const GroundTruth& gt, int T, std::uint64_t seed) {
  const int p = gt.covariance_true.dim();
  Matrix l = cholesky(gt.covariance_true);

  DataStream ds;
  ds.p = p;
  ds.seed = seed;
  ds.samples.reserve(static_cast<std::size_t>(T));

  Rng rng(seed);
  std::vector<double> z(static_cast<std::size_t>(p));
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    std::vector<double> x(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= i; ++k) acc += l(i, k) * z[k];
      x[i] = acc;
    }
    ds.samples.push_back(std::move(x));
  }
  return ds;
}

SymMatrix compute_gamma_star(const SymMatrix& s_star, double lambda, double tol,
                             long max_iter) {
  if (lambda < 0.0)
    throw ValidationError("compute_gamma_star: lambda must be nonnegative");

  SymMatrix gamma = s_star + lambda * SymMatrix::identity(s_star.dim());
  for (long it = 0; it < max_iter; ++it) {
    double zeta = choose_zeta(gamma);
    SymMatrix next = dual_update(gamma, s_star, zeta, lambda);
    double d = frob_dist(next, gamma);
    gamma = next;
    if (d <= tol) return gamma;
  }
  throw NonConvergence("compute_gamma_star: iteration cap exceeded");
}

}  // namespace dgama
