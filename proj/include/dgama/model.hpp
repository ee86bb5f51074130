#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dgama/matrix.hpp"

namespace dgama {

/// A synthetic problem instance: sparse precision matrix, its covariance
/// inverse, the oracle fixed point of the dual update under the true
/// covariance, and the support of the precision matrix.
struct GroundTruth {
  SymMatrix precision_true;
  SymMatrix covariance_true;
  SymMatrix gamma_star;
  std::vector<std::pair<int, int>> edge_set;  // (i, j) with i < j, nonzero entry
};

struct DataStream {
  int p = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> samples;
};

/// Sparse Erdos-Renyi precision matrix. Each off-diagonal pair (i, j), i < j
/// in row-major order, gets an edge with probability `edge_prob`; edge
/// weights are +/- u with u uniform in [0.4, 0.8]; the diagonal is then set
/// to |lambda_min(offdiagonal part)| + 0.5, which makes the matrix strictly
/// positive definite. `gamma_star` is left empty.
GroundTruth gen_er_precision(int p, double edge_prob, std::uint64_t seed);

/// T i.i.d. zero-mean Gaussian samples with covariance gt.covariance_true,
/// generated as L z with L the Cholesky factor and z standard normal.
DataStream sample_gaussian(const GroundTruth& gt, int T, std::uint64_t seed);

/// Fixed point of the clip-based dual update under a fixed covariance,
/// iterated with zeta = 0.9 * lambda_min(gamma)^2 until consecutive iterates
/// are within `tol` in Frobenius distance.
SymMatrix compute_gamma_star(const SymMatrix& s_star, double lambda,
                             double tol = 1e-10, long max_iter = 100000);

}  // namespace dgama
