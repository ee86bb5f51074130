#pragma once

#include <cstddef>
#include <vector>

#include "dgama/errors.hpp"

namespace dgama {

/// Dense rectangular matrix, row-major. Used for Cholesky factors,
/// eigenvector accumulation, and the consensus update blocks, which are
/// generally nonsymmetric.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int r, int c) const { return data_[idx(r, c)]; }
  double& operator()(int r, int c) { return data_[idx(r, c)]; }

  const std::vector<double>& data() const { return data_; }

  /// Matrix-vector product M v.
  std::vector<double> apply(const std::vector<double>& v) const;

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric p-by-p matrix with full dense storage. All writes mirror both
/// triangles, so entry(i,j) == entry(j,i) holds bit-exactly at all times.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim)
      : dim_(dim),
        data_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0) {}

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const std::vector<double>& d);
  /// Outer product x x^T.
  static SymMatrix outer(const std::vector<double>& x);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  double operator()(int i, int j) const { return data_[idx(i, j)]; }

  /// Mirrored write: sets (i,j) and (j,i).
  void set(int i, int j, double v) {
    data_[idx(i, j)] = v;
    data_[idx(j, i)] = v;
  }

  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  double max_abs() const;

  Matrix to_matrix() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(j);
  }

  int dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix m);

/// Eigendecomposition of a symmetric matrix: values ascending, eigenvectors
/// stored as the corresponding columns of `vectors`.
struct EigSym {
  std::vector<double> values;
  Matrix vectors;
};

/// Lower-triangular L with L L^T = m. Throws NotPositiveDefinite when a
/// pivot is <= 0.
Matrix cholesky(const SymMatrix& m);
bool try_cholesky(const SymMatrix& m, Matrix& l);
bool is_positive_definite(const SymMatrix& m);

/// Inverse of a symmetric positive definite matrix via Cholesky. The result
/// is symmetric by construction; residual ||M M^{-1} - I||_F stays below
/// 1e-10 * dim for well-conditioned input.
SymMatrix inverse_spd(const SymMatrix& m);

/// Eigenvalues in ascending order (cyclic Jacobi).
std::vector<double> eig_sym(const SymMatrix& m);
EigSym eig_sym_full(const SymMatrix& m);
double lambda_min(const SymMatrix& m);
double lambda_max(const SymMatrix& m);

/// Largest eigenvalue magnitude of a square (possibly nonsymmetric) matrix
/// by power iteration. Intended for elementwise-nonnegative matrices with a
/// real dominant eigenvalue; an empty matrix has spectral radius 0.
double spectral_radius(const Matrix& m, double tol = 1e-12, int max_iter = 10000);

double soft_threshold(double x, double lam);
double clip(double x, double lam);
SymMatrix soft_threshold(const SymMatrix& m, double lam);
SymMatrix clip(const SymMatrix& m, double lam);

double frob_norm(const SymMatrix& m);
double frob_norm(const Matrix& m);
double frob_dist(const SymMatrix& a, const SymMatrix& b);

/// (M + M^T) / 2 of a square matrix.
SymMatrix symmetrize(const Matrix& m);

}  // namespace dgama
