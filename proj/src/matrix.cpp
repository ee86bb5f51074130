#include "dgama/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dgama {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::apply(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw DimensionMismatch("Matrix::apply: vector length does not match columns");
  std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::outer(const std::vector<double>& x) {
  SymMatrix m(static_cast<int>(x.size()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) m.set(i, j, x[i] * x[j]);
  return m;
}

bool SymMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("SymMatrix +=: dimensions differ");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("SymMatrix -=: dimensions differ");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix m) { return m *= s; }

bool try_cholesky(const SymMatrix& m, Matrix& l) {
  const int n = m.dim();
  l = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

Matrix cholesky(const SymMatrix& m) {
  Matrix l;
  if (!try_cholesky(m, l))
    throw NotPositiveDefinite("cholesky: encountered a nonpositive pivot");
  return l;
}

bool is_positive_definite(const SymMatrix& m) {
  Matrix l;
  return try_cholesky(m, l);
}

SymMatrix inverse_spd(const SymMatrix& m) {
  const int n = m.dim();
  Matrix l = cholesky(m);

  // Invert the lower-triangular factor by forward substitution.
  Matrix linv(n, n);
  for (int j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += l(i, k) * linv(k, j);
      linv(i, j) = -s / l(i, i);
    }
  }

  // M^{-1} = L^{-T} L^{-1}; the entry formula is symmetric in (i, j), so the
  // result carries no asymmetry drift.
  SymMatrix inv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = j; k < n; ++k) s += linv(k, i) * linv(k, j);
      inv.set(i, j, s);
    }
  }
  return inv;
}

namespace {

double offdiag_sq(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return 2.0 * s;
}

}  // namespace

EigSym eig_sym_full(const SymMatrix& m) {
  const int n = m.dim();
  Matrix a = m.to_matrix();
  Matrix v = Matrix::identity(n);

  double scale = frob_norm(m);
  double thresh_sq = 1e-28 * std::max(1.0, scale * scale);
  const int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_sq(a) <= thresh_sq) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double app = a(p, p);
        double aqq = a(q, q);
        double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = a(k, p);
          double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p);
          double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag_sq(a) > thresh_sq)
    throw NonConvergence("eig_sym: Jacobi sweep cap exceeded");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });

  EigSym out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<double> eig_sym(const SymMatrix& m) { return eig_sym_full(m).values; }

double lambda_min(const SymMatrix& m) { return eig_sym(m).front(); }
double lambda_max(const SymMatrix& m) { return eig_sym(m).back(); }

double spectral_radius(const Matrix& m, double tol, int max_iter) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("spectral_radius: matrix is not square");
  const int n = m.rows();
  if (n == 0) return 0.0;

  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> u = m.apply(v);
    double nu = 0.0;
    for (double x : u) nu += x * x;
    nu = std::sqrt(nu);
    if (nu == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) v[i] = u[i] / nu;
    if (std::abs(nu - prev) <= tol * std::max(1.0, nu)) return nu;
    prev = nu;
  }
  throw NonConvergence("spectral_radius: power iteration cap exceeded");
}

double soft_threshold(double x, double lam) {
  if (x > lam) return x - lam;
  if (x < -lam) return x + lam;
  return 0.0;
}

double clip(double x, double lam) {
  if (x > lam) return lam;
  if (x < -lam) return -lam;
  return x;
}

SymMatrix soft_threshold(const SymMatrix& m, double lam) {
  SymMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) out.set(i, j, soft_threshold(m(i, j), lam));
  return out;
}

SymMatrix clip(const SymMatrix& m, double lam) {
  SymMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) out.set(i, j, clip(m(i, j), lam));
  return out;
}

double frob_norm(const SymMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double frob_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double frob_dist(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("frob_dist: dimensions differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    double d = a.data()[k] - b.data()[k];
    s += d * d;
  }
  return std::sqrt(s);
}

SymMatrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("symmetrize: matrix is not square");
  SymMatrix out(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return out;
}

}  // namespace dgama
