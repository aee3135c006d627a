#include "cluster_bifurc/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "cluster_bifurc/errors.hpp"

namespace cluster_bifurc::linalg {

Vector::Vector(std::size_t n, double fill) : size_(n) {
  if (n > kMaxDim) throw UsageError("vector dimension exceeds kMaxDim");
  std::fill_n(data_.begin(), n, fill);
}

Vector::Vector(std::initializer_list<double> values) : size_(values.size()) {
  if (size_ > kMaxDim) throw UsageError("vector dimension exceeds kMaxDim");
  std::copy(values.begin(), values.end(), data_.begin());
}

Vector::Vector(std::span<const double> values) : size_(values.size()) {
  if (size_ > kMaxDim) throw UsageError("vector dimension exceeds kMaxDim");
  std::copy(values.begin(), values.end(), data_.begin());
}

Vector& Vector::operator+=(const Vector& o) noexcept {
  for (std::size_t i = 0; i < size_; ++i) data_[i] += o.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) noexcept {
  for (std::size_t i = 0; i < size_; ++i) data_[i] -= o.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) noexcept {
  for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
  return *this;
}

bool operator==(const Vector& x, const Vector& y) noexcept {
  return x.size_ == y.size_ && std::equal(x.begin(), x.end(), y.begin());
}

Vector operator+(Vector x, const Vector& y) noexcept { return x += y; }
Vector operator-(Vector x, const Vector& y) noexcept { return x -= y; }
Vector operator*(double s, Vector x) noexcept { return x *= s; }
Vector operator-(Vector x) noexcept { return x *= -1.0; }

double dot(const Vector& x, const Vector& y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Vector& x) noexcept { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Vector normalized(const Vector& x) {
  const double n = norm(x);
  if (n == 0.0) throw UsageError("cannot normalize a zero vector");
  return (1.0 / n) * x;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols) {
  if (rows > kMaxDim || cols > kMaxDim) throw UsageError("matrix dimension exceeds kMaxDim");
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) (*this)(i, j) = fill;
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ > kMaxDim || cols_ > kMaxDim) throw UsageError("matrix dimension exceeds kMaxDim");
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw UsageError("ragged matrix initializer");
    std::size_t j = 0;
    for (double v : r) (*this)(i, j++) = v;
    ++i;
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::row(std::size_t i) const {
  Vector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::col(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_col(std::size_t j, const Vector& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool operator==(const Matrix& x, const Matrix& y) noexcept {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
  for (std::size_t i = 0; i < x.rows_; ++i)
    for (std::size_t j = 0; j < x.cols_; ++j)
      if (x(i, j) != y(i, j)) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  assert(a.cols() == x.size());
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Matrix operator*(double s, Matrix a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
  return a;
}

double frobenius_norm(const Matrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double max_abs(const Matrix& a) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double asymmetry(const Matrix& a) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymEigen sym_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw UsageError("sym_eigen needs a square matrix");
  const std::size_t n = m.rows();
  const double scale = frobenius_norm(m);
  if (asymmetry(m) >= 1e-10 * std::max(scale, 1e-300) && scale > 0.0)
    throw UsageError("sym_eigen: matrix is not symmetric");

  Matrix a = m;
  // Use the exact symmetric part so rotations see a consistent matrix.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);

  const double target = 1e-13 * scale;
  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::sort(order.begin(), order.begin() + n,
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.set_col(k, v.col(order[k]));
  }
  return out;
}

std::size_t negative_count(const SymEigen& eig) noexcept {
  return static_cast<std::size_t>(
      std::count_if(eig.values.begin(), eig.values.end(), [](double x) { return x < 0.0; }));
}

namespace {

// Returns the factorization; pivot index of the first tiny pivot, or -1.
LuFactor factor_impl(const Matrix& j, int& bad_pivot) {
  if (j.rows() != j.cols()) throw UsageError("LU needs a square matrix");
  const std::size_t n = j.rows();
  LuFactor f;
  f.lu = j;
  f.n = n;
  std::iota(f.perm.begin(), f.perm.begin() + n, 0);
  const double threshold = 1e-14 * max_abs(j);
  bad_pivot = -1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > std::abs(f.lu(piv, k))) piv = i;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(f.lu(k, c), f.lu(piv, c));
      std::swap(f.perm[k], f.perm[piv]);
      f.det_sign = -f.det_sign;
      f.det = -f.det;
    }
    const double pivot = f.lu(k, k);
    f.det *= pivot;
    if (std::abs(pivot) <= threshold || pivot == 0.0) {
      if (bad_pivot < 0) bad_pivot = static_cast<int>(k);
      if (pivot == 0.0) continue;
    }
    if (pivot < 0.0) f.det_sign = -f.det_sign;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = f.lu(i, k) / pivot;
      f.lu(i, k) = factor;
      for (std::size_t c = k + 1; c < n; ++c) f.lu(i, c) -= factor * f.lu(k, c);
    }
  }
  return f;
}

}  // namespace

Vector LuFactor::solve(const Vector& rhs) const {
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= lu(i, k) * x[k];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lu(ii, k) * x[k];
    x[ii] /= lu(ii, ii);
  }
  return x;
}

LuFactor lu_factor(const Matrix& j) {
  int bad = -1;
  LuFactor f = factor_impl(j, bad);
  if (bad >= 0)
    throw SingularSystemError(bad, "singular system: pivot " + std::to_string(bad) +
                                       " below 1e-14 * max|J|");
  return f;
}

double determinant(const Matrix& j) {
  int bad = -1;
  return factor_impl(j, bad).det;
}

BorderedSolution solve_bordered(const Matrix& j, const Vector& rhs, const std::optional<Border>& border) {
  if (!border) {
    const LuFactor f = lu_factor(j);
    return {f.solve(rhs), f.det_sign};
  }
  const std::size_t n = j.rows();
  Matrix big(n + 1, n + 1);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) big(r, c) = j(r, c);
  for (std::size_t r = 0; r < n; ++r) {
    big(r, n) = border->column[r];
    big(n, r) = border->row[r];
  }
  big(n, n) = border->corner;
  Vector full(n + 1);
  for (std::size_t r = 0; r < n; ++r) full[r] = rhs[r];
  full[n] = border->rhs;
  const LuFactor f = lu_factor(big);
  return {f.solve(full), f.det_sign};
}

Matrix tangent_basis(const Vector& normal) {
  const std::size_t n = normal.size();
  const double len = norm(normal);
  if (len == 0.0 || !std::isfinite(len))
    throw DegenerateConstraintError("constraint gradient vanishes; no tangent space");
  Vector u = normal;
  u[0] += std::copysign(len, normal[0]);
  const double uu = dot(u, u);
  Matrix basis(n, n - 1);
  for (std::size_t c = 1; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r)
      basis(r, c - 1) = (r == c ? 1.0 : 0.0) - 2.0 * u[r] * u[c] / uu;
  return basis;
}

Vector null_vector(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n != m + 1) throw UsageError("null_vector expects an m x (m+1) matrix");
  // Householder QR of A^t; the last column of Q spans ker(A).
  Matrix r = a.transpose();
  std::array<Vector, kMaxDim> reflectors{};
  for (std::size_t k = 0; k < m; ++k) {
    Vector u(n);
    double s = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      u[i] = r(i, k);
      s += u[i] * u[i];
    }
    const double len = std::sqrt(s);
    if (len == 0.0) {
      reflectors[k] = Vector(n);
      continue;
    }
    u[k] += std::copysign(len, u[k]);
    const double uu = dot(u, u);
    for (std::size_t c = k; c < m; ++c) {
      double proj = 0.0;
      for (std::size_t i = k; i < n; ++i) proj += u[i] * r(i, c);
      proj = 2.0 * proj / uu;
      for (std::size_t i = k; i < n; ++i) r(i, c) -= proj * u[i];
    }
    reflectors[k] = (1.0 / std::sqrt(uu)) * u;
  }
  Vector q(n);
  q[n - 1] = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const Vector& u = reflectors[k];
    const double proj = 2.0 * dot(u, q);
    for (std::size_t i = 0; i < n; ++i) q[i] -= proj * u[i];
  }
  return normalized(q);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw UsageError("log_grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(hi - lo) <= rel_tol * std::abs(mid) || mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cluster_bifurc::linalg
