#pragma once

// Small dense kernels for systems of dimension <= 8. Everything lives on the
// stack; there is no dynamic allocation in the hot path of the corrector.

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace cluster_bifurc::linalg {

inline constexpr std::size_t kMaxDim = 8;

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  Vector(std::initializer_list<double> values);
  explicit Vector(std::span<const double> values);

  std::size_t size() const noexcept { return size_; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double* begin() noexcept { return data_.data(); }
  double* end() noexcept { return data_.data() + size_; }
  const double* begin() const noexcept { return data_.data(); }
  const double* end() const noexcept { return data_.data() + size_; }
  std::span<const double> span() const noexcept { return {data_.data(), size_}; }
  std::vector<double> to_std() const { return {begin(), end()}; }

  Vector& operator+=(const Vector& o) noexcept;
  Vector& operator-=(const Vector& o) noexcept;
  Vector& operator*=(double s) noexcept;

  friend bool operator==(const Vector& x, const Vector& y) noexcept;

 private:
  std::size_t size_ = 0;
  std::array<double, kMaxDim> data_{};
};

Vector operator+(Vector x, const Vector& y) noexcept;
Vector operator-(Vector x, const Vector& y) noexcept;
Vector operator*(double s, Vector x) noexcept;
Vector operator-(Vector x) noexcept;

double dot(const Vector& x, const Vector& y) noexcept;
double norm(const Vector& x) noexcept;
double norm_inf(const Vector& x) noexcept;
Vector normalized(const Vector& x);

/// Row-major rows x cols matrix, both <= kMaxDim.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * kMaxDim + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * kMaxDim + j]; }

  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, const Vector& v);
  Matrix transpose() const;

  friend bool operator==(const Matrix& x, const Matrix& y) noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::array<double, kMaxDim * kMaxDim> data_{};
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);

double frobenius_norm(const Matrix& a) noexcept;
double max_abs(const Matrix& a) noexcept;
/// max |a_ij - a_ji|
double asymmetry(const Matrix& a) noexcept;

struct SymEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< column k pairs with values[k]
};

/// Cyclic Jacobi rotations. Throws UsageError if ||M - M^t|| >= 1e-10 ||M||.
SymEigen sym_eigen(const Matrix& m);

/// Number of eigenvalues below zero; the sign of det is (-1)^count.
std::size_t negative_count(const SymEigen& eig) noexcept;

struct LuFactor {
  Matrix lu;
  std::array<std::size_t, kMaxDim> perm{};
  int det_sign = 1;
  double det = 1.0;
  std::size_t n = 0;

  Vector solve(const Vector& rhs) const;
};

/// Partial pivot LU. Throws SingularSystemError when a pivot drops below
/// 1e-14 * max|J|.
LuFactor lu_factor(const Matrix& j);

/// Determinant through the same factorization, without the singularity check.
double determinant(const Matrix& j);

struct Border {
  Vector column;   ///< appended as the last column
  Vector row;      ///< appended as the last row
  double corner = 0.0;
  double rhs = 0.0;
};

struct BorderedSolution {
  Vector x;
  int det_sign = 1;
};

/// Solves J x = rhs, or the (n+1) system [[J, col], [row^t, corner]] when a
/// border is given. det_sign refers to the (bordered) matrix.
BorderedSolution solve_bordered(const Matrix& j, const Vector& rhs,
                                const std::optional<Border>& border = std::nullopt);

/// Orthonormal basis (as n x (n-1) columns) of the complement of `normal`,
/// from the Householder reflector of the 1 x n row. Deterministic.
Matrix tangent_basis(const Vector& normal);

/// Unit vector spanning the kernel of a full-rank m x (m+1) matrix.
Vector null_vector(const Matrix& a);

// Scalar helpers used by the boundary scans.

std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Bisection on a sign-changing bracket until |hi - lo| <= rel_tol * |mid|.
double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

}  // namespace cluster_bifurc::linalg
