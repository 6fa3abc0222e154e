#pragma once

// Finite Laurent series in z = e^{2 pi i xi} and matrices of them.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mdframe {

using Complex = std::complex<double>;

class CMatrix;

class LaurentPoly {
 public:
  /// Sums and products drop coefficients below this fraction of their operands.
  static constexpr double kPruneThreshold = 1e-15;

  LaurentPoly() = default;
  LaurentPoly(Complex constant);  // NOLINT: implicit scalar promotion is intended

  static LaurentPoly monomial(int degree, Complex coeff = 1.0);
  /// coeffs[k] multiplies z^{low_degree + k}.
  static LaurentPoly from_coeffs(int low_degree, std::vector<Complex> coeffs);

  bool is_zero() const noexcept { return c_.empty(); }
  int low_degree() const noexcept { return lo_; }
  int high_degree() const noexcept { return lo_ + static_cast<int>(c_.size()) - 1; }
  std::span<const Complex> coeffs() const noexcept { return c_; }
  Complex coeff(int degree) const noexcept;

  /// P(e^{2 pi i xi}).
  Complex operator()(double xi) const;

  /// c_l -> conj(c_{-l}); the pointwise complex conjugate on |z| = 1.
  LaurentPoly conj_reflect() const;
  /// Multiplication by z^k.
  LaurentPoly shifted(int k) const;

  double max_abs_coeff() const noexcept;
  /// sum |c_l|^2, which equals the integral of |P|^2 over one period.
  double sum_sq() const noexcept;

  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(Complex s);

  friend LaurentPoly operator+(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs += rhs; }
  friend LaurentPoly operator-(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs -= rhs; }
  friend LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs);
  friend LaurentPoly operator*(LaurentPoly lhs, Complex s) { return lhs *= s; }
  friend LaurentPoly operator*(Complex s, LaurentPoly rhs) { return rhs *= s; }
  LaurentPoly operator-() const { return *this * Complex(-1.0); }

 private:
  void prune(double scale);

  int lo_ = 0;
  std::vector<Complex> c_;
};

/// Max coefficient distance between two Laurent polynomials.
double coeff_distance(const LaurentPoly& lhs, const LaurentPoly& rhs);

class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  static LaurentMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  LaurentPoly& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const LaurentPoly& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  /// Conjugate transpose on |z| = 1.
  LaurentMatrix adjoint() const;
  /// Entrywise pointwise conjugate (no transpose).
  LaurentMatrix conj() const;
  LaurentMatrix transpose() const;
  CMatrix eval_at(double xi) const;

  double max_abs_coeff() const noexcept;

  LaurentMatrix& operator*=(Complex s);
  friend LaurentMatrix operator*(const LaurentMatrix& lhs, const LaurentMatrix& rhs);
  friend LaurentMatrix operator*(LaurentMatrix lhs, Complex s) { return lhs *= s; }
  friend LaurentMatrix operator*(Complex s, LaurentMatrix rhs) { return rhs *= s; }
  friend LaurentMatrix operator+(const LaurentMatrix& lhs, const LaurentMatrix& rhs);
  friend LaurentMatrix operator-(const LaurentMatrix& lhs, const LaurentMatrix& rhs);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LaurentPoly> e_;
};

/// Max coefficient distance over all entries; shapes must agree.
double coeff_distance(const LaurentMatrix& lhs, const LaurentMatrix& rhs);

/// Exact determinant by Leibniz expansion; TooLarge for n > 6.
LaurentPoly laurent_det(const LaurentMatrix& m);

inline constexpr std::size_t kMaxLeibnizOrder = 6;

}  // namespace mdframe
