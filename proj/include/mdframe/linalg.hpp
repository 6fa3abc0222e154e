#pragma once

// Small dense complex matrices and Hermitian spectral routines.

#include <complex>
#include <cstddef>
#include <vector>

#include "mdframe/laurent.hpp"

namespace mdframe {

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  CMatrix adjoint() const;
  double frobenius_norm() const noexcept;

  friend CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);
  friend CMatrix operator-(const CMatrix& lhs, const CMatrix& rhs);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> a_;
};

struct EigenResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns, only filled by hermitian_eigensystem
  bool converged = true;
  int sweeps = 0;
};

inline constexpr int kMaxJacobiSweeps = 30;

/// Cyclic complex Jacobi; the input is symmetrized first.
EigenResult hermitian_eigenvalues(const CMatrix& h);
EigenResult hermitian_eigensystem(const CMatrix& h);

/// Singular values (descending) by one-sided Jacobi, accurate for
/// sigma_min relative to sigma_max even when M is rank deficient.
std::vector<double> singular_values(const CMatrix& m);

struct GramInverse {
  CMatrix inverse;  // (M* M)^{-1}
  double condition = 1.0;
};

/// (M* M)^{-1} through the eigendecomposition of M* M; Singular when the
/// smallest eigenvalue is below 1e-12 of the largest.
GramInverse pinv_at(const CMatrix& m);

}  // namespace mdframe
