#include "mdframe/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mdframe/error.hpp"
#include "mdframe/linalg.hpp"

namespace mdframe {

LaurentPoly::LaurentPoly(Complex constant) : lo_(0), c_{constant} { prune(0.0); }

LaurentPoly LaurentPoly::monomial(int degree, Complex coeff) {
  LaurentPoly out;
  out.lo_ = degree;
  out.c_ = {coeff};
  out.prune(0.0);
  return out;
}

LaurentPoly LaurentPoly::from_coeffs(int low_degree, std::vector<Complex> coeffs) {
  LaurentPoly out;
  out.lo_ = low_degree;
  out.c_ = std::move(coeffs);
  out.prune(0.0);
  return out;
}

void LaurentPoly::prune(double scale) {
  const double cut = kPruneThreshold * scale;
  for (auto& c : c_) {
    if (std::abs(c) <= cut) c = 0.0;
  }
  auto first = std::find_if(c_.begin(), c_.end(), [](Complex c) { return c != 0.0; });
  if (first == c_.end()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  auto last = std::find_if(c_.rbegin(), c_.rend(), [](Complex c) { return c != 0.0; }).base();
  lo_ += static_cast<int>(first - c_.begin());
  c_ = std::vector<Complex>(first, last);
}

Complex LaurentPoly::coeff(int degree) const noexcept {
  const int k = degree - lo_;
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

Complex LaurentPoly::operator()(double xi) const {
  if (c_.empty()) return 0.0;
  const double turn = 2.0 * std::numbers::pi * xi;
  const Complex z = std::polar(1.0, turn);
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc * std::polar(1.0, turn * lo_);
}

LaurentPoly LaurentPoly::conj_reflect() const {
  LaurentPoly out;
  if (c_.empty()) return out;
  out.lo_ = -high_degree();
  out.c_.resize(c_.size());
  std::transform(c_.rbegin(), c_.rend(), out.c_.begin(), [](Complex c) { return std::conj(c); });
  return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly out = *this;
  if (!out.c_.empty()) out.lo_ += k;
  return out;
}

double LaurentPoly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (auto c : c_) m = std::max(m, std::abs(c));
  return m;
}

double LaurentPoly::sum_sq() const noexcept {
  return std::accumulate(c_.begin(), c_.end(), 0.0, [](double s, Complex c) { return s + std::norm(c); });
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  if (rhs.c_.empty()) return *this;
  if (c_.empty()) {
    *this = rhs;
    return *this;
  }
  const int lo = std::min(lo_, rhs.lo_);
  const int hi = std::max(high_degree(), rhs.high_degree());
  std::vector<Complex> sum(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t k = 0; k < c_.size(); ++k) sum[k + static_cast<std::size_t>(lo_ - lo)] += c_[k];
  for (std::size_t k = 0; k < rhs.c_.size(); ++k) sum[k + static_cast<std::size_t>(rhs.lo_ - lo)] += rhs.c_[k];
  const double scale = std::max(max_abs_coeff(), rhs.max_abs_coeff());
  lo_ = lo;
  c_ = std::move(sum);
  prune(scale);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) { return *this += -rhs; }

LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs) {
  LaurentPoly out;
  if (lhs.c_.empty() || rhs.c_.empty()) return out;
  out.lo_ = lhs.lo_ + rhs.lo_;
  out.c_.assign(lhs.c_.size() + rhs.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.c_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) out.c_[i + j] += lhs.c_[i] * rhs.c_[j];
  }
  out.prune(lhs.max_abs_coeff() * rhs.max_abs_coeff());
  return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

LaurentPoly& LaurentPoly::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  prune(0.0);
  return *this;
}

double coeff_distance(const LaurentPoly& lhs, const LaurentPoly& rhs) {
  double d = 0.0;
  const int lo = std::min(lhs.low_degree(), rhs.low_degree());
  const int hi = std::max(lhs.high_degree(), rhs.high_degree());
  for (int k = lo; k <= hi; ++k) d = std::max(d, std::abs(lhs.coeff(k) - rhs.coeff(k)));
  return d;
}

LaurentMatrix LaurentMatrix::identity(std::size_t n) {
  LaurentMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) out(k, k) = LaurentPoly(1.0);
  return out;
}

LaurentMatrix LaurentMatrix::adjoint() const {
  LaurentMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c).conj_reflect();
  return out;
}

LaurentMatrix LaurentMatrix::conj() const {
  LaurentMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].conj_reflect();
  return out;
}

LaurentMatrix LaurentMatrix::transpose() const {
  LaurentMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

CMatrix LaurentMatrix::eval_at(double xi) const {
  CMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c)(xi);
  return out;
}

double LaurentMatrix::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& e : e_) m = std::max(m, e.max_abs_coeff());
  return m;
}

LaurentMatrix& LaurentMatrix::operator*=(Complex s) {
  for (auto& e : e_) e *= s;
  return *this;
}

LaurentMatrix operator*(const LaurentMatrix& lhs, const LaurentMatrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw Error(ErrorCode::InvalidArgument, "LaurentMatrix product shape mismatch");
  LaurentMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t r = 0; r < lhs.rows_; ++r) {
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      LaurentPoly acc;
      for (std::size_t k = 0; k < lhs.cols_; ++k) {
        if (lhs(r, k).is_zero() || rhs(k, c).is_zero()) continue;
        acc += lhs(r, k) * rhs(k, c);
      }
      out(r, c) = std::move(acc);
    }
  }
  return out;
}

namespace {

LaurentMatrix combine(const LaurentMatrix& lhs, const LaurentMatrix& rhs, double sign) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw Error(ErrorCode::InvalidArgument, "LaurentMatrix shape mismatch");
  LaurentMatrix out(lhs.rows(), lhs.cols());
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c) out(r, c) = lhs(r, c) + rhs(r, c) * Complex(sign);
  return out;
}

}  // namespace

LaurentMatrix operator+(const LaurentMatrix& lhs, const LaurentMatrix& rhs) { return combine(lhs, rhs, 1.0); }
LaurentMatrix operator-(const LaurentMatrix& lhs, const LaurentMatrix& rhs) { return combine(lhs, rhs, -1.0); }

double coeff_distance(const LaurentMatrix& lhs, const LaurentMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw Error(ErrorCode::InvalidArgument, "coeff_distance needs matrices of equal shape");
  double d = 0.0;
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c) d = std::max(d, coeff_distance(lhs(r, c), rhs(r, c)));
  return d;
}

LaurentPoly laurent_det(const LaurentMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n > kMaxLeibnizOrder) throw Error(ErrorCode::TooLarge, "Leibniz determinant limited to order 6");
  if (n == 0) return LaurentPoly(1.0);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  LaurentPoly det;
  do {
    // parity by counting inversions
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    LaurentPoly term(inversions % 2 == 0 ? 1.0 : -1.0);
    for (std::size_t r = 0; r < n && !term.is_zero(); ++r) term *= m(r, perm[r]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace mdframe
