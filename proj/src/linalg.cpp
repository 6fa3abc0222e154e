#include "mdframe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdframe/error.hpp"

namespace mdframe {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) out(k, k) = 1.0;
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double CMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (auto v : a_) s += std::norm(v);
  return std::sqrt(s);
}

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw Error(ErrorCode::InvalidArgument, "CMatrix product shape mismatch");
  CMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t r = 0; r < lhs.rows_; ++r)
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const Complex v = lhs(r, k);
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += v * rhs(k, c);
    }
  return out;
}

CMatrix operator-(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.rows_ != rhs.rows_ || lhs.cols_ != rhs.cols_)
    throw Error(ErrorCode::InvalidArgument, "CMatrix shape mismatch");
  CMatrix out = lhs;
  for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] -= rhs.a_[k];
  return out;
}

namespace {

double off_diagonal_norm(const CMatrix& h) {
  double s = 0.0;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c)
      if (r != c) s += std::norm(h(r, c));
  return std::sqrt(s);
}

EigenResult jacobi(const CMatrix& input, bool want_vectors) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::InvalidArgument, "eigenvalues of a non-square matrix");
  const std::size_t n = input.rows();

  CMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    h(r, r) = input(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex v = 0.5 * (input(r, c) + std::conj(input(c, r)));
      h(r, c) = v;
      h(c, r) = std::conj(v);
    }
  }
  CMatrix v = CMatrix::identity(n);

  EigenResult out;
  const double scale = h.frobenius_norm();
  const double target = 1e-14 * scale;
  out.converged = false;
  for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(h) <= target) {
      out.converged = true;
      out.sweeps = sweep;
      break;
    }
    if (sweep == kMaxJacobiSweeps) {
      out.sweeps = sweep;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(h(p, q));
        if (mag == 0.0) continue;
        // Phase-rotate (p, q) to a real entry, then apply the real symmetric Schur rotation.
        const Complex phase = h(p, q) / mag;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex g00 = c, g01 = s;
        const Complex g10 = -s * std::conj(phase), g11 = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(k, p), hq = h(k, q);
          h(k, p) = hp * g00 + hq * g10;
          h(k, q) = hp * g01 + hq * g11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(p, k), hq = h(q, k);
          h(p, k) = std::conj(g00) * hp + std::conj(g10) * hq;
          h(q, k) = std::conj(g01) * hp + std::conj(g11) * hq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vp = v(k, p), vq = v(k, q);
            v(k, p) = vp * g00 + vq * g10;
            v(k, q) = vp * g01 + vq * g11;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return h(i, i).real() < h(j, j).real(); });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = h(order[k], order[k]).real();
  if (want_vectors) {
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace

EigenResult hermitian_eigenvalues(const CMatrix& h) { return jacobi(h, false); }
EigenResult hermitian_eigensystem(const CMatrix& h) { return jacobi(h, true); }

std::vector<double> singular_values(const CMatrix& m) {
  // One-sided Jacobi on the columns of m.
  CMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < rows; ++k) {
          const Complex ap = a(k, p);
          const Complex aq = a(k, q) * std::conj(phase);
          a(k, p) = c * ap - s * aq;
          a(k, q) = (s * ap + c * aq) * phase;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += std::norm(a(k, c));
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

GramInverse pinv_at(const CMatrix& m) {
  const CMatrix gram = m.adjoint() * m;
  const EigenResult eig = hermitian_eigensystem(gram);
  const std::size_t n = gram.rows();
  GramInverse out;
  out.inverse = CMatrix(n, n);
  if (n == 0) return out;
  const double lo = eig.values.front(), hi = eig.values.back();
  if (!(hi > 0.0) || lo < 1e-12 * hi) throw Error(ErrorCode::Singular, "Gram matrix is numerically singular");
  out.condition = hi / lo;
  for (std::size_t k = 0; k < n; ++k) {
    const double inv = 1.0 / eig.values[k];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        out.inverse(r, c) += eig.vectors(r, k) * inv * std::conj(eig.vectors(c, k));
  }
  return out;
}

}  // namespace mdframe
