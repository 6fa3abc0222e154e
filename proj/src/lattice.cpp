#include "mdframe/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mdframe/error.hpp"

namespace mdframe {

namespace {

void require_coprime(int p, int q) {
  if (p < 1 || q < 1 || p > kMaxIndex || q > kMaxIndex)
    throw Error(ErrorCode::InvalidArgument, "p and q must lie in [1, 64], got (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  if (std::gcd(p, q) != 1)
    throw Error(ErrorCode::NonCoprime, "gcd(" + std::to_string(p) + ", " + std::to_string(q) + ") != 1");
}

}  // namespace

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

double MDParams::sqrt_delta_pow(std::int64_t k) const { return std::pow(delta_, 0.5 * static_cast<double>(k)); }

MDParams derive_params(double delta, int p, int q) {
  if (!(delta > 1.0) || !std::isfinite(delta))
    throw Error(ErrorCode::ScaleOutOfRange, "delta must be a finite number > 1");
  require_coprime(p, q);
  MDParams out;
  out.delta_ = delta;
  out.p_ = p;
  out.q_ = q;
  out.a_ = std::pow(delta, p);
  out.b_ = std::pow(delta, q);
  out.beta_ = std::pow(delta, p * q);
  out.bound_gap_ = std::pow(delta, q - 1);
  return out;
}

BezoutPair unique_bezout(int p, int q) {
  require_coprime(p, q);
  if (p == 1 || q == 1)
    throw Error(ErrorCode::DegenerateSetup, "the Bezout pair needs p, q > 1");
  // s' is the inverse of q modulo p (q s' = 1 mod p), so r' follows exactly.
  int s = 1;
  while ((static_cast<std::int64_t>(q) * s) % p != 1 % p) ++s;
  const int r = (p * q + 1 - q * s) / p;
  return {r, s};
}

ResidueMap::ResidueMap(int p, int q) : p_(p), q_(q) {
  require_coprime(p, q);
  const int pq = p * q;
  fwd_.resize(static_cast<std::size_t>(pq));
  inv_.assign(static_cast<std::size_t>(pq), {-1, -1});
  for (int r = 0; r < q; ++r) {
    for (int s = 0; s < p; ++s) {
      const int k = (p * r + q * s) % pq;
      fwd_[static_cast<std::size_t>(r * p + s)] = k;
      if (inv_[static_cast<std::size_t>(k)].first >= 0)
        throw Error(ErrorCode::NonCoprime, "residue map is not injective");
      inv_[static_cast<std::size_t>(k)] = {r, s};
    }
  }
}

int ResidueMap::forward(int r, int s) const {
  if (r < 0 || r >= q_ || s < 0 || s >= p_) throw Error(ErrorCode::IndexOutOfRange, "(r, s) outside N_q x N_p");
  return fwd_[static_cast<std::size_t>(r * p_ + s)];
}

std::pair<int, int> ResidueMap::inverse(int k) const {
  if (k < 0 || k >= p_ * q_) throw Error(ErrorCode::IndexOutOfRange, "residue outside N_pq");
  return inv_[static_cast<std::size_t>(k)];
}

ResidueMap residue_bijection(int p, int q) { return ResidueMap(p, q); }

PartitionCertificate partition_certificate(int p, int q) {
  require_coprime(p, q);
  const std::int64_t denom = static_cast<std::int64_t>(p) * q;
  PartitionCertificate cert;
  for (int r = 0; r < q; ++r) {
    for (int s = 0; s < p; ++s) {
      // r/q + s/p = (p r + q s)/pq; reduce the left endpoint mod 1.
      const std::int64_t lo = (static_cast<std::int64_t>(p) * r + static_cast<std::int64_t>(q) * s) % denom;
      cert.intervals.push_back({r, s, lo, lo + 1, denom});
    }
  }
  std::sort(cert.intervals.begin(), cert.intervals.end(),
            [](const RationalInterval& x, const RationalInterval& y) { return x.num_lo < y.num_lo; });

  cert.disjoint = true;
  cert.total_measure_num = 0;
  for (std::size_t k = 0; k < cert.intervals.size(); ++k) {
    cert.total_measure_num += cert.intervals[k].num_hi - cert.intervals[k].num_lo;
    if (k > 0 && cert.intervals[k].num_lo < cert.intervals[k - 1].num_hi) cert.disjoint = false;
  }
  cert.covers_unit_interval = cert.disjoint && cert.total_measure_num == denom &&
                              cert.intervals.front().num_lo == 0 && cert.intervals.back().num_hi == denom;
  for (std::size_t k = 1; k < cert.intervals.size() && cert.covers_unit_interval; ++k)
    cert.covers_unit_interval = cert.intervals[k].num_lo == cert.intervals[k - 1].num_hi;
  return cert;
}

namespace {

// [[0, I_{n-k}], [z^{power} I_k, 0]]
LaurentMatrix cyclic_block(std::size_t n, std::size_t k, int power) {
  LaurentMatrix out(n, n);
  for (std::size_t r = 0; r < n - k; ++r) out(r, r + k) = LaurentPoly(1.0);
  for (std::size_t r = 0; r < k; ++r) out(n - k + r, r) = LaurentPoly::monomial(power);
  return out;
}

}  // namespace

LaurentMatrix structural_matrix(const MDParams& params, StructuralKind kind, int m) {
  const auto p = static_cast<std::size_t>(params.p());
  const auto q = static_cast<std::size_t>(params.q());
  switch (kind) {
    case StructuralKind::Lq: {
      const BezoutPair bz = unique_bezout(params.p(), params.q());
      return cyclic_block(q, static_cast<std::size_t>(bz.r_prime), 1);
    }
    case StructuralKind::Rp: {
      const BezoutPair bz = unique_bezout(params.p(), params.q());
      return cyclic_block(p, p - static_cast<std::size_t>(bz.s_prime), -1);
    }
    case StructuralKind::Um:
      if (m < 0 || m >= params.q()) throw Error(ErrorCode::IndexOutOfRange, "U_m needs m in N_q");
      return cyclic_block(q, static_cast<std::size_t>(m), 1);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown structural matrix");
}

}  // namespace mdframe
