#pragma once

// Parameter arithmetic of a dilation-and-modulation system with
// dilation a = delta^p and modulation b = delta^q, gcd(p, q) = 1.

#include <cstdint>
#include <optional>
#include <vector>

#include "mdframe/laurent.hpp"

namespace mdframe {

inline constexpr int kMaxIndex = 64;

class MDParams {
 public:
  double delta() const noexcept { return delta_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double beta() const noexcept { return beta_; }
  /// a^{(q-1)/p} = delta^{q-1}: the forced ratio between frame bounds.
  double bound_gap() const noexcept { return bound_gap_; }
  /// delta^{k/2}
  double sqrt_delta_pow(std::int64_t k) const;

  friend bool operator==(const MDParams&, const MDParams&) = default;

 private:
  friend MDParams derive_params(double delta, int p, int q);
  MDParams() = default;

  double delta_ = 2.0;
  int p_ = 1;
  int q_ = 1;
  double a_ = 2.0;
  double b_ = 2.0;
  double beta_ = 2.0;
  double bound_gap_ = 1.0;
};

/// Throws ScaleOutOfRange for delta <= 1, NonCoprime when gcd(p, q) != 1,
/// InvalidArgument for p or q outside [1, 64].
MDParams derive_params(double delta, int p, int q);

struct BezoutPair {
  int r_prime;
  int s_prime;
  friend bool operator==(const BezoutPair&, const BezoutPair&) = default;
};

/// The unique (r', s') in [1, q-1] x [1, p-1] with p r' + q s' = p q + 1.
/// Requires p, q > 1 (DegenerateSetup otherwise).
BezoutPair unique_bezout(int p, int q);

/// (r, s) in N_q x N_p  ->  (p r + q s) mod p q, and its inverse.
class ResidueMap {
 public:
  ResidueMap(int p, int q);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int forward(int r, int s) const;
  /// Inverse image (r, s) of residue k in [0, pq).
  std::pair<int, int> inverse(int k) const;

 private:
  int p_;
  int q_;
  std::vector<int> fwd_;  // indexed r * p + s
  std::vector<std::pair<int, int>> inv_;
};

ResidueMap residue_bijection(int p, int q);

/// Half-open interval [num_lo, num_hi) / denom of [0, 1), tagged by (r, s).
struct RationalInterval {
  int r;
  int s;
  std::int64_t num_lo;
  std::int64_t num_hi;
  std::int64_t denom;
};

/// The pq intervals (r/q + s/p + [0, 1/pq)) mod 1, together with an
/// integer-only proof that they are disjoint and cover [0, 1).
struct PartitionCertificate {
  std::vector<RationalInterval> intervals;  // sorted by num_lo
  bool disjoint = false;
  bool covers_unit_interval = false;
  std::int64_t total_measure_num = 0;  // over denom p q
};

PartitionCertificate partition_certificate(int p, int q);

enum class StructuralKind { Lq, Rp, Um };

/// L_q, R_p or U_m as Laurent matrices in z = e^{2 pi i xi}.
LaurentMatrix structural_matrix(const MDParams& params, StructuralKind kind, int m = 0);

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept;

}  // namespace mdframe
