#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>

namespace qrep {

/// Every scalar is an exact rational. Over the integers the denominator is
/// always 1; over F_p the value is the canonical residue in [0, p).
using Scalar = mpq_class;

enum class RingKind { Integers, Rationals, PrimeField };

/// Result of an extended gcd: g = s*a + t*b.
struct Bezout {
  Scalar g;
  Scalar s;
  Scalar t;
};

/// One of the three supported coefficient rings. All three are Euclidean
/// domains, so the same Smith/Hermite code runs over each of them.
class CoefficientRing {
 public:
  CoefficientRing() = default;  // the integers

  static CoefficientRing integers() { return CoefficientRing(RingKind::Integers, 0); }
  static CoefficientRing rationals() { return CoefficientRing(RingKind::Rationals, 0); }
  /// Throws InvalidInput unless p is prime.
  static CoefficientRing prime_field(std::uint64_t p);
  /// Accepts "Z", "Q", "F<p>" (also "Fp:<p>", "GF(<p>)").
  static CoefficientRing parse(std::string_view text);

  RingKind kind() const noexcept { return kind_; }
  std::uint64_t characteristic() const noexcept { return p_; }
  bool is_field() const noexcept { return kind_ != RingKind::Integers; }
  bool is_finite() const noexcept { return kind_ == RingKind::PrimeField; }
  std::string symbol() const;

  // Ring metadata. Torsion-free injective integer modules are rational vector
  // spaces, which are closed under direct sums; over a field every module is
  // injective. Fields and the integers are Prüfer domains.
  bool satisfies_A() const noexcept { return true; }
  bool is_prufer() const noexcept { return true; }

  /// Canonical representative; throws InvalidInput for a non-integer over Z
  /// or a denominator divisible by p over F_p.
  Scalar normalize(const Scalar& x) const;
  Scalar from_int(long v) const { return normalize(Scalar(v)); }

  Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
  Scalar neg(const Scalar& a) const { return reduce(-a); }

  bool is_unit(const Scalar& a) const;
  /// Inverse of a unit; throws std::domain_error otherwise.
  Scalar inverse(const Scalar& a) const;
  /// Euclidean norm used for pivot selection: |a| over Z, 0/1 over fields.
  mpz_class norm(const Scalar& a) const;
  /// a = q*b + r with norm(r) < norm(b); b must be nonzero.
  std::pair<Scalar, Scalar> divmod(const Scalar& a, const Scalar& b) const;
  bool divides(const Scalar& a, const Scalar& b) const;
  Bezout gcdext(const Scalar& a, const Scalar& b) const;
  /// Unit u such that u*a is the canonical associate (nonnegative over Z,
  /// 1 over a field). Returns 1 for a = 0.
  Scalar normalizing_unit(const Scalar& a) const;

  std::string format(const Scalar& a) const;

  friend bool operator==(const CoefficientRing& a, const CoefficientRing& b) noexcept {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }
  friend bool operator!=(const CoefficientRing& a, const CoefficientRing& b) noexcept {
    return !(a == b);
  }

 private:
  CoefficientRing(RingKind kind, std::uint64_t p) : kind_(kind), p_(p) {}
  Scalar reduce(const Scalar& x) const;

  RingKind kind_ = RingKind::Integers;
  std::uint64_t p_ = 0;
};

std::string format_scalar(const Scalar& a);

}  // namespace qrep
