#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrep/representation.hpp"

namespace qrep {

/// Finite linear combination of paths. Multiplication is composition:
/// in s*t the paths of t are traversed first; non-composable products vanish.
class PathRingElement {
 public:
  explicit PathRingElement(CoefficientRing ring = CoefficientRing::integers()) : ring_(ring) {}

  static PathRingElement path(const CoefficientRing& ring, const Path& p, const Scalar& c = 1);
  static PathRingElement vertex(const CoefficientRing& ring, std::size_t v);
  /// Sum of all vertex idempotents: the unit of the path ring of a finite quiver.
  static PathRingElement one(const Quiver& q, const CoefficientRing& ring);

  const CoefficientRing& ring() const noexcept { return ring_; }
  const std::map<Path, Scalar>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  friend PathRingElement operator+(const PathRingElement& a, const PathRingElement& b);
  friend PathRingElement operator-(const PathRingElement& a, const PathRingElement& b);
  friend PathRingElement operator*(const PathRingElement& a, const PathRingElement& b);
  PathRingElement scaled(const Scalar& c) const;
  friend bool operator==(const PathRingElement& a, const PathRingElement& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  std::string to_string(const Quiver& q) const;

 private:
  CoefficientRing ring_;
  std::map<Path, Scalar> terms_;
  void add_term(const Path& p, const Scalar& c);
};

/// p · x for x at p's start; throws InvalidInput on a vertex mismatch.
RepElement act_path(const Representation& x, const Path& p, const RepElement& e);
/// s · x in the total module ⊕_v X(v).
RepVector act(const PathRingElement& s, const Representation& x, const RepVector& v);
RepVector act(const PathRingElement& s, const Representation& x, const RepElement& e);
/// Images of every vertex generator of X under s.
std::vector<RepVector> act_on_generators(const PathRingElement& s, const Representation& x);

/// X(v_i) = E^n with every arrow acting as (x_1..x_n) -> (x_n, x_1, .., x_{n-1}).
Representation nloop_rep(std::size_t n, const FGModule& e);

/// The element (sum of the n full cycles, one starting at each vertex) - 1.
PathRingElement loop_annihilator(const Quiver& q, const CoefficientRing& ring);

struct AnnihilatorReport {
  bool vacuous = false;         // X = 0
  bool annihilates = false;     // s·g = 0 for every vertex generator g
  bool s_nonzero = false;
  bool conditions_i = false;
  bool conditions_ii = false;
  bool divisible = true;        // false once a nonzero m outside s·X is exhibited
  bool injective = true;        // not divisible => not injective
  std::string element;          // s, written out
  std::optional<RepElement> witness;  // nonzero m with no x solving s·x = m
  std::string summary() const;
};

/// Throws InvalidInput unless the quiver is a single oriented cycle.
AnnihilatorReport annihilator_witness(const Representation& x);

}  // namespace qrep
