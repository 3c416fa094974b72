#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qrep/matrix.hpp"

namespace qrep {

/// U * A * V = D with U, V invertible over the ring and D diagonal with
/// d_0 | d_1 | ... ; nonzero diagonal entries are canonical associates.
struct SmithForm {
  Matrix U;
  Matrix D;
  Matrix V;
  std::size_t rank = 0;

  std::vector<Scalar> diagonal() const;
};

SmithForm smith_normal_form(const Matrix& a);

/// Inverse of a square matrix that is invertible over its ring (unimodular
/// over Z). Throws InvalidInput otherwise.
Matrix inverse(const Matrix& a);

Scalar determinant(const Matrix& a);

/// Canonical basis (reduced Hermite form, one column per basis vector) of the
/// lattice spanned by the columns of `spanning`.
Matrix hermite_basis(const Matrix& spanning);

std::size_t rank(const Matrix& a);

/// Basis of { x : a x = 0 }, columns in Hermite form.
Matrix kernel_basis(const Matrix& a);

/// Basis of { x : m x lies in the column span of `spanning` for some m != 0 }.
Matrix saturation(const Matrix& spanning);

/// Some x with a x = b (b may have several columns), or nothing.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Reusable factorization for many right-hand sides.
class LinearSolver {
 public:
  explicit LinearSolver(const Matrix& a);
  std::optional<Matrix> solve(const Matrix& b) const;
  const SmithForm& smith() const noexcept { return smith_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  SmithForm smith_;
};

/// Does column vector v lie in the column span of `spanning`?
bool in_span(const Matrix& spanning, const Matrix& v);
/// Column span of `inner` contained in the column span of `outer`?
bool span_contains(const Matrix& outer, const Matrix& inner);

/// Minimal presentation of a subquotient N / R of ring^m, where R ⊆ N are
/// given by spanning columns. N / R ≅ ⊕ ring/(d_i) ⊕ ring^f with the d_i
/// non-units, d_0 | d_1 | ...; `generators` holds one ambient vector per
/// summand (torsion summands first).
struct Subquotient {
  Matrix generators;               // m x k
  std::vector<Scalar> torsion;     // d_i for the first torsion.size() generators
  Matrix relation_span;            // spanning columns of R
  std::size_t free_rank = 0;

  std::size_t size() const noexcept { return generators.cols(); }
  /// Relation matrix of the intrinsic presentation (k x torsion.size()).
  Matrix relation_matrix() const;
  /// c with generators * c ≡ v (mod R), for v in N; nothing if v ∉ N.
  std::optional<Matrix> coordinates(const Matrix& v) const;
};

Subquotient present_subquotient(const Matrix& n_span, const Matrix& r_span);

}  // namespace qrep
