#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qrep/matrix.hpp"

namespace qrep {

/// Linear equations whose unknowns are matrices. Each equation has the form
///
///     sum_k  L_k * X_{b_k} * R_k  +  C   ∈   colspan(Mod)   (column by column)
///
/// which covers well-definedness of maps on presentations, commuting squares
/// and factorization problems. Congruences are turned into equalities by an
/// auxiliary unknown W with  ... = Mod * W.
class LinearSystem {
 public:
  using Block = std::size_t;

  struct Term {
    Matrix left;
    Block unknown;
    Matrix right;
  };

  explicit LinearSystem(CoefficientRing ring) : ring_(ring) {}

  Block add_unknown(std::size_t rows, std::size_t cols);
  /// `modulus` may have zero columns (plain equality).
  void add_equation(const std::vector<Term>& terms, const Matrix* constant, const Matrix& modulus);

  std::size_t unknown_count() const noexcept { return width_; }
  const Matrix& coefficients() const noexcept { return a_; }

  /// One solution (all blocks, auxiliary ones included), or nothing.
  std::optional<std::vector<Matrix>> solve() const;
  /// Spanning set of the homogeneous solution lattice projected onto the
  /// listed blocks: columns are stacked row-major vecs of those blocks.
  Matrix homogeneous_projection(const std::vector<Block>& blocks) const;
  std::size_t projected_size(const std::vector<Block>& blocks) const;

  std::vector<Matrix> split(const Matrix& solution) const;
  /// Inverse of the stacking used by homogeneous_projection.
  std::vector<Matrix> split_projected(const Matrix& column, const std::vector<Block>& blocks) const;

  const CoefficientRing& ring() const noexcept { return ring_; }

 private:
  struct Shape {
    std::size_t rows;
    std::size_t cols;
    std::size_t offset;
  };

  CoefficientRing ring_;
  std::vector<Shape> shapes_;
  std::size_t width_ = 0;
  // Equations are stored as coefficient blocks against the unknowns known at
  // the time; later unknowns get zero columns.
  std::vector<std::vector<std::pair<std::size_t, Matrix>>> rows_;  // per equation: (block, coeff)
  std::vector<Matrix> rhs_;
  mutable Matrix a_;
  mutable Matrix b_;
  mutable bool assembled_ = false;

  void assemble() const;
};

}  // namespace qrep
