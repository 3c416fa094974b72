#include "qrep/linear_system.hpp"

#include "qrep/error.hpp"
#include "qrep/lattice.hpp"

namespace qrep {

LinearSystem::Block LinearSystem::add_unknown(std::size_t rows, std::size_t cols) {
  shapes_.push_back({rows, cols, width_});
  width_ += rows * cols;
  assembled_ = false;
  return shapes_.size() - 1;
}

void LinearSystem::add_equation(const std::vector<Term>& terms, const Matrix* constant,
                                const Matrix& modulus) {
  std::size_t p = 0, q = 0;
  bool shaped = false;
  std::vector<std::pair<std::size_t, Matrix>> coeffs;
  for (const auto& t : terms) {
    const Shape& s = shapes_.at(t.unknown);
    if (t.left.cols() != s.rows || t.right.rows() != s.cols) {
      throw InvalidInput("linear system: term shape does not match its unknown");
    }
    if (!shaped) {
      p = t.left.rows();
      q = t.right.cols();
      shaped = true;
    } else if (t.left.rows() != p || t.right.cols() != q) {
      throw InvalidInput("linear system: terms of one equation differ in shape");
    }
    // vec_r(L X R) = (L ⊗ R^T) vec_r(X)
    coeffs.emplace_back(t.unknown, Matrix::kron(t.left, t.right.transpose()));
  }
  if (constant) {
    if (shaped && (constant->rows() != p || constant->cols() != q)) {
      throw InvalidInput("linear system: constant shape mismatch");
    }
    p = constant->rows();
    q = constant->cols();
    shaped = true;
  }
  if (!shaped) return;
  if (modulus.rows() != p) throw InvalidInput("linear system: modulus height mismatch");
  if (modulus.cols() > 0) {
    const Block w = add_unknown(modulus.cols(), q);
    coeffs.emplace_back(w, Matrix::kron(-modulus, Matrix::identity(ring_, q)));
  }
  rows_.push_back(std::move(coeffs));
  rhs_.push_back(constant ? -constant->vec() : Matrix(ring_, p * q, 1));
  assembled_ = false;
}

void LinearSystem::assemble() const {
  if (assembled_) return;
  std::size_t height = 0;
  for (const auto& r : rhs_) height += r.rows();
  a_ = Matrix(ring_, height, width_);
  b_ = Matrix(ring_, height, 1);
  std::size_t row = 0;
  for (std::size_t e = 0; e < rows_.size(); ++e) {
    for (const auto& [block, coeff] : rows_[e]) {
      const Shape& s = shapes_[block];
      // accumulate: the same unknown may appear twice in one equation
      for (std::size_t i = 0; i < coeff.rows(); ++i)
        for (std::size_t j = 0; j < coeff.cols(); ++j) {
          if (coeff(i, j) == 0) continue;
          a_.raw(row + i, s.offset + j) = ring_.add(a_(row + i, s.offset + j), coeff(i, j));
        }
    }
    b_.set_block(row, 0, rhs_[e]);
    row += rhs_[e].rows();
  }
  assembled_ = true;
}

std::optional<std::vector<Matrix>> LinearSystem::solve() const {
  assemble();
  if (width_ == 0) {
    if (!b_.is_zero()) return std::nullopt;
    return split(Matrix(ring_, 0, 1));
  }
  if (a_.rows() == 0) return split(Matrix(ring_, width_, 1));
  auto x = qrep::solve(a_, b_);
  if (!x) return std::nullopt;
  return split(*x);
}

std::size_t LinearSystem::projected_size(const std::vector<Block>& blocks) const {
  std::size_t n = 0;
  for (Block b : blocks) n += shapes_.at(b).rows * shapes_.at(b).cols;
  return n;
}

Matrix LinearSystem::homogeneous_projection(const std::vector<Block>& blocks) const {
  assemble();
  const std::size_t out_rows = projected_size(blocks);
  Matrix kernel = a_.rows() == 0 ? Matrix::identity(ring_, width_) : kernel_basis(a_);
  Matrix out(ring_, out_rows, kernel.cols());
  std::size_t r = 0;
  for (Block b : blocks) {
    const Shape& s = shapes_[b];
    out.set_block(r, 0, kernel.rows_range(s.offset, s.rows * s.cols));
    r += s.rows * s.cols;
  }
  return out;
}

std::vector<Matrix> LinearSystem::split(const Matrix& solution) const {
  std::vector<Matrix> out;
  for (const auto& s : shapes_) {
    out.push_back(Matrix::unvec(solution.rows_range(s.offset, s.rows * s.cols), s.rows, s.cols));
  }
  return out;
}

std::vector<Matrix> LinearSystem::split_projected(const Matrix& column,
                                                  const std::vector<Block>& blocks) const {
  std::vector<Matrix> out;
  std::size_t r = 0;
  for (Block b : blocks) {
    const Shape& s = shapes_.at(b);
    out.push_back(Matrix::unvec(column.rows_range(r, s.rows * s.cols), s.rows, s.cols));
    r += s.rows * s.cols;
  }
  return out;
}

}  // namespace qrep
