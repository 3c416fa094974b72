#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qrep/ring.hpp"

namespace qrep {

/// Dense exact matrix over a coefficient ring. Entries are always stored in
/// the ring's canonical form; every arithmetic operation re-normalizes.
/// Vectors are matrices with one column.
class Matrix {
 public:
  Matrix() = default;
  Matrix(CoefficientRing ring, std::size_t rows, std::size_t cols);

  static Matrix identity(CoefficientRing ring, std::size_t n);
  static Matrix from_rows(CoefficientRing ring, const std::vector<std::vector<Scalar>>& rows);
  static Matrix from_rows(CoefficientRing ring, std::initializer_list<std::initializer_list<long>> rows);
  /// Rows of a matrix with a known column count; handles the 0-row case.
  static Matrix from_rows(CoefficientRing ring, std::size_t cols,
                          const std::vector<std::vector<Scalar>>& rows);
  static Matrix column(CoefficientRing ring, const std::vector<Scalar>& entries);
  static Matrix column(CoefficientRing ring, std::initializer_list<long> entries);
  static Matrix unit_vector(CoefficientRing ring, std::size_t n, std::size_t i);

  const CoefficientRing& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Scalar& v);
  /// Raw mutable access for in-place algorithms; the caller keeps entries canonical.
  Scalar& raw(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Matrix col(std::size_t j) const;
  Matrix row(std::size_t i) const;
  Matrix columns(std::size_t first, std::size_t count) const;
  Matrix rows_range(std::size_t first, std::size_t count) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_columns(const std::vector<std::size_t>& idx) const;

  Matrix transpose() const;
  Matrix scaled(const Scalar& c) const;
  bool is_zero() const;
  bool is_identity() const;

  /// Row-major flattening into a single column, and its inverse.
  Matrix vec() const;
  static Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  Matrix operator-() const;
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  static Matrix hstack(const CoefficientRing& ring, const std::vector<Matrix>& parts, std::size_t rows);
  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const CoefficientRing& ring, const std::vector<Matrix>& parts, std::size_t cols);
  static Matrix vstack(const Matrix& a, const Matrix& b);
  static Matrix block_diag(const CoefficientRing& ring, const std::vector<Matrix>& parts);
  static Matrix kron(const Matrix& a, const Matrix& b);

  std::vector<std::vector<Scalar>> to_rows() const;
  std::string to_string() const;

 private:
  CoefficientRing ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace qrep
