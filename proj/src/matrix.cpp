#include "qrep/matrix.hpp"

#include <sstream>

#include "qrep/error.hpp"

namespace qrep {

namespace {

void require_same_ring(const Matrix& a, const Matrix& b, const char* op) {
  if (a.ring() != b.ring()) {
    throw Incompatible(std::string("matrix ") + op + " across rings " + a.ring().symbol() +
                       " and " + b.ring().symbol());
  }
}

}  // namespace

Matrix::Matrix(CoefficientRing ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(CoefficientRing ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

Matrix Matrix::from_rows(CoefficientRing ring, const std::vector<std::vector<Scalar>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  return from_rows(ring, cols, rows);
}

Matrix Matrix::from_rows(CoefficientRing ring, std::size_t cols,
                         const std::vector<std::vector<Scalar>>& rows) {
  Matrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidInput("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.data_[i * cols + j] = ring.normalize(rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_rows(CoefficientRing ring,
                         std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Scalar>> rr;
  for (const auto& r : rows) {
    std::vector<Scalar> row;
    for (long v : r) row.emplace_back(v);
    rr.push_back(std::move(row));
  }
  return from_rows(ring, rr);
}

Matrix Matrix::column(CoefficientRing ring, const std::vector<Scalar>& entries) {
  Matrix m(ring, entries.size(), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) m.data_[i] = ring.normalize(entries[i]);
  return m;
}

Matrix Matrix::column(CoefficientRing ring, std::initializer_list<long> entries) {
  std::vector<Scalar> e;
  for (long v : entries) e.emplace_back(v);
  return column(ring, e);
}

Matrix Matrix::unit_vector(CoefficientRing ring, std::size_t n, std::size_t i) {
  Matrix m(ring, n, 1);
  m.data_[i] = 1;
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
  data_[i * cols_ + j] = ring_.normalize(v);
}

Matrix Matrix::col(std::size_t j) const { return block(0, j, rows_, 1); }
Matrix Matrix::row(std::size_t i) const { return block(i, 0, 1, cols_); }
Matrix Matrix::columns(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}
Matrix Matrix::rows_range(std::size_t first, std::size_t count) const {
  return block(first, 0, count, cols_);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
  Matrix m(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m.data_[i * nc + j] = data_[(r0 + i) * cols_ + c0 + j];
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
    throw std::out_of_range("matrix set_block out of range");
  }
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) data_[(r0 + i) * cols_ + c0 + j] = b(i, j);
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(ring_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) m.data_[i * idx.size() + k] = (*this)(i, idx[k]);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.data_[j * rows_ + i] = data_[i * cols_ + j];
  return m;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix m = *this;
  const Scalar cc = ring_.normalize(c);
  for (auto& x : m.data_) x = ring_.mul(x, cc);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Matrix Matrix::vec() const {
  Matrix v(ring_, rows_ * cols_, 1);
  v.data_ = data_;
  return v;
}

Matrix Matrix::unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols_ != 1 || v.rows_ != rows * cols) throw InvalidInput("unvec shape mismatch");
  Matrix m(v.ring_, rows, cols);
  m.data_ = v.data_;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "sum");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("matrix sum shape mismatch");
  Matrix m = a;
  for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] = a.ring_.add(a.data_[k], b.data_[k]);
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "difference");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw InvalidInput("matrix difference shape mismatch");
  }
  Matrix m = a;
  for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] = a.ring_.sub(a.data_[k], b.data_[k]);
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& x : m.data_) x = ring_.neg(x);
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "product");
  if (a.cols_ != b.rows_) {
    throw InvalidInput("matrix product shape mismatch (" + std::to_string(a.rows_) + "x" +
                       std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                       std::to_string(b.cols_) + ")");
  }
  Matrix m(a.ring_, a.rows_, b.cols_);
  Scalar acc;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      acc = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a.data_[i * a.cols_ + k];
        if (x == 0) continue;
        acc += x * b.data_[k * b.cols_ + j];
      }
      m.data_[i * b.cols_ + j] = a.ring_.normalize(acc);
    }
  }
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix Matrix::hstack(const CoefficientRing& ring, const std::vector<Matrix>& parts, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows_ != rows) throw InvalidInput("hstack row mismatch");
    if (p.ring_ != ring) throw Incompatible("hstack across rings");
    cols += p.cols_;
  }
  Matrix m(ring, rows, cols);
  std::size_t c = 0;
  for (const auto& p : parts) {
    m.set_block(0, c, p);
    c += p.cols_;
  }
  return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) { return hstack(a.ring_, {a, b}, a.rows_); }

Matrix Matrix::vstack(const CoefficientRing& ring, const std::vector<Matrix>& parts, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols_ != cols) throw InvalidInput("vstack column mismatch");
    if (p.ring_ != ring) throw Incompatible("vstack across rings");
    rows += p.rows_;
  }
  Matrix m(ring, rows, cols);
  std::size_t r = 0;
  for (const auto& p : parts) {
    m.set_block(r, 0, p);
    r += p.rows_;
  }
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) { return vstack(a.ring_, {a, b}, a.cols_); }

Matrix Matrix::block_diag(const CoefficientRing& ring, const std::vector<Matrix>& parts) {
  std::size_t rows = 0, cols = 0;
  for (const auto& p : parts) {
    rows += p.rows_;
    cols += p.cols_;
  }
  Matrix m(ring, rows, cols);
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    m.set_block(r, c, p);
    r += p.rows_;
    c += p.cols_;
  }
  return m;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "Kronecker product");
  Matrix m(a.ring_, a.rows_ * b.rows_, a.cols_ * b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) {
      const Scalar& x = a(i, j);
      if (x == 0) continue;
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l)
          m.data_[(i * b.rows_ + k) * m.cols_ + j * b.cols_ + l] = a.ring_.mul(x, b(k, l));
    }
  return m;
}

std::vector<std::vector<Scalar>> Matrix::to_rows() const {
  std::vector<std::vector<Scalar>> out(rows_, std::vector<Scalar>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << format_scalar((*this)(i, j));
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace qrep
