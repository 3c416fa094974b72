#include "qrep/lattice.hpp"

#include <utility>

#include "qrep/error.hpp"

namespace qrep {

namespace {

// row_i <- row_i - q * row_t over columns [from, cols)
void row_axpy(Matrix& m, std::size_t i, std::size_t t, const Scalar q, const CoefficientRing& r) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Scalar& x = m(t, j);
    if (x == 0) continue;
    m.raw(i, j) = r.sub(m(i, j), r.mul(q, x));
  }
}

void col_axpy(Matrix& m, std::size_t j, std::size_t t, const Scalar q, const CoefficientRing& r) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Scalar& x = m(i, t);
    if (x == 0) continue;
    m.raw(i, j) = r.sub(m(i, j), r.mul(q, x));
  }
}

// [row_t; row_i] <- [[s, x], [-b, a]] [row_t; row_i]
void row_mix(Matrix& m, std::size_t t, std::size_t i, const Scalar& s, const Scalar& x,
             const Scalar& b, const Scalar& a, const CoefficientRing& r) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Scalar u = m(t, j);
    const Scalar v = m(i, j);
    if (u == 0 && v == 0) continue;
    m.raw(t, j) = r.add(r.mul(s, u), r.mul(x, v));
    m.raw(i, j) = r.sub(r.mul(a, v), r.mul(b, u));
  }
}

void col_mix(Matrix& m, std::size_t t, std::size_t j, const Scalar& s, const Scalar& x,
             const Scalar& b, const Scalar& a, const CoefficientRing& r) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Scalar u = m(i, t);
    const Scalar v = m(i, j);
    if (u == 0 && v == 0) continue;
    m.raw(i, t) = r.add(r.mul(s, u), r.mul(x, v));
    m.raw(i, j) = r.sub(r.mul(a, v), r.mul(b, u));
  }
}

void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.raw(a, j), m.raw(b, j));
}

void swap_cols(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.raw(i, a), m.raw(i, b));
}

void scale_row(Matrix& m, std::size_t i, const Scalar u, const CoefficientRing& r) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(i, j) != 0) m.raw(i, j) = r.mul(m(i, j), u);
}

// Zero out d(i, t) against pivot d(t, t) with a unimodular row operation
// applied to both d and u.
void eliminate_row(Matrix& d, Matrix& u, std::size_t t, std::size_t i, const CoefficientRing& r) {
  const Scalar a = d(t, t);
  const Scalar b = d(i, t);
  if (b == 0) return;
  if (r.divides(a, b)) {
    const Scalar q = r.divmod(b, a).first;
    row_axpy(d, i, t, q, r);
    row_axpy(u, i, t, q, r);
    return;
  }
  const Bezout bz = r.gcdext(a, b);
  const Scalar a1 = r.divmod(a, bz.g).first;
  const Scalar b1 = r.divmod(b, bz.g).first;
  row_mix(d, t, i, bz.s, bz.t, b1, a1, r);
  row_mix(u, t, i, bz.s, bz.t, b1, a1, r);
}

void eliminate_col(Matrix& d, Matrix& v, std::size_t t, std::size_t j, const CoefficientRing& r) {
  const Scalar a = d(t, t);
  const Scalar b = d(t, j);
  if (b == 0) return;
  if (r.divides(a, b)) {
    const Scalar q = r.divmod(b, a).first;
    col_axpy(d, j, t, q, r);
    col_axpy(v, j, t, q, r);
    return;
  }
  const Bezout bz = r.gcdext(a, b);
  const Scalar a1 = r.divmod(a, bz.g).first;
  const Scalar b1 = r.divmod(b, bz.g).first;
  col_mix(d, t, j, bz.s, bz.t, b1, a1, r);
  col_mix(v, t, j, bz.s, bz.t, b1, a1, r);
}

}  // namespace

std::vector<Scalar> SmithForm::diagonal() const {
  std::vector<Scalar> out;
  const std::size_t n = std::min(D.rows(), D.cols());
  for (std::size_t i = 0; i < n; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const Matrix& a) {
  const CoefficientRing& r = a.ring();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithForm out{Matrix::identity(r, m), a, Matrix::identity(r, n), 0};
  Matrix& d = out.D;
  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pi = m, pj = n;
    mpz_class best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (d(i, j) == 0) continue;
        mpz_class nv = r.norm(d(i, j));
        if (pi == m || nv < best) {
          best = nv;
          pi = i;
          pj = j;
        }
      }
    if (pi == m) break;
    swap_rows(d, t, pi);
    swap_rows(out.U, t, pi);
    swap_cols(d, t, pj);
    swap_cols(out.V, t, pj);

    while (true) {
      for (std::size_t i = t + 1; i < m; ++i) eliminate_row(d, out.U, t, i, r);
      for (std::size_t j = t + 1; j < n; ++j) eliminate_col(d, out.V, t, j, r);
      bool clear = true;
      for (std::size_t i = t + 1; i < m && clear; ++i) clear = d(i, t) == 0;
      if (!clear) continue;
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!r.divides(d(t, t), d(i, j))) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      // row_t += row_bad brings the offending entry into the pivot row
      row_axpy(d, t, bad_row, Scalar(-1), r);
      row_axpy(out.U, t, bad_row, Scalar(-1), r);
    }
    const Scalar unit = r.normalizing_unit(d(t, t));
    if (unit != 1) {
      scale_row(d, t, unit, r);
      scale_row(out.U, t, unit, r);
    }
    out.rank = t + 1;
  }
  return out;
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("inverse of a non-square matrix");
  const CoefficientRing& ring = a.ring();
  const CoefficientRing work = ring.is_field() ? ring : CoefficientRing::rationals();
  const std::size_t n = a.rows();
  Matrix m(work, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.raw(i, j) = a(i, j);
    m.raw(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) throw InvalidInput("matrix is singular");
    swap_rows(m, c, p);
    scale_row(m, c, work.inverse(m(c, c)), work);
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && m(i, c) != 0) row_axpy(m, i, c, m(i, c), work);
  }
  Matrix out(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& x = m(i, n + j);
      if (!ring.is_field() && x.get_den() != 1) {
        throw InvalidInput("matrix is not invertible over " + ring.symbol());
      }
      out.raw(i, j) = x;
    }
  return out;
}

Scalar determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  const CoefficientRing& ring = a.ring();
  const CoefficientRing work = ring.is_field() ? ring : CoefficientRing::rationals();
  const std::size_t n = a.rows();
  Matrix m(work, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.raw(i, j) = a(i, j);
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      swap_rows(m, c, p);
      det = work.neg(det);
    }
    det = work.mul(det, m(c, c));
    const Scalar inv = work.inverse(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i)
      if (m(i, c) != 0) row_axpy(m, i, c, work.mul(m(i, c), inv), work);
  }
  return ring.normalize(det);
}

Matrix hermite_basis(const Matrix& spanning) {
  const CoefficientRing& r = spanning.ring();
  Matrix t = spanning.transpose();  // rows are the spanning vectors
  const std::size_t k = t.rows();
  const std::size_t m = t.cols();
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < k; ++c) {
    for (std::size_t i = row + 1; i < k; ++i) {
      if (t(i, c) == 0) continue;
      if (t(row, c) == 0) {
        swap_rows(t, row, i);
        continue;
      }
      const Scalar a = t(row, c);
      const Scalar b = t(i, c);
      if (r.divides(a, b)) {
        row_axpy(t, i, row, r.divmod(b, a).first, r);
      } else {
        const Bezout bz = r.gcdext(a, b);
        row_mix(t, row, i, bz.s, bz.t, r.divmod(b, bz.g).first, r.divmod(a, bz.g).first, r);
      }
    }
    if (t(row, c) == 0) continue;
    const Scalar unit = r.normalizing_unit(t(row, c));
    if (unit != 1) scale_row(t, row, unit, r);
    for (std::size_t i = 0; i < row; ++i)
      if (t(i, c) != 0) row_axpy(t, i, row, r.divmod(t(i, c), t(row, c)).first, r);
    ++row;
  }
  return t.rows_range(0, row).transpose();
}

std::size_t rank(const Matrix& a) { return hermite_basis(a).cols(); }

Matrix kernel_basis(const Matrix& a) {
  const SmithForm s = smith_normal_form(a);
  const Matrix raw = s.V.columns(s.rank, a.cols() - s.rank);
  if (raw.cols() == 0) return raw;
  return hermite_basis(raw);
}

Matrix saturation(const Matrix& spanning) {
  const SmithForm s = smith_normal_form(spanning);
  if (s.rank == 0) return Matrix(spanning.ring(), spanning.rows(), 0);
  return hermite_basis(inverse(s.U).columns(0, s.rank));
}

LinearSolver::LinearSolver(const Matrix& a)
    : rows_(a.rows()), cols_(a.cols()), smith_(smith_normal_form(a)) {}

std::optional<Matrix> LinearSolver::solve(const Matrix& b) const {
  if (b.rows() != rows_) throw InvalidInput("solve: right-hand side has wrong height");
  const CoefficientRing& r = b.ring();
  const Matrix c = smith_.U * b;
  Matrix y(r, cols_, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i < smith_.rank) {
        const Scalar& d = smith_.D(i, i);
        if (!r.divides(d, c(i, col))) return std::nullopt;
        y.raw(i, col) = r.divmod(c(i, col), d).first;
      } else if (c(i, col) != 0) {
        return std::nullopt;
      }
    }
  }
  return smith_.V * y;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) { return LinearSolver(a).solve(b); }

bool in_span(const Matrix& spanning, const Matrix& v) {
  if (v.is_zero()) return true;
  if (spanning.cols() == 0) return false;
  return solve(spanning, v).has_value();
}

bool span_contains(const Matrix& outer, const Matrix& inner) {
  if (inner.cols() == 0 || inner.is_zero()) return true;
  if (outer.cols() == 0) return false;
  return solve(outer, inner).has_value();
}

Matrix Subquotient::relation_matrix() const {
  const CoefficientRing& r = generators.ring();
  Matrix rel(r, size(), torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i) rel.raw(i, i) = torsion[i];
  return rel;
}

std::optional<Matrix> Subquotient::coordinates(const Matrix& v) const {
  const std::size_t k = size();
  if (v.is_zero()) return Matrix(v.ring(), k, v.cols());
  const Matrix system = Matrix::hstack(generators, relation_span);
  auto sol = solve(system, v);
  if (!sol) return std::nullopt;
  Matrix c = sol->rows_range(0, k);
  // reduce torsion coordinates into canonical range
  const CoefficientRing& r = v.ring();
  for (std::size_t i = 0; i < torsion.size(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c.raw(i, j) = r.divmod(c(i, j), torsion[i]).second;
  return c;
}

Subquotient present_subquotient(const Matrix& n_span, const Matrix& r_span) {
  const CoefficientRing& ring = n_span.ring();
  const std::size_t m = n_span.rows();
  if (r_span.rows() != m) throw InvalidInput("subquotient: ambient dimension mismatch");
  const Matrix n_basis = hermite_basis(Matrix::hstack(n_span, r_span));
  const std::size_t nb = n_basis.cols();
  Subquotient out;
  out.relation_span = r_span;
  if (nb == 0) {
    out.generators = Matrix(ring, m, 0);
    return out;
  }
  Matrix coords(ring, nb, 0);
  if (r_span.cols() > 0) {
    auto c = solve(n_basis, r_span);
    if (!c) throw std::logic_error("present_subquotient: R not contained in N");
    coords = *c;
  }
  std::vector<std::size_t> keep_torsion, keep_free;
  Matrix basis = n_basis;
  if (coords.cols() > 0) {
    const SmithForm s = smith_normal_form(coords);
    basis = n_basis * inverse(s.U);
    for (std::size_t i = 0; i < nb; ++i) {
      if (i < s.rank) {
        if (!ring.is_unit(s.D(i, i))) {
          keep_torsion.push_back(i);
          out.torsion.push_back(s.D(i, i));
        }
      } else {
        keep_free.push_back(i);
      }
    }
  } else {
    for (std::size_t i = 0; i < nb; ++i) keep_free.push_back(i);
  }
  std::vector<std::size_t> order = keep_torsion;
  order.insert(order.end(), keep_free.begin(), keep_free.end());
  out.generators = basis.select_columns(order);
  out.free_rank = keep_free.size();
  // Tidy the free generators: reduce them modulo the torsion part and the
  // relations is not canonical in general; keep the unimodular basis as is.
  return out;
}

}  // namespace qrep
