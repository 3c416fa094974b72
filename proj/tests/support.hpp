#pragma once

// Shared helpers for the test binaries: a seeded generator and a few
// brute-force oracles that deliberately avoid the library's algorithms.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qrep/matrix.hpp"

namespace qtest {

using Int = long;
using IntMatrix = std::vector<std::vector<Int>>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }

  IntMatrix int_matrix(std::size_t r, std::size_t c, Int lo, Int hi) {
    IntMatrix m(r, std::vector<Int>(c));
    for (auto& row : m)
      for (auto& x : row) x = uniform(lo, hi);
    return m;
  }

  // Product of random elementary matrices: unimodular over Z.
  IntMatrix unimodular(std::size_t n, int steps = 6) {
    IntMatrix m(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    if (n < 2) return m;
    for (int s = 0; s < steps; ++s) {
      std::size_t i = uniform(0, n - 1), j = uniform(0, n - 2);
      if (j >= i) ++j;
      Int c = uniform(-2, 2);
      for (std::size_t k = 0; k < n; ++k) m[i][k] += c * m[j][k];
    }
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

inline qrep::Matrix to_matrix(const qrep::CoefficientRing& ring, const IntMatrix& m,
                              std::size_t cols) {
  std::vector<std::vector<qrep::Scalar>> rows;
  for (const auto& r : m) {
    std::vector<qrep::Scalar> row;
    for (Int x : r) row.emplace_back(static_cast<long>(x));
    rows.push_back(row);
  }
  return qrep::Matrix::from_rows(ring, cols, rows);
}

inline qrep::Matrix to_matrix(const qrep::CoefficientRing& ring, const IntMatrix& m) {
  return to_matrix(ring, m, m.empty() ? 0 : m.front().size());
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix out(n, std::vector<Int>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

// Determinant by cofactor expansion (tiny matrices only).
inline Int det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Int total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Int> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      minor.push_back(row);
    }
    const Int term = m[0][j] * det(minor);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// k-th determinantal divisor: gcd of all k x k minors.
inline Int determinantal_divisor(const IntMatrix& a, std::size_t k) {
  const std::size_t r = a.size(), c = a.empty() ? 0 : a[0].size();
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  subsets(r, k, 0, cur, rs);
  subsets(c, k, 0, cur, cs);
  Int g = 0;
  for (const auto& ri : rs)
    for (const auto& ci : cs) {
      IntMatrix sub;
      for (auto i : ri) {
        std::vector<Int> row;
        for (auto j : ci) row.push_back(a[i][j]);
        sub.push_back(row);
      }
      g = std::gcd(g, det(sub));
    }
  return g < 0 ? -g : g;
}

// Invariant factors (including units and zeros trimmed) from determinantal
// divisors: d_k = D_k / D_{k-1}.
inline std::vector<Int> invariant_factors_oracle(const IntMatrix& a) {
  const std::size_t r = a.size(), c = a.empty() ? 0 : a[0].size();
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    const Int dk = determinantal_divisor(a, k);
    if (dk == 0) break;
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

}  // namespace qtest
