#include "doctest.h"

#include "qrep/lattice.hpp"
#include "qrep/linear_system.hpp"
#include "support.hpp"

using namespace qrep;
using qtest::IntMatrix;

namespace {

const CoefficientRing Z = CoefficientRing::integers();

bool unimodular(const Matrix& u) {
  const Scalar d = determinant(u);
  return d == 1 || d == -1;
}

}  // namespace

TEST_CASE("smith form of the worked example") {
  // D_1 = gcd of entries = 2, D_2 = |det| = 8, so the factors are 2 and 4.
  const IntMatrix a = {{2, 4}, {6, 8}};
  CHECK(qtest::invariant_factors_oracle(a) == std::vector<qtest::Int>{2, 4});
  const auto s = smith_normal_form(qtest::to_matrix(Z, a));
  CHECK(s.diagonal() == std::vector<Scalar>{2, 4});
  CHECK(s.U * qtest::to_matrix(Z, a) * s.V == s.D);
}

TEST_CASE("smith form of trivial inputs") {
  const auto zero = smith_normal_form(Matrix(Z, 2, 3));
  CHECK(zero.D.is_zero());
  CHECK(zero.rank == 0);
  const auto id = smith_normal_form(Matrix::identity(Z, 3));
  CHECK(id.D.is_identity());
  const auto empty = smith_normal_form(Matrix(Z, 0, 2));
  CHECK(empty.rank == 0);
}

TEST_CASE("smith form property: unimodular transforms and divisor oracle") {
  qtest::Gen gen(0x5eed01);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = gen.uniform(1, 4), c = gen.uniform(1, 4);
    const IntMatrix a = gen.int_matrix(r, c, -9, 9);
    const Matrix m = qtest::to_matrix(Z, a);
    const auto s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(unimodular(s.U));
    CHECK(unimodular(s.V));
    const auto diag = s.diagonal();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(s.D(i, j) == 0);
    for (std::size_t i = 0; i + 1 < s.rank; ++i) CHECK(Z.divides(diag[i], diag[i + 1]));
    for (std::size_t i = 0; i < s.rank; ++i) CHECK(diag[i] > 0);
    const auto oracle = qtest::invariant_factors_oracle(a);
    REQUIRE(oracle.size() == s.rank);
    for (std::size_t i = 0; i < s.rank; ++i) CHECK(diag[i] == Scalar(static_cast<long>(oracle[i])));
  }
}

TEST_CASE("smith form over prime fields and the rationals is rank") {
  qtest::Gen gen(77);
  const auto f3 = CoefficientRing::prime_field(3);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = gen.int_matrix(3, 3, 0, 2);
    const auto s = smith_normal_form(qtest::to_matrix(f3, a));
    CHECK(s.U * qtest::to_matrix(f3, a) * s.V == s.D);
    for (std::size_t i = 0; i < s.rank; ++i) CHECK(s.D(i, i) == 1);
    // Rank over F_3 equals the number of invariant factors prime to 3.
    std::size_t expected = 0;
    for (auto d : qtest::invariant_factors_oracle(a))
      if (d % 3 != 0) ++expected;
    CHECK(s.rank == expected);
  }
}

TEST_CASE("hermite basis is canonical for the lattice") {
  qtest::Gen gen(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = gen.int_matrix(3, 3, -5, 5);
    const IntMatrix u = gen.unimodular(3);
    const Matrix m = qtest::to_matrix(Z, a);
    const Matrix mu = m * qtest::to_matrix(Z, u);
    CHECK(hermite_basis(m) == hermite_basis(mu));
    CHECK(span_contains(m, hermite_basis(m)));
    CHECK(span_contains(hermite_basis(m), m));
    CHECK(hermite_basis(m).cols() == rank(m));
  }
}

TEST_CASE("kernel, solve and saturation") {
  const Matrix a = Matrix::from_rows(Z, {{1, 2, 3}, {2, 4, 6}});
  const Matrix k = kernel_basis(a);
  CHECK(k.cols() == 2);
  CHECK((a * k).is_zero());

  const Matrix two = Matrix::from_rows(Z, {{2}});
  CHECK_FALSE(solve(two, Matrix::column(Z, {1})).has_value());
  CHECK(*solve(two, Matrix::column(Z, {6})) == Matrix::column(Z, {3}));

  // sat(2Z) = Z; sat of (2,4) in Z^2 is (1,2).
  CHECK(saturation(two) == Matrix::identity(Z, 1));
  CHECK(hermite_basis(saturation(Matrix::column(Z, {2, 4}))) ==
        hermite_basis(Matrix::column(Z, {1, 2})));
}

TEST_CASE("solve property: returned solutions are exact") {
  qtest::Gen gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = qtest::to_matrix(Z, gen.int_matrix(3, 2, -4, 4));
    const Matrix x = qtest::to_matrix(Z, gen.int_matrix(2, 1, -4, 4));
    const Matrix b = a * x;
    auto sol = solve(a, b);
    REQUIRE(sol.has_value());
    CHECK(a * *sol == b);
  }
}

TEST_CASE("subquotient presentation") {
  // N = Z^2, R = span{(2,0),(0,3)}: N/R = Z/6.
  const Matrix r = Matrix::from_rows(Z, {{2, 0}, {0, 3}});
  const auto p = present_subquotient(Matrix::identity(Z, 2), r);
  CHECK(p.torsion == std::vector<Scalar>{6});
  CHECK(p.free_rank == 0);
  auto c = p.coordinates(Matrix::column(Z, {1, 1}));
  REQUIRE(c.has_value());
  CHECK(in_span(r, p.generators * *c - Matrix::column(Z, {1, 1})));
}

TEST_CASE("linear system with matrix unknowns") {
  // Find X (1x1) with 2 X ≡ 1 (mod 3): X = 2 (mod 3).
  LinearSystem sys(Z);
  auto x = sys.add_unknown(1, 1);
  const Matrix minus_one = Matrix::from_rows(Z, {{-1}});
  sys.add_equation({{Matrix::from_rows(Z, {{2}}), x, Matrix::identity(Z, 1)}}, &minus_one,
                   Matrix::from_rows(Z, {{3}}));
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  const Scalar v = (*sol)[x](0, 0);
  CHECK(Z.divmod(v * 2 - 1, Scalar(3)).second == 0);

  // Row-major vec identity: vec(L X R) = (L ⊗ R^T) vec(X).
  qtest::Gen gen(5);
  const Matrix l = qtest::to_matrix(Z, gen.int_matrix(2, 3, -3, 3));
  const Matrix xm = qtest::to_matrix(Z, gen.int_matrix(3, 2, -3, 3));
  const Matrix rm = qtest::to_matrix(Z, gen.int_matrix(2, 4, -3, 3));
  CHECK((l * xm * rm).vec() == Matrix::kron(l, rm.transpose()) * xm.vec());
}
