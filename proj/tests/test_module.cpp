#include "doctest.h"

#include <numeric>

#include "purity_oracle.hpp"
#include "qrep/error.hpp"
#include "qrep/module.hpp"
#include "support.hpp"

using namespace qrep;

namespace {

const CoefficientRing Z = CoefficientRing::integers();
const CoefficientRing Q = CoefficientRing::rationals();

FGModule zmod(long d) { return FGModule::cyclic(Z, Scalar(d)); }

FGModule from_factors(const std::vector<long>& factors, std::size_t free_rank) {
  NormalForm nf;
  for (long d : factors) nf.factors.emplace_back(d);
  nf.free_rank = free_rank;
  return FGModule::from_normal_form(Z, nf);
}

// Same module, scrambled presentation: generators changed by a unimodular
// matrix and extra redundant relation columns.
FGModule scramble(const FGModule& m, qtest::Gen& gen) {
  const std::size_t g = m.generators();
  const Matrix u = qtest::to_matrix(Z, gen.unimodular(g));
  Matrix rel = u * m.relations();
  if (rel.cols() > 0) rel = Matrix::hstack(rel, rel.col(0).scaled(gen.uniform(-3, 3)));
  return FGModule(Z, g, rel);
}

mpz_class hom_order_oracle(const std::vector<long>& a, std::size_t ra, const std::vector<long>& b) {
  mpz_class total = 1;
  for (long x : a)
    for (long y : b) total *= std::gcd(x, y);
  for (std::size_t i = 0; i < ra; ++i)
    for (long y : b) total *= y;
  return total;
}

}  // namespace

TEST_CASE("normal forms of small presentations") {
  const FGModule m(Z, 2, Matrix::from_rows(Z, {{2, 0}, {0, 3}}));
  CHECK(m.normal_form().factors == std::vector<Scalar>{6});
  CHECK(m.normal_form().free_rank == 0);
  CHECK(FGModule::free(Z, 3).normal_form().free_rank == 3);
  CHECK(FGModule::free(Z, 3).normal_form().factors.empty());
  CHECK(zmod(4).normal_form().factors == std::vector<Scalar>{4});
  CHECK(m.describe() == "Z/6");
  CHECK(from_factors({2, 4}, 1).describe() == "Z/2 + Z/4 + Z");
  CHECK(FGModule::free(Q, 2).describe() == "Q^2");
  CHECK(*m.cardinality() == 6);
  CHECK_FALSE(FGModule::free(Z, 1).cardinality().has_value());
  CHECK(*FGModule::free(CoefficientRing::prime_field(3), 2).cardinality() == 9);
}

TEST_CASE("normal form is invariant under change of presentation") {
  qtest::Gen gen(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t g = gen.uniform(1, 3);
    const auto rel = gen.int_matrix(g, gen.uniform(0, 3), -6, 6);
    const FGModule m(Z, g, qtest::to_matrix(Z, rel, rel.empty() ? 0 : rel[0].size()));
    const FGModule s = scramble(m, gen);
    CHECK(m.normal_form() == s.normal_form());
    CHECK(m.isomorphic_to(s));
    CHECK(FGModule::from_normal_form(Z, m.normal_form()).normal_form() == m.normal_form());
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(FGModule(Z, 2, Matrix(Z, 3, 1)), InvalidInput);
  CHECK_THROWS_AS(ModuleMap(zmod(2), FGModule::free(Z, 1), Matrix::from_rows(Z, {{1}})),
                  InvalidInput);
  CHECK_THROWS_AS(hom_module(zmod(2), FGModule::free(Q, 1)), Incompatible);
  CHECK_THROWS_AS(TorsionTheorySpec::classical().validate_for(Q), Incompatible);
  CHECK_NOTHROW(TorsionTheorySpec::trivial().validate_for(Q));
  CHECK_THROWS_AS(TorsionTheorySpec::parse("p-primary:4"), InvalidInput);
  CHECK(TorsionTheorySpec::parse("p-primary:3") == TorsionTheorySpec::p_primary(3));
}

TEST_CASE("module maps") {
  const ModuleMap q(FGModule::free(Z, 1), zmod(2), Matrix::from_rows(Z, {{1}}));
  CHECK(q.is_surjective());
  CHECK_FALSE(q.is_injective());
  const ModuleMap three(zmod(2), zmod(2), Matrix::from_rows(Z, {{3}}));
  CHECK(three.equals(ModuleMap::identity(zmod(2))));
  CHECK(three.is_isomorphism());
  CHECK((three * q).equals(q));
  CHECK(ModuleMap(zmod(2), zmod(2), Matrix::from_rows(Z, {{2}})).is_zero());
  CHECK_THROWS_AS(q * q, Incompatible);
}

TEST_CASE("hom groups: worked examples") {
  const auto h = hom_module(zmod(4), zmod(6));
  CHECK(h.group.describe() == "Z/2");
  const FGModule m = from_factors({3}, 1);
  CHECK(hom_module(FGModule::free(Z, 1), m).group.isomorphic_to(m));
  CHECK(hom_module(zmod(2), FGModule::free(Z, 1)).group.is_zero());
  // a zero hom group still combines to the zero map between the right modules
  const auto z = hom_module(zmod(2), FGModule::free(Z, 1));
  const ModuleMap zero = z.combine(Matrix(Z, 0, 1));
  CHECK(zero.source() == zmod(2));
  CHECK(zero.target() == FGModule::free(Z, 1));
  CHECK(zero.is_zero());
}

TEST_CASE("hom groups: orders agree with the gcd oracle on scrambled presentations") {
  qtest::Gen gen(2024);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<long> a, b;
    for (int i = gen.uniform(0, 2); i > 0; --i) a.push_back(gen.uniform(2, 9));
    for (int i = gen.uniform(1, 2); i > 0; --i) b.push_back(gen.uniform(2, 9));
    const std::size_t ra = gen.uniform(0, 1);
    FGModule ma = direct_sum({FGModule::free(Z, ra), FGModule::from_normal_form(Z, {})});
    std::vector<FGModule> parts{FGModule::free(Z, ra)};
    for (long x : a) parts.push_back(zmod(x));
    ma = scramble(direct_sum(parts), gen);
    std::vector<FGModule> bparts;
    for (long y : b) bparts.push_back(zmod(y));
    const FGModule mb = scramble(direct_sum(bparts), gen);
    const auto h = hom_module(ma, mb);
    REQUIRE(h.group.cardinality().has_value());
    CHECK(*h.group.cardinality() == hom_order_oracle(a, ra, b));
    // Each basis map is well defined; coordinates of a basis map are a unit vector.
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
      auto c = h.coordinates(h.basis[i]);
      REQUIRE(c.has_value());
      CHECK(h.combine(*c).equals(h.basis[i]));
    }
  }
}

TEST_CASE("hom groups over a prime field have dimension product") {
  const auto f = CoefficientRing::prime_field(5);
  const auto h = hom_module(FGModule::free(f, 2), FGModule::free(f, 3));
  CHECK(h.group.normal_form().free_rank == 6);
  CHECK(h.basis.size() == 6);
}

TEST_CASE("kernel, image, cokernel") {
  // ×2 : Z -> Z/4 has kernel 2Z, image 2Z/4, cokernel Z/2.
  const ModuleMap f(FGModule::free(Z, 1), zmod(4), Matrix::from_rows(Z, {{2}}));
  const auto d = map_factorization_data(f);
  CHECK(d.kernel.module().describe() == "Z");
  CHECK_FALSE(d.kernel.contains(Matrix::column(Z, {1})));
  CHECK(d.kernel.contains(Matrix::column(Z, {2})));
  CHECK(d.image.module().describe() == "Z/2");
  CHECK(d.cokernel.describe() == "Z/2");
  CHECK((f * d.kernel_inclusion).is_zero());
  CHECK((d.cokernel_projection * f).is_zero());
  CHECK((d.image_inclusion * d.coimage).equals(f));
  CHECK(d.coimage.is_surjective());
  CHECK(d.image_inclusion.is_injective());
}

TEST_CASE("purity: worked examples") {
  const FGModule z = FGModule::free(Z, 1);
  CHECK_FALSE(is_pure_submodule(Matrix::column(Z, {2}), z));
  CHECK(is_pure_submodule(Matrix::column(Z, {1, 0}), FGModule::free(Z, 2)));
  CHECK(is_pure_submodule(Submodule::whole(zmod(4))));
  CHECK(is_pure_submodule(Submodule::zero(zmod(4))));
  CHECK_FALSE(is_pure_submodule(Matrix::column(Z, {2}), zmod(4)));
  // 2Z/4 inside Z/2 + Z/4 via (1,2) is pure: it is a summand.
  CHECK(is_pure_submodule(Matrix::column(Z, {1, 2}), from_factors({2, 4}, 0)));
  CHECK(is_pure_submodule(Matrix::column(Q, {2}), FGModule::free(Q, 1)));
  CHECK_THROWS_AS(Submodule(z, Matrix::column(Z, {1, 2})), InvalidInput);
}

TEST_CASE("purity agrees with the tensor oracle on random instances") {
  qtest::Gen gen(8);
  int checked = 0, pure = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<long> factors;
    const std::size_t k = gen.uniform(0, 2);
    long d = 1;
    for (std::size_t i = 0; i < k; ++i) {
      d *= gen.uniform(2, 3);
      if (d > 8) break;
      factors.push_back(d);
    }
    const FGModule b = from_factors(factors, gen.uniform(0, 3 - factors.size()));
    if (b.generators() == 0) continue;
    const Matrix gens = qtest::to_matrix(Z, gen.int_matrix(b.generators(), gen.uniform(1, 2), -4, 4));
    const Submodule a(b, gens);
    const bool fast = is_pure_submodule(a);
    CHECK(fast == qtest::purity_by_tensor_oracle(a));
    ++checked;
    pure += fast;
  }
  CHECK(checked > 200);
  CHECK(pure > 20);
  CHECK(pure < checked - 20);
}

TEST_CASE("pure superset") {
  auto p = pure_superset(Submodule::zero(zmod(4)));
  CHECK(p.pure.is_whole());
  CHECK(*p.index == 4);
  const FGModule z = FGModule::free(Z, 1);
  p = pure_superset(Submodule(z, Matrix::column(Z, {2})));
  CHECK(p.pure.is_whole());
  CHECK(*p.index == 2);
  const FGModule z2 = FGModule::free(Z, 2);
  const Submodule line(z2, Matrix::column(Z, {1, 0}));
  CHECK(pure_superset(line).pure == line);
  CHECK(*pure_superset(line).index == 1);
}

TEST_CASE("pure superset property: pure and containing its input") {
  qtest::Gen gen(1234);
  for (int trial = 0; trial < 150; ++trial) {
    const FGModule b = from_factors(trial % 2 ? std::vector<long>{2} : std::vector<long>{}, 2);
    const Submodule a(b, qtest::to_matrix(Z, gen.int_matrix(b.generators(), 1, -6, 6)));
    const auto p = pure_superset(a);
    CHECK(p.pure.contains(a));
    CHECK(is_pure_submodule(p.pure));
    CHECK(qtest::purity_by_tensor_oracle(p.pure));
    // |P/A| equals the recorded index.
    const FGModule pa(Z, b.generators(), a.lattice());
    const Submodule rel(pa, p.pure.lattice());
    CHECK(*rel.module().cardinality() == *p.index);
  }
}

TEST_CASE("classification") {
  const auto classical = TorsionTheorySpec::classical();
  auto c = classify_module(zmod(6), classical);
  CHECK(c.torsion);
  CHECK_FALSE(c.flat);
  CHECK_FALSE(c.injective);
  c = classify_module(FGModule::free(Z, 3), classical);
  CHECK(c.torsion_free);
  CHECK(c.flat);
  CHECK_FALSE(c.torsion);
  const FGModule m = from_factors({3}, 1);
  c = classify_module(m, TorsionTheorySpec::p_primary(2));
  CHECK(c.torsion_free);
  CHECK_FALSE(c.torsion);
  CHECK(c.torsion_submodule.is_zero());
  c = classify_module(FGModule::zero(Z), classical);
  CHECK(c.injective);
  CHECK(c.divisible);
  c = classify_module(FGModule::free(Q, 2), TorsionTheorySpec::trivial());
  CHECK(c.flat);
  CHECK(c.injective);
  CHECK_THROWS_AS(classify_module(FGModule::free(Q, 1), classical), Incompatible);

  // p-primary part of Z/12 is Z/4.
  c = classify_module(zmod(12), TorsionTheorySpec::p_primary(2));
  CHECK(c.torsion_submodule.module().describe() == "Z/4");
  CHECK_FALSE(c.torsion);
  CHECK_FALSE(c.torsion_free);
}

TEST_CASE("torsion submodule is torsion with torsion-free quotient") {
  qtest::Gen gen(555);
  for (const auto& tt : {TorsionTheorySpec::classical(), TorsionTheorySpec::p_primary(2),
                         TorsionTheorySpec::p_primary(3), TorsionTheorySpec::trivial()}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t g = gen.uniform(1, 3);
      const auto rel = gen.int_matrix(g, gen.uniform(0, 3), -6, 6);
      const FGModule m(Z, g, qtest::to_matrix(Z, rel, rel.empty() ? 0 : rel[0].size()));
      const Submodule t = torsion_submodule(m, tt);
      if (tt.kind != TorsionKind::Trivial) CHECK(classify_module(t.module(), tt).torsion);
      CHECK(classify_module(t.quotient(), tt).torsion_free);
      // Hereditary: the torsion part of a submodule lies in the torsion part.
      const Submodule a(m, qtest::to_matrix(Z, gen.int_matrix(g, 1, -3, 3)));
      const Submodule ta = torsion_submodule(a.module(), tt);
      const Submodule image_in_m(m, a.generators() * ta.generators());
      CHECK(t.contains(image_in_m));
    }
  }
}

TEST_CASE("sections") {
  const FGModule z = FGModule::free(Z, 1);
  CHECK_FALSE(has_section(ModuleMap(z, zmod(2), Matrix::from_rows(Z, {{1}}))).has_value());
  const ModuleMap proj(FGModule::free(Z, 2), z, Matrix::from_rows(Z, {{1, 0}}));
  auto s = has_section(proj);
  REQUIRE(s.has_value());
  CHECK((proj * *s).equals(ModuleMap::identity(z)));
  CHECK(is_split_epimorphism(proj));
  auto id = has_section(ModuleMap::identity(zmod(3)));
  REQUIRE(id.has_value());
  CHECK(id->equals(ModuleMap::identity(zmod(3))));
}

TEST_CASE("sections: absent sections confirmed by exhausting the finite hom group") {
  qtest::Gen gen(77);
  int none = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<FGModule> ap, bp;
    for (int i = gen.uniform(1, 2); i > 0; --i) ap.push_back(zmod(gen.uniform(2, 6)));
    bp.push_back(zmod(gen.uniform(2, 6)));
    const FGModule a = direct_sum(ap), b = direct_sum(bp);
    const Matrix t = qtest::to_matrix(Z, gen.int_matrix(b.generators(), a.generators(), 0, 5));
    if (!is_well_defined(a, b, t)) continue;
    const ModuleMap psi(a, b, t);
    const auto s = has_section(psi);
    if (s) {
      CHECK((psi * *s).equals(ModuleMap::identity(b)));
      continue;
    }
    ++none;
    const auto h = hom_module(b, a);
    // Enumerate every element of the finite group Hom(b, a).
    std::vector<long> orders;
    for (std::size_t i = 0; i < h.group.generators(); ++i)
      orders.push_back(i < h.presentation.torsion.size() ? h.presentation.torsion[i].get_num().get_si() : 1);
    std::vector<long> c(orders.size(), 0);
    bool found = false;
    while (true) {
      Matrix coeff(Z, orders.size(), 1);
      for (std::size_t i = 0; i < c.size(); ++i) coeff.set(i, 0, Scalar(c[i]));
      if (!orders.empty() && (psi * h.combine(coeff)).equals(ModuleMap::identity(b))) found = true;
      std::size_t k = 0;
      while (k < c.size() && ++c[k] == orders[k]) c[k++] = 0;
      if (k == c.size()) break;
    }
    CHECK_FALSE(found);
  }
  CHECK(none > 5);
}

TEST_CASE("factoring and extending module maps") {
  const FGModule z = FGModule::free(Z, 1);
  const ModuleMap two(z, z, Matrix::from_rows(Z, {{2}}));
  CHECK_FALSE(factor_module(ModuleMap::identity(z), two).has_value());
  auto f = factor_module(two, two);
  REQUIRE(f.has_value());
  CHECK((two * *f).equals(two));
  // Extend Z --×2--> Z the map Z -> Z/2 sending 1 to 0? it extends; 1 to 1 does not.
  CHECK(extend_module(two, ModuleMap(z, zmod(2), Matrix::from_rows(Z, {{0}}))).has_value());
  CHECK_FALSE(extend_module(two, ModuleMap(z, zmod(2), Matrix::from_rows(Z, {{1}}))).has_value());
  // Over Q every map extends along a monomorphism.
  const FGModule q = FGModule::free(Q, 1);
  auto h = extend_module(ModuleMap(q, q, Matrix::from_rows(Q, {{2}})), ModuleMap::identity(q));
  REQUIRE(h.has_value());
  CHECK(h->matrix()(0, 0) == Scalar(1, 2));
}
