#include "doctest.h"

#include "qrep/document.hpp"
#include "qrep/error.hpp"
#include "rep_gen.hpp"

using namespace qrep;

namespace {

const CoefficientRing Z = CoefficientRing::integers();
const CoefficientRing Q = CoefficientRing::rationals();

std::string round_trip(const std::string& text) { return document_text(parse_document_text(text)); }

Document random_document(qtest::Gen& gen) {
  Document d;
  const std::size_t n = gen.uniform(1, 3);
  d.quiver = Quiver::line(n);
  for (int k = 0; k < 3; ++k) {
    const Representation x = qtest::random_line_rep(n, gen, 4, true);
    const std::string name = "X" + std::to_string(k);
    d.representations.emplace(name, x);
    d.morphisms.emplace("id" + std::to_string(k), NamedMorphism{name, name, RepMorphism::identity(x)});
    for (std::size_t v = 0; v < n; ++v)
      if (x.module(v).generators() > 0) {
        d.elements.emplace("e" + std::to_string(k), NamedElement{name, {v, x.module(v).generator(0)}});
        break;
      }
  }
  // one representation on a different quiver carries its own quiver text
  d.representations.emplace("loop", Representation::zero(Quiver::loop(2), Z));
  d.modules.emplace("M", FGModule::cyclic(Z, 6));
  d.maps.emplace("f", ModuleMap(FGModule::free(Z, 1), FGModule::cyclic(Z, 6), Matrix::from_rows(Z, {{5}})));
  d.jobs.push_back(Json{{"kind", "decompose"}, {"rep", "X0"}});
  return d;
}

}  // namespace

TEST_CASE("module expressions") {
  CHECK(parse_module_expr("Z").normal_form().free_rank == 1);
  CHECK(parse_module_expr("Z^3").generators() == 3);
  CHECK(parse_module_expr("Z/3+Z").describe() == direct_sum({FGModule::cyclic(Z, 3), FGModule::free(Z, 1)}).describe());
  CHECK(parse_module_expr("Q^2").ring() == Q);
  CHECK(parse_module_expr("F5").ring() == CoefficientRing::prime_field(5));
  CHECK(parse_module_expr("0", Z).is_zero());
  CHECK_THROWS_AS(parse_module_expr("0"), InvalidInput);
  CHECK_THROWS_AS(parse_module_expr("Q/3"), InvalidInput);
  CHECK_THROWS_AS(parse_module_expr("Z+Q"), Incompatible);
  CHECK_THROWS_AS(parse_module_expr("Z^x"), InvalidInput);
  CHECK_THROWS_AS(parse_module_expr("Z+"), InvalidInput);
}

TEST_CASE("element expressions") {
  const Representation x(Quiver::line(2), Z, {FGModule::free(Z, 1), FGModule::free(Z, 2)},
                         {Matrix::from_rows(Z, {{1}, {0}})});
  const RepElement a = parse_element_expr("1@v1", x);
  CHECK(a.vertex == 0);
  CHECK(a.value == Matrix::column(Z, {Scalar(1)}));
  const RepElement b = parse_element_expr("(2,-3)@v2", x);
  CHECK(b.vertex == 1);
  CHECK(b.value == Matrix::column(Z, {Scalar(2), Scalar(-3)}));
  CHECK_THROWS_AS(parse_element_expr("1", x), InvalidInput);
  CHECK_THROWS_AS(parse_element_expr("(1,2)@v1", x), InvalidInput);
  CHECK_THROWS_AS(parse_element_expr("1@v9", x), InvalidInput);
  CHECK_THROWS_AS(parse_element_expr("1/2@v1", x), InvalidInput);
}

TEST_CASE("scalars serialize exactly") {
  CHECK(scalar_json(Scalar(7)) == Json(7));
  CHECK(scalar_json(Scalar(-1, 2)) == Json("-1/2"));
  const Scalar huge("123456789012345678901234567890");
  CHECK(parse_scalar(scalar_json(huge), Z) == huge);
  CHECK(parse_scalar(Json("3/4"), Q) == Scalar(3, 4));
  CHECK(parse_scalar(Json(7), CoefficientRing::prime_field(5)) == Scalar(2));
  CHECK_THROWS_AS(parse_scalar(Json(1.5), Q), InvalidInput);
  CHECK_THROWS_AS(parse_scalar(Json("1/0"), Q), InvalidInput);
}

TEST_CASE("document round trip on random documents") {
  qtest::Gen gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Document d = random_document(gen);
    const std::string text = document_text(d);
    const Document e = parse_document_text(text);
    CHECK(document_text(e) == text);
    CHECK(e.quiver == d.quiver);
    REQUIRE(e.representations.size() == d.representations.size());
    for (const auto& [name, x] : d.representations) CHECK(e.representations.at(name) == x);
    for (const auto& [name, m] : d.morphisms) CHECK(e.morphisms.at(name).morphism.equals(m.morphism));
    for (const auto& [name, el] : d.elements) {
      CHECK(e.elements.at(name).rep == el.rep);
      CHECK(e.elements.at(name).element.value == el.element.value);
    }
    CHECK(e.maps.at("f").matrix() == d.maps.at("f").matrix());
    CHECK(e.modules.at("M") == d.modules.at("M"));
  }
}

TEST_CASE("round trip over the rationals and a prime field") {
  const std::string q_doc = R"({"version": "qrep/1", "ring": "Q", "quiver": "v1 v2; a1: v1 -> v2",
    "representations": {"X": {"modules": {"v1": 1, "v2": 2}, "arrows": {"a1": [["1/2"], [-3]]}}}})";
  const std::string once = round_trip(q_doc);
  CHECK(round_trip(once) == once);
  CHECK(once.find("\"1/2\"") != std::string::npos);
  const Document f = parse_document_text(
      R"({"version": "qrep/1", "ring": "F3", "quiver": "v", "representations": {"X": {"modules": {"v": 2}}}})");
  CHECK(f.ring == CoefficientRing::prime_field(3));
  CHECK(f.torsion == TorsionTheorySpec::trivial());
  CHECK(round_trip(document_text(f)) == document_text(f));
}

TEST_CASE("documents are validated before use") {
  const auto bad = [](const std::string& text) { return parse_document_text(text); };
  CHECK_THROWS_AS(bad("{}"), InvalidInput);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/2"})"), InvalidInput);
  CHECK_THROWS_WITH_AS(bad(R"({"version": "qrep/1", "colour": 1})"), doctest::Contains("colour"), InvalidInput);
  // malformed JSON reports a position
  try {
    bad("{\n  \"version\": \"qrep/1\",\n  oops\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  // unresolved names
  CHECK_THROWS_WITH_AS(bad(R"({"version": "qrep/1", "quiver": "v", "morphisms": {"m": {"source": "A", "target": "A"}}})"),
                       doctest::Contains("'A'"), InvalidInput);
  // non-commuting square
  CHECK_THROWS_WITH_AS(bad(R"({"version": "qrep/1", "quiver": "v1 v2; a1: v1 -> v2",
      "representations": {"X": {"modules": {"v1": 1, "v2": 1}, "arrows": {"a1": [[2]]}}},
      "morphisms": {"m": {"source": "X", "target": "X", "components": {"v1": [[1]], "v2": [[3]]}}}})"),
                       doctest::Contains("morphism 'm'"), InvalidInput);
  // an arrow map that is not well defined on the torsion
  CHECK_THROWS_WITH_AS(bad(R"({"version": "qrep/1", "quiver": "v1 v2; a1: v1 -> v2",
      "representations": {"X": {"modules": {"v1": "Z/2", "v2": "Z/3"}, "arrows": {"a1": [[1]]}}}})"),
                       doctest::Contains("representation 'X'"), InvalidInput);
  // wrong matrix shape, unknown vertex, unknown job, bad element, torsion theory over a field
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "quiver": "v1 v2; a1: v1 -> v2",
      "representations": {"X": {"modules": {"v1": 1, "v2": 1}, "arrows": {"a1": [[1, 2]]}}}})"), InvalidInput);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "quiver": "v", "representations": {"X": {"modules": {"w": 1}}}})"),
                  InvalidInput);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "jobs": [{"kind": "dance"}]})"), InvalidInput);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "quiver": "v", "representations": {"X": {"modules": {"v": 1}}},
      "elements": {"e": {"rep": "X", "vertex": "v", "value": [1, 2]}}})"), InvalidInput);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "ring": "Q", "torsion": "p-primary:3"})"), Incompatible);
  CHECK_THROWS_AS(bad(R"({"version": "qrep/1", "representations": {"X": {}}})"), InvalidInput);
}

TEST_CASE("named modules and torsion theories") {
  const Document d = parse_document_text(R"({"version": "qrep/1", "ring": "Z", "torsion": "p-primary:2",
      "quiver": "v", "modules": {"T": {"generators": 2, "relations": [[4, 0], [0, 3]]}},
      "representations": {"X": {"modules": {"v": "T"}}}})");
  CHECK(d.torsion == TorsionTheorySpec::p_primary(2));
  CHECK(d.representations.at("X").module(0).describe() == FGModule::cyclic(Z, 12).describe());
  const std::string text = document_text(d);
  CHECK(round_trip(text) == text);
  CHECK(text.find("p-primary:2") != std::string::npos);
}

TEST_CASE("pretty printing keeps numeric rows inline") {
  const Json j = Json::parse(R"({"a": [[1, 2], [3, 4]], "b": {"c": []}, "d": [{"e": 1}]})");
  const std::string s = pretty_json(j);
  CHECK(s.find("[[1,2],[3,4]]") != std::string::npos);
  CHECK(Json::parse(s) == j);
  CHECK(s.back() == '\n');
}
