#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qrep/representation.hpp"

namespace qrep {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDocumentVersion = "qrep/1";

struct NamedElement {
  std::string rep;
  RepElement element;
};

struct NamedMorphism {
  std::string source;
  std::string target;
  RepMorphism morphism;
};

/// In-memory form of a document. Names are kept sorted, so serialization is
/// deterministic; every object is resolved and validated at load time.
struct Document {
  std::string version = kDocumentVersion;
  CoefficientRing ring;
  TorsionTheorySpec torsion = TorsionTheorySpec::classical();
  std::optional<Quiver> quiver;  // default quiver for representations
  std::map<std::string, FGModule> modules;
  std::map<std::string, ModuleMap> maps;
  std::map<std::string, Representation> representations;
  std::map<std::string, NamedMorphism> morphisms;
  std::map<std::string, NamedElement> elements;
  std::vector<Json> jobs;  // validated for shape only; run by the CLI

  bool empty() const {
    return modules.empty() && maps.empty() && representations.empty() && morphisms.empty() && elements.empty() &&
           jobs.empty();
  }
};

/// Throws InvalidInput (or ParseError for malformed JSON text).
Document parse_document(const Json& j);
Document parse_document_text(const std::string& text);
Json serialize_document(const Document& d);
/// Indented JSON with short arrays kept inline, trailing newline.
std::string pretty_json(const Json& j);
std::string document_text(const Document& d);

// Building blocks, shared with reports.
Json scalar_json(const Scalar& s);
Scalar parse_scalar(const Json& j, const CoefficientRing& ring);
/// A matrix as a list of rows.
Json matrix_json(const Matrix& m);
Matrix parse_matrix(const Json& j, const CoefficientRing& ring, std::size_t rows, std::size_t cols);
Json module_json(const FGModule& m);
FGModule parse_module(const Json& j, const CoefficientRing& ring, const std::map<std::string, FGModule>& named);
Json representation_json(const Representation& x, const std::optional<Quiver>& default_quiver);
Json morphism_json(const NamedMorphism& m);

/// Short module expressions: "Z", "Z^2", "Z/3", "Q^2", "F5", "Z/2+Z", "0".
/// The ring comes from the leading symbol(s); "0" needs `ring`.
FGModule parse_module_expr(const std::string& text, const std::optional<CoefficientRing>& ring = std::nullopt);

/// Element shorthand "1@v1" or "(1,2)@v1".
RepElement parse_element_expr(const std::string& text, const Representation& x);

}  // namespace qrep
