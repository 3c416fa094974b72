#include "qrep/document.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "qrep/error.hpp"

namespace qrep {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string require_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) throw InvalidInput(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InvalidInput(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Scalar parse_scalar_text(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidInput("empty scalar");
  for (char c : t)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw InvalidInput("malformed scalar '" + t + "'");
  Scalar s;
  if (s.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) throw InvalidInput("malformed scalar '" + t + "'");
  if (s.get_den() == 0) throw InvalidInput("zero denominator in '" + t + "'");
  s.canonicalize();
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

Json scalar_json(const Scalar& s) {
  if (s.get_den() == 1 && s.get_num().fits_slong_p()) return Json(s.get_num().get_si());
  return Json(format_scalar(s));
}

Scalar parse_scalar(const Json& j, const CoefficientRing& ring) {
  if (j.is_number_integer()) return ring.normalize(Scalar(j.get<long>()));
  if (j.is_string()) return ring.normalize(parse_scalar_text(j.get<std::string>()));
  throw InvalidInput("scalars must be integers or strings like \"1/2\"");
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix parse_matrix(const Json& j, const CoefficientRing& ring, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) throw InvalidInput("a matrix is a list of rows");
  Matrix m(ring, rows, cols);
  // with no rows or no columns any empty encoding is accepted
  if (rows == 0 || cols == 0) {
    for (const auto& r : j)
      if (!r.is_array() || !r.empty()) throw InvalidInput("expected an empty matrix");
    if (rows == 0 && !j.empty()) throw InvalidInput("expected an empty matrix");
    if (cols == 0 && !j.empty() && j.size() != rows) throw InvalidInput("matrix has the wrong number of rows");
    return m;
  }
  if (j.size() != rows)
    throw InvalidInput("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& r = j[i];
    if (!r.is_array() || r.size() != cols)
      throw InvalidInput("matrix row " + std::to_string(i + 1) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m.set(i, k, parse_scalar(r[k], ring));
  }
  return m;
}

Json module_json(const FGModule& m) {
  if (m.relations().cols() == 0) return Json(m.generators());
  Json rels = Json::array();
  const Matrix& r = m.relations();
  for (std::size_t k = 0; k < r.cols(); ++k) {
    Json col = Json::array();
    for (std::size_t i = 0; i < r.rows(); ++i) col.push_back(scalar_json(r(i, k)));
    rels.push_back(col);
  }
  Json j;
  j["generators"] = m.generators();
  j["relations"] = rels;
  return j;
}

FGModule parse_module(const Json& j, const CoefficientRing& ring, const std::map<std::string, FGModule>& named) {
  if (j.is_number_integer()) return FGModule::free(ring, as_count(j, "module"));
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (auto it = named.find(name); it != named.end()) return it->second;
    const FGModule m = parse_module_expr(name, ring);
    if (m.ring() != ring) throw Incompatible("module '" + name + "' is over " + m.ring().symbol());
    return m;
  }
  const std::size_t g = as_count(require(j, "generators", "module"), "module generators");
  Matrix rel(ring, g, 0);
  if (j.contains("relations")) {
    const Json& rj = j.at("relations");
    if (!rj.is_array()) throw InvalidInput("module relations must be a list of vectors");
    rel = Matrix(ring, g, rj.size());
    for (std::size_t k = 0; k < rj.size(); ++k) {
      if (!rj[k].is_array() || rj[k].size() != g)
        throw InvalidInput("each relation needs one entry per generator (" + std::to_string(g) + ")");
      for (std::size_t i = 0; i < g; ++i) rel.set(i, k, parse_scalar(rj[k][i], ring));
    }
  }
  return FGModule(ring, g, rel);
}

Json representation_json(const Representation& x, const std::optional<Quiver>& default_quiver) {
  Json j;
  if (!default_quiver || *default_quiver != x.quiver()) j["quiver"] = x.quiver().to_text();
  Json mods = Json::object();
  for (std::size_t v = 0; v < x.vertex_count(); ++v) mods[x.quiver().vertex_name(v)] = module_json(x.module(v));
  Json arrows = Json::object();
  for (std::size_t a = 0; a < x.quiver().arrow_count(); ++a) arrows[x.quiver().arrow(a).id] = matrix_json(x.map(a).matrix());
  j["modules"] = mods;
  j["arrows"] = arrows;
  return j;
}

Json morphism_json(const NamedMorphism& m) {
  Json j;
  j["source"] = m.source;
  j["target"] = m.target;
  Json comps = Json::object();
  const Quiver& q = m.morphism.source().quiver();
  for (std::size_t v = 0; v < q.vertex_count(); ++v) comps[q.vertex_name(v)] = matrix_json(m.morphism.component(v).matrix());
  j["components"] = comps;
  return j;
}

// ---------------------------------------------------------------------------

FGModule parse_module_expr(const std::string& text, const std::optional<CoefficientRing>& ring) {
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
    if (i == text.size() || text[i] == '+') {
      terms.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  std::optional<CoefficientRing> r = ring;
  std::vector<FGModule> parts;
  for (const std::string& t : terms) {
    if (t.empty()) throw InvalidInput("malformed module expression '" + text + "'");
    if (t == "0") continue;
    std::size_t i = 0;
    while (i < t.size() && t[i] != '^' && t[i] != '/') ++i;
    const CoefficientRing tr = CoefficientRing::parse(t.substr(0, i));
    if (r && *r != tr) throw Incompatible("module expression '" + text + "' mixes rings");
    r = tr;
    if (i == t.size()) {
      parts.push_back(FGModule::free(tr, 1));
    } else if (t[i] == '^') {
      const std::string k = t.substr(i + 1);
      if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("malformed exponent in '" + t + "'");
      parts.push_back(FGModule::free(tr, std::stoul(k)));
    } else {
      if (tr.is_field()) throw InvalidInput("cyclic quotients are only written over Z");
      parts.push_back(FGModule::cyclic(tr, parse_scalar_text(t.substr(i + 1))));
    }
  }
  if (!r) throw InvalidInput("module expression '" + text + "' needs a ring");
  if (parts.empty()) return FGModule::zero(*r);
  return direct_sum(parts);
}

RepElement parse_element_expr(const std::string& text, const Representation& x) {
  const std::size_t at = text.rfind('@');
  if (at == std::string::npos) throw InvalidInput("element must look like 1@v1 or (1,2)@v1");
  const std::size_t v = x.quiver().vertex_index(trim(text.substr(at + 1)));
  std::string body = trim(text.substr(0, at));
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
  std::vector<Scalar> entries;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i)
    if (i == body.size() || body[i] == ',') {
      entries.push_back(x.ring().normalize(parse_scalar_text(body.substr(start, i - start))));
      start = i + 1;
    }
  RepElement e{v, Matrix::column(x.ring(), entries)};
  check_element(x, e);
  return e;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
auto in_context(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Incompatible& e) {
    throw Incompatible(where + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

Representation parse_representation(const Json& j, const Document& d, const std::string& name) {
  const std::string where = "representation '" + name + "'";
  std::optional<Quiver> q = d.quiver;
  if (j.contains("quiver")) {
    if (!j.at("quiver").is_string()) throw InvalidInput(where + ": quiver must be grammar text");
    q = parse_quiver(j.at("quiver").get<std::string>());
  }
  if (!q) throw InvalidInput(where + ": no quiver given");
  const Json empty = Json::object();
  const Json& mj = j.contains("modules") ? j.at("modules") : empty;
  const Json& aj = j.contains("arrows") ? j.at("arrows") : empty;
  if (!mj.is_object() || !aj.is_object()) throw InvalidInput(where + ": modules and arrows must be objects");
  for (const auto& [k, _] : mj.items()) q->vertex_index(k);
  for (const auto& [k, _] : aj.items()) q->arrow_index(k);
  std::vector<FGModule> mods;
  for (std::size_t v = 0; v < q->vertex_count(); ++v) {
    const std::string& vn = q->vertex_name(v);
    mods.push_back(mj.contains(vn) ? parse_module(mj.at(vn), d.ring, d.modules) : FGModule::zero(d.ring));
  }
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < q->arrow_count(); ++a) {
    const Arrow& ar = q->arrow(a);
    const std::size_t rows = mods[ar.target].generators(), cols = mods[ar.source].generators();
    mats.push_back(aj.contains(ar.id) ? parse_matrix(aj.at(ar.id), d.ring, rows, cols) : Matrix(d.ring, rows, cols));
  }
  return Representation(*q, d.ring, mods, mats);
}

const Representation& find_rep(const Document& d, const std::string& name, const std::string& where) {
  auto it = d.representations.find(name);
  if (it == d.representations.end()) throw InvalidInput(where + ": unknown representation '" + name + "'");
  return it->second;
}

const std::vector<std::string> kJobKinds = {"check", "cover-verify", "cover-build", "trace", "decompose",
                                            "classify-quiver"};

}  // namespace

Document parse_document(const Json& j) {
  if (!j.is_object()) throw InvalidInput("a document is a JSON object");
  Document d;
  d.version = require_string(j, "version", "document");
  if (d.version != kDocumentVersion) throw InvalidInput("unsupported document version '" + d.version + "'");
  for (const auto& [k, _] : j.items())
    if (k != "version" && k != "ring" && k != "torsion" && k != "quiver" && k != "modules" && k != "maps" &&
        k != "representations" && k != "morphisms" && k != "elements" && k != "jobs")
      throw InvalidInput("unknown document field '" + k + "'");
  if (j.contains("ring")) d.ring = CoefficientRing::parse(require_string(j, "ring", "document"));
  d.torsion = j.contains("torsion") ? TorsionTheorySpec::parse(require_string(j, "torsion", "document"))
                                    : TorsionTheorySpec::default_for(d.ring);
  d.torsion.validate_for(d.ring);
  if (j.contains("quiver")) d.quiver = parse_quiver(require_string(j, "quiver", "document"));

  auto section = [&](const char* key) -> Json {
    if (!j.contains(key)) return Json::object();
    if (!j.at(key).is_object()) throw InvalidInput(std::string("section '") + key + "' must be an object");
    return j.at(key);
  };
  const Json modules_j = section("modules"), maps_j = section("maps"), representations_j = section("representations"),
             morphisms_j = section("morphisms"), elements_j = section("elements");
  // modules may refer to earlier names only through expressions, so no cycles
  for (const auto& [name, mj] : modules_j.items()) d.modules.emplace(name, parse_module(mj, d.ring, {}));
  for (const auto& [name, fj] : maps_j.items()) {
    const std::string where = "map '" + name + "'";
    d.maps.emplace(name, in_context(where, [&] {
      const FGModule s = parse_module(require(fj, "source", where), d.ring, d.modules);
      const FGModule t = parse_module(require(fj, "target", where), d.ring, d.modules);
      const Matrix m = parse_matrix(require(fj, "matrix", where), d.ring, t.generators(), s.generators());
      return ModuleMap(s, t, m);
    }));
  }
  for (const auto& [name, rj] : representations_j.items())
    d.representations.emplace(name, in_context("representation '" + name + "'", [&] { return parse_representation(rj, d, name); }));
  for (const auto& [name, mj] : morphisms_j.items()) {
    const std::string where = "morphism '" + name + "'";
    NamedMorphism nm;
    nm.source = require_string(mj, "source", where);
    nm.target = require_string(mj, "target", where);
    const Representation& x = find_rep(d, nm.source, where);
    const Representation& y = find_rep(d, nm.target, where);
    if (x.quiver() != y.quiver()) throw Incompatible(where + ": source and target have different quivers");
    const Json comps = mj.contains("components") ? mj.at("components") : Json::object();
    if (!comps.is_object()) throw InvalidInput(where + ": components must be an object");
    for (const auto& [k, _] : comps.items()) x.quiver().vertex_index(k);
    nm.morphism = in_context(where, [&] {
      std::vector<Matrix> mats;
      for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        const std::string& vn = x.quiver().vertex_name(v);
        const std::size_t rows = y.module(v).generators(), cols = x.module(v).generators();
        mats.push_back(comps.contains(vn) ? parse_matrix(comps.at(vn), d.ring, rows, cols)
                                          : Matrix(d.ring, rows, cols));
      }
      return RepMorphism(x, y, mats);
    });
    d.morphisms.emplace(name, nm);
  }
  for (const auto& [name, ej] : elements_j.items()) {
    const std::string where = "element '" + name + "'";
    NamedElement ne;
    ne.rep = require_string(ej, "rep", where);
    const Representation& x = find_rep(d, ne.rep, where);
    const std::size_t v = x.quiver().vertex_index(require_string(ej, "vertex", where));
    const Json& val = require(ej, "value", where);
    if (!val.is_array()) throw InvalidInput(where + ": value must be a list");
    if (val.size() != x.module(v).generators()) throw InvalidInput(where + ": value has the wrong length");
    std::vector<Scalar> entries;
    in_context(where, [&] {
      for (const auto& s : val) entries.push_back(parse_scalar(s, d.ring));
      ne.element = {v, Matrix::column(d.ring, entries)};
      if (entries.empty()) ne.element.value = Matrix(d.ring, 0, 1);
      check_element(x, ne.element);
      return 0;
    });
    d.elements.emplace(name, ne);
  }
  if (j.contains("jobs")) {
    if (!j.at("jobs").is_array()) throw InvalidInput("jobs must be a list");
    for (const auto& job : j.at("jobs")) {
      const std::string kind = require_string(job, "kind", "job");
      if (std::find(kJobKinds.begin(), kJobKinds.end(), kind) == kJobKinds.end())
        throw InvalidInput("unknown job kind '" + kind + "'");
      d.jobs.push_back(job);
    }
  }
  return d;
}

Document parse_document_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
  return parse_document(j);
}

Json serialize_document(const Document& d) {
  Json j;
  j["version"] = d.version;
  j["ring"] = d.ring.symbol();
  j["torsion"] = d.torsion.to_string();
  if (d.quiver) j["quiver"] = d.quiver->to_text();
  Json mods = Json::object();
  for (const auto& [n, m] : d.modules) mods[n] = module_json(m);
  Json maps = Json::object();
  for (const auto& [n, f] : d.maps) {
    Json fj;
    fj["source"] = module_json(f.source());
    fj["target"] = module_json(f.target());
    fj["matrix"] = matrix_json(f.matrix());
    maps[n] = fj;
  }
  Json reps = Json::object();
  for (const auto& [n, x] : d.representations) reps[n] = representation_json(x, d.quiver);
  Json mors = Json::object();
  for (const auto& [n, m] : d.morphisms) mors[n] = morphism_json(m);
  Json els = Json::object();
  for (const auto& [n, e] : d.elements) {
    const Representation& x = d.representations.at(e.rep);
    Json ej;
    ej["rep"] = e.rep;
    ej["vertex"] = x.quiver().vertex_name(e.element.vertex);
    Json val = Json::array();
    for (std::size_t i = 0; i < e.element.value.rows(); ++i) val.push_back(scalar_json(e.element.value(i, 0)));
    ej["value"] = val;
    els[n] = ej;
  }
  j["modules"] = mods;
  j["maps"] = maps;
  j["representations"] = reps;
  j["morphisms"] = mors;
  j["elements"] = els;
  j["jobs"] = Json(d.jobs);
  return j;
}

namespace {

// arrays of scalars (and of such arrays) stay on one line
bool inline_json(const Json& j) {
  if (!j.is_structured()) return true;
  if (j.empty()) return true;
  if (j.is_object()) return false;
  for (const Json& e : j) {
    if (e.is_object() && !e.empty()) return false;
    if (e.is_array())
      for (const Json& f : e)
        if (f.is_structured() && !f.empty()) return false;
  }
  return true;
}

void write_json(std::string& out, const Json& j, std::size_t depth) {
  if (inline_json(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(2 * (depth + 1), ' ');
  out += j.is_array() ? "[\n" : "{\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += Json(it.key()).dump() + ": ";
    write_json(out, it.value(), depth + 1);
  }
  out += "\n" + std::string(2 * depth, ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string pretty_json(const Json& j) {
  std::string out;
  write_json(out, j, 0);
  return out + "\n";
}

std::string document_text(const Document& d) { return pretty_json(serialize_document(d)); }

}  // namespace qrep
