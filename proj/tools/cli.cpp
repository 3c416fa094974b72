#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "qrep/covers.hpp"
#include "qrep/document.hpp"
#include "qrep/error.hpp"
#include "qrep/path_ring.hpp"

namespace qrep::cli {

namespace {

struct Options {
  std::string ring;
  std::string torsion;
  std::string family;
  std::optional<std::size_t> bound;
  std::string format = "text";
};

struct Report {
  Json tree = Json::object();
  std::vector<std::string> lines;
  std::vector<std::string> notes;  // stderr side channel (certificates of emitted documents)
  int code = 0;
  bool error = false;

  void add(std::string s) { lines.push_back(std::move(s)); }
  void raise(int c) { code = std::max(code, c); }
};

const char* yn(bool b) { return b ? "yes" : "no"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Document load_document(const std::string& path, const Options& o) {
  Document d = parse_document_text(read_file(path));
  if (!o.ring.empty()) {
    const CoefficientRing r = CoefficientRing::parse(o.ring);
    if (r != d.ring)
      throw Incompatible("document is over " + d.ring.symbol() + " but --ring " + r.symbol() + " was given");
  }
  if (!o.torsion.empty()) {
    d.torsion = TorsionTheorySpec::parse(o.torsion);
    d.torsion.validate_for(d.ring);
  }
  return d;
}

std::string element_text(const RepElement& e, const Quiver& q) {
  std::string body;
  for (std::size_t i = 0; i < e.value.rows(); ++i) body += (i ? "," : "") + e.value(i, 0).get_str();
  if (e.value.rows() != 1) body = "(" + body + ")";
  return body + "@" + q.vertex_name(e.vertex);
}

std::string morphism_text(const RepMorphism& m) {
  const Quiver& q = m.source().quiver();
  std::string s;
  for (std::size_t v = 0; v < q.vertex_count(); ++v)
    s += (v ? ", " : "") + q.vertex_name(v) + ": " + m.component(v).matrix().to_string();
  return s;
}

Json morphism_tree(const RepMorphism& m) {
  Json j = Json::object();
  const Quiver& q = m.source().quiver();
  for (std::size_t v = 0; v < q.vertex_count(); ++v) j[q.vertex_name(v)] = matrix_json(m.component(v).matrix());
  return j;
}

const char* class_name(MemberClass c) {
  return c == MemberClass::ComponentwiseFlat ? "componentwise flat" : "categorical flat";
}

const Representation& find_rep(const Document& d, const std::string& name) {
  auto it = d.representations.find(name);
  if (it == d.representations.end()) throw InvalidInput("unknown representation '" + name + "'");
  return it->second;
}

/// Named representation, or the only one in the document.
std::string pick_rep(const Document& d, const std::string& name) {
  if (!name.empty()) {
    find_rep(d, name);
    return name;
  }
  if (d.representations.size() != 1)
    throw InvalidInput("name a representation (the document has " + std::to_string(d.representations.size()) + ")");
  return d.representations.begin()->first;
}

// ---------------------------------------------------------------------------
// check

const std::vector<std::string> kRepProperties = {"flat-cw", "torsion-free-cw", "torsion-cw", "injective",
                                                 "categorical-flat"};
const std::vector<std::string> kMorphismProperties = {"mono", "epi", "iso", "pure"};

struct Outcome {
  std::string status;  // pass | fail | refused | unknown
  std::string detail;
};

std::string failing_vertices(const Quiver& q, const std::vector<bool>& ok) {
  std::string s;
  for (std::size_t v = 0; v < ok.size(); ++v)
    if (!ok[v]) s += (s.empty() ? "" : ", ") + q.vertex_name(v);
  return s;
}

Outcome check_rep_property(const Representation& x, const std::string& p, const TorsionTheorySpec& tt) {
  const Quiver& q = x.quiver();
  auto per_vertex = [&](auto pred) {
    const RepClassification c = classify_rep(x, tt);
    std::vector<bool> ok;
    for (const ModuleClassification& m : c.vertices) ok.push_back(pred(m));
    const std::string bad = failing_vertices(q, ok);
    return bad.empty() ? Outcome{"pass", ""} : Outcome{"fail", "fails at " + bad};
  };
  if (p == "flat-cw") return per_vertex([](const ModuleClassification& m) { return m.flat; });
  if (p == "torsion-free-cw") return per_vertex([](const ModuleClassification& m) { return m.torsion_free; });
  if (p == "torsion-cw") return per_vertex([](const ModuleClassification& m) { return m.torsion; });
  if (p == "injective") {
    try {
      if (is_injective_rep(x)) return {"pass", ""};
    } catch (const Refusal& e) {
      return {"refused", e.what()};
    }
    const InjectivityConditions c = injectivity_conditions(x);
    std::string detail;
    if (!c.all_i()) detail += "condition (i) fails at " + failing_vertices(q, c.condition_i);
    if (!c.all_ii())
      detail += (detail.empty() ? "" : "; ") + std::string("condition (ii) fails at ") +
                failing_vertices(q, c.condition_ii);
    return {"fail", detail};
  }
  const CategoricalFlatReport r = categorical_flat_report(x);
  if (r.verdict == TriState::Yes) return {"pass", ""};
  return {r.verdict == TriState::No ? "fail" : "unknown", r.reason};
}

Outcome check_morphism_property(const RepMorphism& m, const std::string& p) {
  if (p == "mono") return {m.is_injective() ? "pass" : "fail", ""};
  if (p == "epi") return {m.is_surjective() ? "pass" : "fail", ""};
  if (p == "iso") return {m.is_isomorphism() ? "pass" : "fail", ""};
  if (!m.is_injective()) return {"fail", "not a monomorphism"};
  if (!is_componentwise_pure_subrep(image(m))) return {"fail", "image is not componentwise pure"};
  return {"pass", ""};
}

Report cmd_check(const Document& d, const std::string& target, const std::vector<std::string>& props) {
  if (d.representations.empty() && d.morphisms.empty())
    throw InvalidInput("nothing to check: the document has no representations or morphisms");
  std::vector<std::string> rep_props, mor_props;
  for (const std::string& p : props)
    (std::find(kRepProperties.begin(), kRepProperties.end(), p) != kRepProperties.end() ? rep_props : mor_props)
        .push_back(p);
  const bool survey = props.empty();
  if (survey) {
    rep_props = kRepProperties;
    mor_props = kMorphismProperties;
  }

  struct Target {
    std::string name;
    bool is_rep;
  };
  std::vector<Target> targets;
  if (!target.empty()) {
    const bool rep = d.representations.count(target) > 0;
    if (!rep && !d.morphisms.count(target)) throw InvalidInput("unknown target '" + target + "'");
    if (!survey && rep && !mor_props.empty())
      throw InvalidInput("--" + mor_props.front() + " applies to morphisms; '" + target + "' is a representation");
    if (!survey && !rep && !rep_props.empty())
      throw InvalidInput("--" + rep_props.front() + " applies to representations; '" + target + "' is a morphism");
    targets.push_back({target, rep});
  } else {
    if (!rep_props.empty())
      for (const auto& [n, _] : d.representations) targets.push_back({n, true});
    if (!mor_props.empty())
      for (const auto& [n, _] : d.morphisms) targets.push_back({n, false});
    if (targets.empty()) throw InvalidInput("no target in the document admits the requested properties");
  }

  Report r;
  r.tree["command"] = "check";
  r.tree["torsion"] = d.torsion.to_string();
  r.tree["survey"] = survey;
  if (survey) r.add("survey (no properties requested; failures do not set the exit code)");
  Json results = Json::array();
  for (const Target& t : targets) {
    for (const std::string& p : t.is_rep ? rep_props : mor_props) {
      const Outcome o = t.is_rep ? check_rep_property(d.representations.at(t.name), p, d.torsion)
                                 : check_morphism_property(d.morphisms.at(t.name).morphism, p);
      std::string line = "check " + t.name + ": " + p + ": " + o.status;
      if (!o.detail.empty()) line += " (" + o.detail + ")";
      r.add(line);
      if (o.status == "unknown") r.add("warning: " + p + " of " + t.name + " is undecided here; not counted as a failure");
      if (!survey) r.raise(o.status == "fail" ? 1 : o.status == "refused" ? 2 : 0);
      results.push_back({{"target", t.name},
                         {"kind", t.is_rep ? "representation" : "morphism"},
                         {"property", p},
                         {"status", o.status},
                         {"detail", o.detail}});
    }
  }
  r.tree["results"] = results;
  return r;
}

// ---------------------------------------------------------------------------
// cover verify

TestFamily resolve_family(const std::string& name, const Quiver& q, const CoefficientRing& ring,
                          const Options& o) {
  try {
    return family_by_name(name, q, ring);
  } catch (const InvalidInput&) {
    if (!std::filesystem::is_regular_file(name)) throw;
  }
  // a document whose representations are the members, in name order
  const Document fd = load_document(name, o);
  TestFamily f{"file " + name, MemberClass::CategoricalFlat, {}};
  for (const auto& [n, x] : fd.representations) {
    if (x.quiver() != q || x.ring() != ring)
      throw Incompatible("family member '" + n + "' lives on a different quiver or ring");
    if (is_categorical_flat(x) != TriState::Yes) f.member_class = MemberClass::ComponentwiseFlat;
    f.members.push_back(x);
  }
  if (f.members.empty()) throw InvalidInput("family file '" + name + "' has no representations");
  return f;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QREP_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(std::string("QREP_SEED must be a non-negative integer, got '") + s + "'");
  }
}

Report cmd_cover_verify(const Document& d, const std::string& name, const std::string& family_name,
                        std::size_t bound, const Options& o) {
  auto it = d.morphisms.find(name);
  if (it == d.morphisms.end()) throw InvalidInput("unknown morphism '" + name + "'");
  const RepMorphism& psi = it->second.morphism;
  TestFamily fam = resolve_family(family_name, psi.source().quiver(), d.ring, o);
  const std::optional<std::uint64_t> seed = env_seed();
  if (seed) shuffle_family(fam, *seed);
  const CoverVerdict v = cover_verdict(psi, fam, bound);
  const PrecoverReport& p = v.precover;

  Report r;
  r.add("cover verify " + name + ": " + it->second.source + " -> " + it->second.target);
  r.add("family: " + fam.name + " (" + std::to_string(fam.members.size()) + " members, " +
        class_name(fam.member_class) + ")");
  if (seed) r.add("order: shuffled with seed " + std::to_string(*seed));
  r.add("bound: " + std::to_string(bound));
  for (const std::string& w : p.warnings) r.add("warning: " + w);
  if (p.pass) {
    r.add("precover: pass (" + std::to_string(p.members_tested) + " members tested, " +
          std::to_string(p.lifts_checked) + " lifts checked)");
  } else {
    r.add("precover: fail at member " + std::to_string(*p.failing_member + 1));
    if (p.witness) r.add("non-lifting test morphism: " + morphism_text(*p.witness));
  }
  if (v.cover == CoverStatus::Unknown)
    r.add("warning: verdict Unknown after " + std::to_string(v.samples_tried) + " samples (family " + fam.name +
          ", bound " + std::to_string(bound) + ")");
  r.add("verdict: " + to_string(v.cover));
  r.add("reason: " + v.reason);
  if (p.pass && !v.endomorphism_lattice.empty())
    r.add("endomorphism lattice: rank " + std::to_string(v.endomorphism_lattice.size()) +
          ", nilpotent: " + yn(v.lattice_nilpotent));
  if (v.witness) r.add("witness: " + morphism_text(*v.witness));
  if (p.pass) r.add("samples: " + std::to_string(v.samples_tried) + " of " + std::to_string(v.sample_bound));
  r.raise(v.cover == CoverStatus::NotCover ? 1 : 0);

  Json pj = {{"pass", p.pass},
             {"members_tested", p.members_tested},
             {"lifts_checked", p.lifts_checked},
             {"warnings", p.warnings}};
  if (p.failing_member) pj["failing_member"] = *p.failing_member + 1;
  if (p.witness) pj["non_lifting"] = morphism_tree(*p.witness);
  r.tree = {{"command", "cover verify"},
            {"morphism", name},
            {"family", {{"name", fam.name}, {"members", fam.members.size()}, {"class", class_name(fam.member_class)}}},
            {"bound", bound},
            {"precover", pj},
            {"verdict", to_string(v.cover)},
            {"reason", v.reason},
            {"lattice_rank", v.endomorphism_lattice.size()},
            {"lattice_nilpotent", v.lattice_nilpotent},
            {"samples_tried", v.samples_tried}};
  if (seed) r.tree["seed"] = *seed;
  if (v.witness) r.tree["witness"] = morphism_tree(*v.witness);
  return r;
}

// ---------------------------------------------------------------------------
// cover build

ModuleMap resolve_map(const std::string& spec, const std::optional<Document>& base,
                      const std::optional<CoefficientRing>& ring) {
  if (base) {
    auto it = base->maps.find(spec);
    if (it != base->maps.end()) return it->second;
  }
  if (spec.rfind("id_", 0) == 0) return ModuleMap::identity(parse_module_expr(spec.substr(3), ring));
  throw InvalidInput("unknown map '" + spec + "' (expected a map name from the document or id_<module>)");
}

struct BuildArgs {
  std::string recipe;
  std::string phi;
  std::string aux;
  std::string envelope;
};

Report cmd_cover_build(const BuildArgs& a, const std::optional<Document>& base, const Options& o) {
  std::optional<CoefficientRing> ring;
  if (!o.ring.empty()) ring = CoefficientRing::parse(o.ring);
  else if (base) ring = base->ring;
  const Recipe recipe = parse_recipe(a.recipe);
  ModuleCoverData data;
  data.phi = resolve_map(a.phi, base, ring);
  if (!a.aux.empty()) data.aux_cover = resolve_map(a.aux, base, data.phi.source().ring());
  if (!a.envelope.empty()) data.cotorsion_envelope = resolve_map(a.envelope, base, data.phi.source().ring());
  const RecipeResult built = build_recipe(recipe, data);
  const CoefficientRing& r = built.candidate.source().ring();
  const Quiver& q = built.candidate.source().quiver();

  Document out;
  if (base) {
    out = *base;
    if (out.ring != r) throw Incompatible("recipe output is over " + r.symbol() + ", the document over " + out.ring.symbol());
  } else {
    out.ring = r;
    out.torsion = o.torsion.empty() ? TorsionTheorySpec::default_for(r) : TorsionTheorySpec::parse(o.torsion);
    out.torsion.validate_for(r);
  }
  if (!out.quiver) out.quiver = q;
  auto claim = [&](auto& section, const std::string& key, auto value) {
    if (section.count(key)) throw InvalidInput("the document already has an object named '" + key + "'");
    section.emplace(key, std::move(value));
  };
  claim(out.maps, "cover_phi", data.phi);
  if (data.aux_cover) claim(out.maps, "cover_aux", *data.aux_cover);
  if (data.cotorsion_envelope) claim(out.maps, "cover_envelope", *data.cotorsion_envelope);
  claim(out.representations, "cover_source", built.candidate.source());
  claim(out.representations, "cover_target", built.candidate.target());
  claim(out.morphisms, "cover", NamedMorphism{"cover_source", "cover_target", built.candidate});
  const std::string fam = o.family.empty() ? default_family(recipe, q, r).name : o.family;
  out.jobs.push_back(Json{{"kind", "cover-verify"},
                          {"morphism", "cover"},
                          {"family", fam},
                          {"bound", o.bound.value_or(8)}});

  const std::string text = document_text(out);
  if (document_text(parse_document_text(text)) != text)
    throw std::logic_error("emitted document does not round-trip");
  Report rep;
  rep.tree = serialize_document(out);
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) rep.add(line);
  rep.notes.push_back("recipe " + to_string(recipe) + ": candidate cover_source -> cover_target");
  for (const std::string& c : built.certificate) rep.notes.push_back("certificate: " + c);
  return rep;
}

// ---------------------------------------------------------------------------
// trace

bool parts_pure(const std::vector<Submodule>& parts) {
  return std::all_of(parts.begin(), parts.end(), [](const Submodule& s) { return is_pure_submodule(s); });
}

Report trace_pure_closure(const Document& d, const std::string& rep_name, const std::string& element) {
  if (element.empty()) throw InvalidInput("pure-closure needs --element (a name or an expression like 1@v1)");
  std::string name = rep_name;
  RepElement e;
  if (auto it = d.elements.find(element); it != d.elements.end()) {
    if (!name.empty() && name != it->second.rep)
      throw InvalidInput("element '" + element + "' belongs to '" + it->second.rep + "', not '" + name + "'");
    name = it->second.rep;
    e = it->second.element;
  } else {
    name = pick_rep(d, name);
    e = parse_element_expr(element, d.representations.at(name));
  }
  const Representation& x = d.representations.at(name);
  const PureClosure pc = pure_closure_rep(x, e);

  Report r;
  const std::string et = element_text(e, x.quiver());
  r.add("pure closure of " + et + " in " + name);
  Json steps = Json::array();
  for (std::size_t i = 0; i < pc.trace.size(); ++i) {
    const ClosureStep& s = pc.trace[i];
    const bool closed = is_closed_family(x, s.parts), pure = parts_pure(s.parts);
    r.add("step " + std::to_string(i + 1) + " " + s.description + "; closed: " + yn(closed) + "; pure: " + yn(pure));
    steps.push_back({{"kind", s.kind == ClosureStep::Kind::Generate ? "generate" : "purify"},
                     {"description", s.description},
                     {"closed", closed},
                     {"pure", pure}});
  }
  const bool whole = pc.result.is_whole();
  const bool contains = pc.result.contains(e), pure = is_componentwise_pure_subrep(pc.result);
  r.add("result: " + (whole ? std::string("whole representation") : pc.result.representation().describe()));
  r.add(std::string("contains ") + et + ": " + yn(contains) + "; componentwise pure: " + yn(pure));
  r.add("index bound: " + (pc.index_bound ? pc.index_bound->get_str() : std::string("infinite")));
  if (!contains || !pure) {
    r.add("invariant violated: the closure must contain the element and be componentwise pure");
    r.raise(1);
  }
  r.tree = {{"trace", "pure-closure"}, {"representation", name}, {"element", et}, {"steps", steps},
            {"whole", whole}, {"contains", contains}, {"pure", pure}};
  r.tree["index_bound"] = pc.index_bound ? Json(pc.index_bound->get_str()) : Json(nullptr);
  return r;
}

Report trace_filtration(const Document& d, const std::string& rep_name) {
  const std::string name = pick_rep(d, rep_name);
  const Representation& x = d.representations.at(name);
  const Filtration f = small_filtration(x);
  Report r;
  r.add("filtration of " + name + ": " + std::to_string(f.steps.size()) + " stages");
  Json stages = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < f.steps.size(); ++i) {
    const FiltrationStep& s = f.steps[i];
    const bool flat = is_flat_cw(s.quotient);
    ok = ok && flat;
    r.add("stage " + std::to_string(i + 1) + ": adds " + element_text(s.element, x.quiver()) + " (" +
          std::to_string(s.closure_steps) + " closure steps); quotient " + s.quotient.describe() +
          "; quotient flat-cw: " + yn(flat));
    stages.push_back({{"element", element_text(s.element, x.quiver())},
                      {"closure_steps", s.closure_steps},
                      {"quotient", s.quotient.describe()},
                      {"quotient_flat_cw", flat}});
  }
  const bool exhausts = f.steps.empty() ? x.is_zero() : f.steps.back().stage.is_whole();
  ok = ok && exhausts;
  r.add(std::string("union equals input: ") + yn(exhausts));
  if (!ok) {
    r.add("invariant violated: every quotient must be componentwise flat and the union the whole input");
    r.raise(1);
  }
  r.tree = {{"trace", "filtration"}, {"representation", name}, {"stages", stages}, {"union_is_input", exhausts}};
  return r;
}

std::string tagged(const Barcode& b) {
  std::string s;
  for (const Interval& i : b.intervals)
    if (i.injective) s += (s.empty() ? "" : " ") + i.to_string();
  return s.empty() ? "none" : s;
}

Report trace_barcode(const Document& d, const std::string& rep_name) {
  const std::string name = pick_rep(d, rep_name);
  const Representation& x = d.representations.at(name);
  const Barcode b = decompose_interval(x);
  const auto ranks = rank_invariant(x);
  Report r;
  r.add("barcode of " + name);
  Json rj = Json::array();
  for (std::size_t i = 0; i < ranks.size(); ++i)
    for (std::size_t j = i; j < ranks[i].size(); ++j) {
      r.add("rank " + x.quiver().vertex_name(i) + " -> " + x.quiver().vertex_name(j) + ": " +
            std::to_string(ranks[i][j]));
      rj.push_back({{"from", x.quiver().vertex_name(i)}, {"to", x.quiver().vertex_name(j)}, {"rank", ranks[i][j]}});
    }
  r.add("barcode: " + b.to_string());
  r.add("injective intervals: " + tagged(b));
  r.add("reconstruction: rank invariant matches");
  r.tree = {{"trace", "barcode"}, {"representation", name}, {"ranks", rj}, {"barcode", b.to_string()},
            {"injective", tagged(b)}};
  return r;
}

Report trace_annihilator(const Document& d, const std::string& rep_name) {
  const std::string name = pick_rep(d, rep_name);
  const Representation& x = d.representations.at(name);
  const AnnihilatorReport a = annihilator_witness(x);
  Report r;
  r.add("annihilator trace on " + name);
  r.add("s = " + a.element);
  if (a.vacuous) {
    r.add(a.summary());
  } else {
    r.add(std::string("annihilates: ") + yn(a.annihilates) + "; divisible: " + yn(a.divisible) +
          "; injective: " + yn(a.injective));
    r.add(std::string("s nonzero: ") + yn(a.s_nonzero) + "; condition (i): " + yn(a.conditions_i) +
          "; condition (ii): " + yn(a.conditions_ii));
    if (a.witness) r.add("witness: " + element_text(*a.witness, x.quiver()) + " is not of the form s·x");
  }
  r.tree = {{"trace", "annihilator"}, {"representation", name}, {"element", a.element},
            {"vacuous", a.vacuous}, {"annihilates", a.annihilates}, {"s_nonzero", a.s_nonzero},
            {"condition_i", a.conditions_i}, {"condition_ii", a.conditions_ii}, {"divisible", a.divisible},
            {"injective", a.injective}};
  if (a.witness) r.tree["witness"] = element_text(*a.witness, x.quiver());
  return r;
}

Report cmd_trace(const std::string& kind, const Document& d, const std::string& rep, const std::string& element) {
  if (kind == "pure-closure") return trace_pure_closure(d, rep, element);
  if (kind == "filtration") return trace_filtration(d, rep);
  if (kind == "barcode") return trace_barcode(d, rep);
  if (kind == "annihilator") return trace_annihilator(d, rep);
  throw InvalidInput("unknown trace '" + kind + "' (pure-closure, filtration, barcode, annihilator)");
}

// ---------------------------------------------------------------------------
// decompose, classify-quiver

Report cmd_decompose(const Document& d, const std::string& rep_name) {
  const std::string name = pick_rep(d, rep_name);
  const Representation& x = d.representations.at(name);
  const Barcode b = decompose_interval(x);
  const bool ranks_match = rank_invariant(reconstruct(b, x.quiver(), x.ring())) == rank_invariant(x);
  Report r;
  r.add("decomposition of " + name + " into intervals");
  Json ij = Json::array();
  for (const Interval& i : b.intervals) {
    r.add(i.to_string() + " x" + std::to_string(i.multiplicity) + (i.injective ? ", injective" : ""));
    ij.push_back({{"interval", i.to_string()}, {"multiplicity", i.multiplicity}, {"injective", i.injective}});
  }
  r.add("barcode: " + b.to_string());
  r.add(std::string("reconstruction rank invariant matches: ") + yn(ranks_match));
  if (!ranks_match) r.raise(1);
  r.tree = {{"command", "decompose"}, {"representation", name}, {"intervals", ij}, {"barcode", b.to_string()},
            {"reconstruction_matches", ranks_match}};
  return r;
}

Report classify(const Quiver& q) {
  const QuiverClassification c = classify_quiver(q);
  Report r;
  r.add("vertices: " + std::to_string(q.vertex_count()) + "; arrows: " + std::to_string(q.arrow_count()));
  if (q.tag()) r.add("family: " + to_string(*q.tag()));
  r.add(std::string("acyclic: ") + yn(c.acyclic));
  r.add(std::string("property (B): ") + yn(c.property_B));
  r.add("source injective: " + to_string(c.source_injective));
  r.add("reason: " + c.reason);
  r.tree = {{"command", "classify-quiver"}, {"quiver", q.to_text()}, {"acyclic", c.acyclic},
            {"property_B", c.property_B}, {"source_injective", to_string(c.source_injective)},
            {"reason", c.reason}};
  r.tree["family"] = q.tag() ? Json(to_string(*q.tag())) : Json(nullptr);
  return r;
}

/// A file holding a document or grammar text, or grammar text itself.
Report cmd_classify_quiver(const std::string& arg, const Options& o) {
  if (!std::filesystem::is_regular_file(arg)) return classify(parse_quiver(arg));
  const std::string text = read_file(arg);
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return classify(parse_quiver(text));
  const Document d = load_document(arg, o);
  if (!d.quiver) throw InvalidInput("the document has no quiver");
  return classify(*d.quiver);
}

// ---------------------------------------------------------------------------
// dispatch

Report guarded(const std::function<Report()>& f) {
  auto fail = [](int code, const std::string& prefix, const char* what) {
    Report r;
    r.error = true;
    r.code = code;
    r.add(prefix + what);
    r.tree = {{"error", prefix + what}};
    return r;
  };
  try {
    return f();
  } catch (const Refusal& e) {
    return fail(2, "refused: ", e.what());
  } catch (const PreconditionFailed& e) {
    return fail(1, "precondition failed: ", e.what());
  } catch (const InvalidInput& e) {
    return fail(2, "error: ", e.what());
  } catch (const std::exception& e) {
    return fail(2, "internal error: ", e.what());
  }
}

std::string job_string(const Json& job, const char* key, const std::string& fallback = "") {
  if (!job.contains(key)) return fallback;
  if (!job.at(key).is_string()) throw InvalidInput(std::string("job field '") + key + "' must be a string");
  return job.at(key).get<std::string>();
}

Report run_job(const Json& job, const Document& d, const Options& o) {
  const std::string kind = job.at("kind").get<std::string>();
  if (kind == "check") {
    std::vector<std::string> props;
    if (job.contains("properties")) {
      if (!job.at("properties").is_array()) throw InvalidInput("job field 'properties' must be a list");
      for (const auto& p : job.at("properties")) {
        const std::string s = p.get<std::string>();
        if (std::find(kRepProperties.begin(), kRepProperties.end(), s) == kRepProperties.end() &&
            std::find(kMorphismProperties.begin(), kMorphismProperties.end(), s) == kMorphismProperties.end())
          throw InvalidInput("unknown property '" + s + "'");
        props.push_back(s);
      }
    }
    return cmd_check(d, job_string(job, "target"), props);
  }
  if (kind == "cover-verify") {
    std::size_t bound = o.bound.value_or(8);
    if (job.contains("bound")) {
      if (!job.at("bound").is_number_unsigned()) throw InvalidInput("job field 'bound' must be a non-negative integer");
      bound = job.at("bound").get<std::size_t>();
    }
    return cmd_cover_verify(d, job_string(job, "morphism"),
                            job_string(job, "family", o.family.empty() ? "free<2>" : o.family), bound, o);
  }
  if (kind == "cover-build") {
    BuildArgs a{job_string(job, "recipe"), job_string(job, "phi"), job_string(job, "aux"),
                job_string(job, "envelope")};
    return cmd_cover_build(a, d, o);
  }
  if (kind == "trace") return cmd_trace(job_string(job, "trace"), d, job_string(job, "rep"), job_string(job, "element"));
  if (kind == "decompose") return cmd_decompose(d, job_string(job, "rep"));
  // classify-quiver
  if (job.contains("quiver")) return classify(parse_quiver(job_string(job, "quiver")));
  if (!d.quiver) throw InvalidInput("classify-quiver job without a quiver");
  return classify(*d.quiver);
}

Report cmd_run(const Document& d, const Options& o) {
  if (d.jobs.empty()) throw InvalidInput("the document has no jobs");
  Report r;
  Json jobs = Json::array();
  for (std::size_t i = 0; i < d.jobs.size(); ++i) {
    const Json& job = d.jobs[i];
    const Report jr = guarded([&] { return run_job(job, d, o); });
    r.add("job " + std::to_string(i + 1) + ": " + job.at("kind").get<std::string>() + " (exit " +
          std::to_string(jr.code) + ")");
    for (const std::string& l : jr.lines) r.add("  " + l);
    for (const std::string& n : jr.notes) r.notes.push_back("job " + std::to_string(i + 1) + ": " + n);
    jobs.push_back({{"kind", job.at("kind")}, {"exit", jr.code}, {"report", jr.tree}});
    r.raise(jr.code);
  }
  r.tree = {{"command", "run"}, {"jobs", jobs}};
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact computations with quiver representations, purity and covers", "qrep"};
  app.require_subcommand(1);
  app.add_option("--ring", o.ring, "Coefficient ring Z, Q or Fp; must match the document");
  app.add_option("--torsion", o.torsion, "Torsion theory: classical, p-primary:<p> or trivial");
  app.add_option("--family", o.family, "Test family free<k>, proj<k>, or a document file of members");
  app.add_option("--bound", o.bound, "Sampling bound for cover verdicts");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "tree"}));

  std::string doc_path, target, morphism, kind, rep, element, quiver;
  std::map<std::string, bool> flags;

  CLI::App* check = app.add_subcommand("check", "Check properties of a representation or morphism");
  check->add_option("document", doc_path, "Document file")->required();
  check->add_option("target", target, "Representation or morphism name (default: all)");
  for (const auto* list : {&kRepProperties, &kMorphismProperties})
    for (const std::string& p : *list) check->add_flag("--" + p, flags[p], "Check " + p);

  CLI::App* cover = app.add_subcommand("cover", "Cover verdicts and recipes");
  cover->require_subcommand(1);
  CLI::App* verify = cover->add_subcommand("verify", "Decide whether a morphism is a cover");
  verify->add_option("document", doc_path, "Document file")->required();
  verify->add_option("morphism", morphism, "Morphism name")->required();
  BuildArgs build_args;
  CLI::App* build = cover->add_subcommand("build", "Build a representation-level candidate from a module cover");
  build->add_option("recipe", build_args.recipe, "ex3.8, ex5.1.1, ex5.1.2, ex5.2, ex5.3.1 or ex5.3.2")->required();
  build->add_option("--phi", build_args.phi, "Module cover F -> M: a map name or id_<module>")->required();
  build->add_option("--aux", build_args.aux, "Auxiliary cover of the kernel");
  build->add_option("--envelope", build_args.envelope, "Cotorsion envelope F -> C");
  build->add_option("document", doc_path, "Document to append the built objects to");

  CLI::App* trace = app.add_subcommand("trace", "Step-by-step traces with certificates");
  trace->add_option("kind", kind, "Trace kind")
      ->required()
      ->check(CLI::IsMember({"pure-closure", "filtration", "barcode", "annihilator"}));
  trace->add_option("document", doc_path, "Document file")->required();
  trace->add_option("rep", rep, "Representation name (default: the only one)");
  trace->add_option("--element", element, "Element name or expression like 1@v1 or (1,2)@v1");

  CLI::App* decompose = app.add_subcommand("decompose", "Interval decomposition on a line quiver");
  decompose->add_option("document", doc_path, "Document file")->required();
  decompose->add_option("rep", rep, "Representation name (default: the only one)");

  CLI::App* classify_cmd = app.add_subcommand("classify-quiver", "Structural classification of a quiver");
  classify_cmd->add_option("quiver", quiver, "Quiver text, or a file with quiver text or a document")->required();

  CLI::App* run = app.add_subcommand("run", "Run the job list of a document in order");
  run->add_option("document", doc_path, "Document file")->required();

  for (CLI::App* sub : {check, cover, verify, build, trace, decompose, classify_cmd, run}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Report r = guarded([&]() -> Report {
    if (check->parsed()) {
      std::vector<std::string> props;
      for (const auto* list : {&kRepProperties, &kMorphismProperties})
        for (const std::string& p : *list)
          if (flags[p]) props.push_back(p);
      return cmd_check(load_document(doc_path, o), target, props);
    }
    if (verify->parsed())
      return cmd_cover_verify(load_document(doc_path, o), morphism, o.family.empty() ? "free<2>" : o.family,
                              o.bound.value_or(8), o);
    if (build->parsed()) {
      std::optional<Document> base;
      if (!doc_path.empty()) base = load_document(doc_path, o);
      return cmd_cover_build(build_args, base, o);
    }
    if (trace->parsed()) return cmd_trace(kind, load_document(doc_path, o), rep, element);
    if (decompose->parsed()) return cmd_decompose(load_document(doc_path, o), rep);
    if (classify_cmd->parsed()) return cmd_classify_quiver(quiver, o);
    return cmd_run(load_document(doc_path, o), o);
  });

  std::ostream& dest = r.error ? err : out;
  if (o.format == "tree" && !r.error) {
    Json t = r.tree;
    if (!t.contains("version")) t["exit"] = r.code;
    dest << pretty_json(t);
  } else {
    for (const std::string& l : r.lines) dest << l << "\n";
  }
  for (const std::string& n : r.notes) err << n << "\n";
  return r.code;
}

}  // namespace qrep::cli
