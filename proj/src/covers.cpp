#include "qrep/covers.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <sstream>

#include "qrep/error.hpp"
#include "qrep/lattice.hpp"
#include "qrep/linear_system.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// Lifting

std::optional<RepMorphism> factor_through(const RepMorphism& phi, const RepMorphism& psi) {
  if (phi.target() != psi.target()) throw Incompatible("factor_through: phi and psi need a common target");
  const Representation& y = phi.source();
  const Representation& xp = psi.source();
  const Representation& x = psi.target();
  const CoefficientRing& ring = x.ring();
  const Quiver& q = x.quiver();
  LinearSystem sys(ring);
  std::vector<LinearSystem::Block> blocks;
  for (std::size_t v = 0; v < q.vertex_count(); ++v)
    blocks.push_back(sys.add_unknown(xp.module(v).generators(), y.module(v).generators()));
  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    if (y.module(v).relations().cols() > 0)
      sys.add_equation({{Matrix::identity(ring, xp.module(v).generators()), blocks[v], y.module(v).relations()}},
                       nullptr, xp.module(v).relations());
    const Matrix c = -phi.component(v).matrix();
    sys.add_equation({{psi.component(v).matrix(), blocks[v], Matrix::identity(ring, y.module(v).generators())}},
                     &c, x.module(v).relations());
  }
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    sys.add_equation(
        {{xp.map(a).matrix(), blocks[ar.source], Matrix::identity(ring, y.module(ar.source).generators())},
         {-Matrix::identity(ring, xp.module(ar.target).generators()), blocks[ar.target], y.map(a).matrix()}},
        nullptr, xp.module(ar.target).relations());
  }
  const auto sol = sys.solve();
  if (!sol) return std::nullopt;
  std::vector<Matrix> mats(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(q.vertex_count()));
  RepMorphism f(y, xp, mats);
  if (!(psi * f).equals(phi)) throw std::logic_error("factor_through: solution does not verify");
  return f;
}

// ---------------------------------------------------------------------------
// Test families

namespace {

constexpr std::size_t kFamilyLimit = 20000;

void free_family_rec(const Quiver& q, const CoefficientRing& ring, std::size_t max_rank, std::vector<std::size_t>& ranks,
                     std::vector<Representation>& out) {
  if (ranks.size() == q.vertex_count()) {
    std::vector<FGModule> mods;
    for (auto r : ranks) mods.push_back(FGModule::free(ring, r));
    std::size_t bits = 0;
    for (const auto& a : q.arrows()) bits += ranks[a.source] * ranks[a.target];
    if (bits >= 20 || out.size() + (std::size_t{1} << bits) > kFamilyLimit)
      throw PreconditionFailed("test family too large; lower the rank bound");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      std::vector<Matrix> mats;
      std::size_t bit = 0;
      for (const auto& a : q.arrows()) {
        Matrix m(ring, ranks[a.target], ranks[a.source]);
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.cols(); ++j)
            if (code >> bit++ & 1U) m.set(i, j, Scalar(1));
        mats.push_back(m);
      }
      out.emplace_back(q, ring, mods, mats);
    }
    return;
  }
  for (std::size_t r = 0; r <= max_rank; ++r) {
    ranks.push_back(r);
    free_family_rec(q, ring, max_rank, ranks, out);
    ranks.pop_back();
  }
}

}  // namespace

TestFamily free_family(const Quiver& q, const CoefficientRing& ring, std::size_t max_rank) {
  TestFamily f{"free<" + std::to_string(max_rank) + ">", MemberClass::ComponentwiseFlat, {}};
  std::vector<std::size_t> ranks;
  free_family_rec(q, ring, max_rank, ranks, f.members);
  return f;
}

TestFamily proj_family(const Quiver& q, const CoefficientRing& ring, std::size_t max_summands) {
  TestFamily f{"proj<" + std::to_string(max_summands) + ">", MemberClass::CategoricalFlat, {}};
  std::vector<Representation> simple;
  for (std::size_t v = 0; v < q.vertex_count(); ++v) simple.push_back(s_functor(q, v, FGModule::free(ring, 1)).rep);
  // multisets of vertices of size 1..max_summands, as non-decreasing sequences
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!cur.empty()) {
      std::vector<Representation> parts;
      for (auto v : cur) parts.push_back(simple[v]);
      f.members.push_back(direct_sum(parts).sum);
    }
    if (cur.size() == max_summands) return;
    for (std::size_t v = from; v < q.vertex_count(); ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return f;
}

TestFamily family_by_name(const std::string& name, const Quiver& q, const CoefficientRing& ring) {
  static const std::regex re(R"(^(free|proj)(?:<(\d+)>|(\d+))$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) throw InvalidInput("unknown test family '" + name + "' (use free<k> or proj<k>)");
  const std::size_t k = std::stoul(m[2].matched ? m[2].str() : m[3].str());
  return m[1] == "free" ? free_family(q, ring, k) : proj_family(q, ring, k);
}

void shuffle_family(TestFamily& family, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(family.members.begin(), family.members.end(), rng);
}

// ---------------------------------------------------------------------------
// Precovers and covers

namespace {

bool in_class(const Representation& x, MemberClass c) {
  return c == MemberClass::ComponentwiseFlat ? is_flat_cw(x) : is_categorical_flat(x) == TriState::Yes;
}

const char* class_name(MemberClass c) {
  return c == MemberClass::ComponentwiseFlat ? "componentwise flat" : "categorical flat";
}

// Upper bound for the nilpotency index of a nilpotent algebra of
// endomorphisms: free rank plus torsion composition length, summed over vertices.
std::size_t length_bound(const Representation& x) {
  std::size_t n = 0;
  for (const auto& m : x.modules()) {
    n += m.normal_form().free_rank;
    for (const Scalar& d : m.normal_form().factors) {
      mpz_class r = abs(d.get_num());
      for (mpz_class p = 2; p * p <= r; ++p)
        while (r % p == 0) {
          r /= p;
          ++n;
        }
      if (r > 1) ++n;
    }
  }
  return n;
}

// Is every element of span(l) nilpotent? Words of length exactly k span W_k;
// the generated algebra is nilpotent iff W_N = 0 for N = length_bound + 1.
bool generates_nilpotent_algebra(const std::vector<RepMorphism>& l, const Representation& x) {
  const RepHomGroup end = rep_hom_group(x, x);
  auto span_of = [&](const std::vector<RepMorphism>& maps) {
    std::vector<Matrix> cols;
    for (const auto& f : maps) cols.push_back(*end.coordinates(f));
    return Submodule(end.group, Matrix::hstack(x.ring(), cols, end.group.generators()));
  };
  Submodule w = span_of(l);
  const std::size_t n = length_bound(x) + 1;
  for (std::size_t k = 1; k < n && !w.is_zero(); ++k) {
    std::vector<RepMorphism> words;
    const Matrix& gens = w.generators();
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      const RepMorphism g = end.combine(gens.col(j));
      for (const auto& b : l) words.push_back(b * g);
    }
    w = span_of(words);
  }
  return w.is_zero();
}

}  // namespace

PrecoverReport is_precover(const RepMorphism& psi, const TestFamily& family) {
  PrecoverReport r;
  r.family = family.name;
  if (!in_class(psi.source(), family.member_class))
    r.warnings.push_back(std::string("source of psi is not ") + class_name(family.member_class));
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const Representation& f = family.members[i];
    if (f.quiver() != psi.target().quiver() || f.ring() != psi.target().ring())
      throw Incompatible("test family member " + std::to_string(i) + " does not match the quiver or ring");
    if (!in_class(f, family.member_class))
      r.warnings.push_back("member " + std::to_string(i) + " is not " + class_name(family.member_class));
    ++r.members_tested;
    const RepHomGroup h = rep_hom_group(f, psi.target());
    for (const auto& b : h.basis) {
      ++r.lifts_checked;
      auto lift = factor_through(b, psi);
      if (!lift) {
        r.pass = false;
        r.failing_member = i;
        r.witness = b;
        return r;
      }
      r.certificates.push_back(*lift);
    }
  }
  return r;
}

std::string to_string(CoverStatus s) {
  switch (s) {
    case CoverStatus::IsCover: return "IsCover";
    case CoverStatus::NotCover: return "NotCover";
    case CoverStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

CoverVerdict cover_verdict(const RepMorphism& psi, const TestFamily& family, std::size_t sample_bound) {
  CoverVerdict v;
  v.sample_bound = sample_bound;
  v.precover = is_precover(psi, family);
  if (!v.precover.pass) {
    v.cover = CoverStatus::NotCover;
    v.reason = "not a precover: a test morphism from member " + std::to_string(*v.precover.failing_member) +
               " of " + family.name + " does not lift";
    return v;
  }
  const Representation& xp = psi.source();
  const SubRep k = kernel(psi);
  const RepHomGroup h = rep_hom_group(xp, k.representation());
  for (const auto& b : h.basis) {
    RepMorphism l = k.inclusion() * b;
    if (!l.is_zero()) v.endomorphism_lattice.push_back(l);
  }
  if (v.endomorphism_lattice.empty()) {
    v.cover = CoverStatus::IsCover;
    v.reason = "the only solution of psi f = psi is the identity (L = 0)";
    return v;
  }
  if (generates_nilpotent_algebra(v.endomorphism_lattice, xp)) {
    v.lattice_nilpotent = true;
    v.cover = CoverStatus::IsCover;
    v.reason = "every element of L is nilpotent, so every solution identity + l is an automorphism";
    return v;
  }
  const RepMorphism id = RepMorphism::identity(xp);
  for (const auto& b : v.endomorphism_lattice) {
    for (long c : {1L, -1L, 2L, -2L}) {
      if (v.samples_tried >= sample_bound) break;
      ++v.samples_tried;
      const RepMorphism f = id + b.scaled(Scalar(c));
      if (!f.is_isomorphism()) {
        if (!(psi * f).equals(psi)) throw std::logic_error("cover witness does not verify");
        v.cover = CoverStatus::NotCover;
        v.witness = f;
        v.reason = "psi f = psi with f not an automorphism";
        return v;
      }
    }
  }
  v.cover = CoverStatus::Unknown;
  v.reason = "sampled " + std::to_string(v.samples_tried) + " solutions (bound " + std::to_string(sample_bound) +
             "), all automorphisms";
  return v;
}

// ---------------------------------------------------------------------------
// Recipes

Submodule ModuleCoverData::kernel() const { return qrep::kernel(phi); }

namespace {

// The aux cover as a map G -> F with image in Ker phi.
ModuleMap aux_into_f(const ModuleCoverData& d) {
  const ModuleMap& g = *d.aux_cover;
  if (g.target() == d.phi.source()) {
    if (!(d.phi * g).is_zero()) throw InvalidInput("aux_cover must land in the kernel of phi");
    return g;
  }
  const Submodule k = d.kernel();
  if (g.target() == k.module()) return k.inclusion() * g;
  throw InvalidInput("aux_cover must map into the kernel of phi (or into its source)");
}

}  // namespace

void ModuleCoverData::validate() const {
  if (aux_cover) aux_into_f(*this);
  if (cotorsion_envelope) {
    const ModuleMap& i = *cotorsion_envelope;
    if (i.source() != phi.source()) throw InvalidInput("cotorsion_envelope must start at the source of phi");
    if (!i.is_injective()) throw InvalidInput("cotorsion_envelope must be injective");
    if (!is_flat_module(i.target())) throw InvalidInput("cotorsion_envelope must have a flat target");
  }
}

Recipe parse_recipe(const std::string& id) {
  static const std::vector<std::pair<std::string, Recipe>> names = {
      {"ex3.8", Recipe::Ex3_8}, {"ex5.1.1", Recipe::Ex5_1_1}, {"ex5.1.2", Recipe::Ex5_1_2},
      {"ex5.2", Recipe::Ex5_2}, {"ex5.3.1", Recipe::Ex5_3_1}, {"ex5.3.2", Recipe::Ex5_3_2}};
  for (const auto& [n, r] : names)
    if (n == id) return r;
  throw InvalidInput("unknown recipe '" + id + "'");
}

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::Ex3_8: return "ex3.8";
    case Recipe::Ex5_1_1: return "ex5.1.1";
    case Recipe::Ex5_1_2: return "ex5.1.2";
    case Recipe::Ex5_2: return "ex5.2";
    case Recipe::Ex5_3_1: return "ex5.3.1";
    case Recipe::Ex5_3_2: return "ex5.3.2";
  }
  return "";
}

TestFamily default_family(Recipe r, const Quiver& q, const CoefficientRing& ring) {
  switch (r) {
    case Recipe::Ex5_1_1:
    case Recipe::Ex5_2:
    case Recipe::Ex5_3_1: return proj_family(q, ring, 2);
    default: return free_family(q, ring, 2);
  }
}

RecipeResult build_recipe(Recipe r, const ModuleCoverData& data) {
  data.validate();
  const ModuleMap& phi = data.phi;
  const FGModule& f = phi.source();
  const FGModule& m = phi.target();
  const CoefficientRing& ring = f.ring();
  const FGModule zero = FGModule::zero(ring);
  auto need = [&](bool present, const char* field) {
    if (!present) throw InvalidInput(std::string("recipe ") + to_string(r) + " needs " + field);
  };
  auto zmap = [&](const FGModule& a, const FGModule& b) { return ModuleMap::zero(a, b).matrix(); };

  RecipeResult out;
  out.recipe = r;
  Representation src, tgt;
  std::vector<Matrix> comps;
  const Quiver a2 = Quiver::line(2);
  const Quiver a3 = Quiver::line(3);
  switch (r) {
    case Recipe::Ex3_8: {
      const Submodule k = data.kernel();
      src = Representation(a2, ring, {k.module(), f}, {k.inclusion().matrix()});
      tgt = Representation(a2, ring, {zero, m}, {zmap(zero, m)});
      comps = {zmap(k.module(), zero), phi.matrix()};
      break;
    }
    case Recipe::Ex5_1_1:
      src = Representation(a2, ring, {zero, f}, {zmap(zero, f)});
      tgt = Representation(a2, ring, {zero, m}, {zmap(zero, m)});
      comps = {zmap(zero, zero), phi.matrix()};
      break;
    case Recipe::Ex5_1_2: {
      need(data.aux_cover.has_value(), "aux_cover");
      const ModuleMap t = aux_into_f(data);
      src = Representation(a2, ring, {t.source(), f}, {t.matrix()});
      tgt = Representation(a2, ring, {zero, m}, {zmap(zero, m)});
      comps = {zmap(t.source(), zero), phi.matrix()};
      break;
    }
    case Recipe::Ex5_2:
      src = Representation(a2, ring, {f, f}, {Matrix::identity(ring, f.generators())});
      tgt = Representation(a2, ring, {m, m}, {Matrix::identity(ring, m.generators())});
      comps = {phi.matrix(), phi.matrix()};
      break;
    case Recipe::Ex5_3_1: {
      need(data.cotorsion_envelope.has_value(), "cotorsion_envelope");
      const ModuleMap& i = *data.cotorsion_envelope;
      const FGModule& c = i.target();
      const FGModule cf = direct_sum(std::vector<FGModule>{c, f});
      Matrix k1(ring, cf.generators(), c.generators());
      k1.set_block(0, 0, Matrix::identity(ring, c.generators()));
      Matrix p2(ring, f.generators(), cf.generators());
      p2.set_block(0, c.generators(), Matrix::identity(ring, f.generators()));
      src = Representation(a3, ring, {f, c, cf}, {i.matrix(), k1});
      tgt = Representation(a3, ring, {m, zero, m}, {zmap(m, zero), zmap(zero, m)});
      comps = {phi.matrix(), zmap(c, zero), phi.matrix() * p2};
      break;
    }
    case Recipe::Ex5_3_2: {
      need(data.aux_cover.has_value(), "aux_cover");
      const ModuleMap t = aux_into_f(data);
      const FGModule& g = t.source();
      src = Representation(a3, ring, {f, g, f}, {zmap(f, g), t.matrix()});
      tgt = Representation(a3, ring, {m, zero, m}, {zmap(m, zero), zmap(zero, m)});
      comps = {phi.matrix(), zmap(g, zero), phi.matrix()};
      break;
    }
  }
  out.candidate = RepMorphism(src, tgt, comps);
  const Quiver& q = src.quiver();
  for (std::size_t a = 0; a < q.arrow_count(); ++a)
    out.certificate.push_back("square at " + q.arrow(a).id + " commutes");
  if (data.cotorsion_envelope) out.certificate.push_back("cotorsion envelope is injective with flat target");
  if (data.aux_cover) out.certificate.push_back("aux cover lands in the kernel of phi");
  return out;
}

std::optional<RepMorphism> explicit_ex531_lift(const ModuleCoverData& data, const RecipeResult& built,
                                               const RepMorphism& t) {
  if (built.recipe != Recipe::Ex5_3_1) throw InvalidInput("explicit lift needs an ex5.3.1 result");
  if (t.target() != built.candidate.target()) throw Incompatible("test morphism must target M -> 0 -> M");
  const ModuleMap& phi = data.phi;
  const ModuleMap& i = *data.cotorsion_envelope;
  const Representation& src = t.source();
  const ModuleMap& alpha = src.map(0);
  const ModuleMap& beta = src.map(1);
  const Submodule k = data.kernel();

  const auto f = factor_module(t.component(0), phi);
  if (!f) return std::nullopt;
  const auto g = extend_module(alpha, i * *f);
  if (!g) return std::nullopt;
  const auto tau2 = factor_module(t.component(2), phi);
  if (!tau2) return std::nullopt;
  const auto tau1 = extend_module(beta, *g);
  if (!tau1) return std::nullopt;
  const auto gamma = factor_module(*tau2 * beta, k.inclusion());
  if (!gamma) return std::nullopt;
  const auto z = extend_module(beta, *gamma);
  if (!z) return std::nullopt;
  const ModuleMap second = *tau2 - k.inclusion() * *z;
  const Matrix h = Matrix::vstack(tau1->matrix(), second.matrix());
  RepMorphism lift(src, built.candidate.source(), {f->matrix(), g->matrix(), h});
  if (!(built.candidate * lift).equals(t)) throw std::logic_error("explicit lift does not verify");
  return lift;
}

// ---------------------------------------------------------------------------
// Pure closure

namespace {

std::string describe_parts(const Representation& m, const std::vector<Submodule>& parts) {
  std::ostringstream os;
  for (std::size_t v = 0; v < parts.size(); ++v) {
    if (v) os << ", ";
    os << m.quiver().vertex_name(v) << ": <";
    const Matrix& g = parts[v].generators();
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (j) os << ", ";
      os << "(";
      for (std::size_t i = 0; i < g.rows(); ++i) os << (i ? "," : "") << format_scalar(g(i, j));
      os << ")";
    }
    os << ">";
  }
  return os.str();
}

std::optional<mpz_class> index_in(const Submodule& big, const Submodule& small) {
  const Subquotient sq = present_subquotient(big.lattice(), small.lattice());
  return FGModule(big.ambient().ring(), sq.size(), sq.relation_matrix()).cardinality();
}

}  // namespace

PureClosure pure_closure_rep(const Representation& m, const std::vector<RepElement>& elements,
                             const std::optional<SubRep>& seed) {
  if (seed && seed->ambient() != m) throw Incompatible("seed must be a subrepresentation of the same representation");
  std::vector<std::vector<Matrix>> cols(m.vertex_count());
  for (const auto& e : elements) {
    check_element(m, e);
    cols[e.vertex].push_back(e.value);
  }
  std::vector<Submodule> parts;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    Submodule s(m.module(v), Matrix::hstack(m.ring(), cols[v], m.module(v).generators()));
    parts.push_back(seed ? s + seed->part(v) : s);
  }
  PureClosure out;
  SubRep stage = generated_subrep(m, parts);
  const std::vector<Submodule> start = stage.parts();
  out.trace.push_back({ClosureStep::Kind::Generate, stage.parts(), "generate: " + describe_parts(m, stage.parts())});
  // each round strictly enlarges some vertex submodule; ACC bounds the rounds
  for (std::size_t round = 0;; ++round) {
    if (round > 10000) throw PreconditionFailed("pure closure did not stabilize");
    std::vector<Submodule> pure;
    bool changed = false;
    for (const auto& p : stage.parts()) {
      pure.push_back(pure_superset(p).pure);
      changed = changed || pure.back() != p;
    }
    if (!changed) break;
    out.trace.push_back({ClosureStep::Kind::Purify, pure, "purify: " + describe_parts(m, pure)});
    stage = generated_subrep(m, pure);
    out.trace.push_back({ClosureStep::Kind::Generate, stage.parts(), "generate: " + describe_parts(m, stage.parts())});
  }
  mpz_class bound = 1;
  bool finite = true;
  for (std::size_t v = 0; v < m.vertex_count() && finite; ++v) {
    const auto idx = index_in(stage.part(v), start[v]);
    if (idx) bound *= *idx;
    else finite = false;
  }
  if (finite) out.index_bound = bound;
  out.result = stage;
  return out;
}

PureClosure pure_closure_rep(const Representation& m, const RepElement& x) {
  return pure_closure_rep(m, std::vector<RepElement>{x});
}

// ---------------------------------------------------------------------------
// Filtrations

namespace {

// big / small as a representation, where small ⊆ big are subreps of one ambient.
Representation relative_quotient(const SubRep& big, const SubRep& small) {
  const Representation& b = big.representation();
  std::vector<Submodule> parts;
  for (std::size_t v = 0; v < b.vertex_count(); ++v) {
    const Matrix& g = small.part(v).generators();
    std::vector<Matrix> cols;
    for (std::size_t j = 0; j < g.cols(); ++j) cols.push_back(*big.part(v).coordinates(g.col(j)));
    parts.emplace_back(b.module(v), Matrix::hstack(b.ring(), cols, b.module(v).generators()));
  }
  return SubRep(b, parts).quotient();
}

}  // namespace

Filtration small_filtration(const Representation& f) {
  if (!is_flat_cw(f)) throw PreconditionFailed("small_filtration needs a componentwise flat representation");
  Filtration out;
  out.whole = f;
  SubRep stage = SubRep::zero(f);
  while (!stage.is_whole()) {
    std::optional<RepElement> pick;
    for (std::size_t v = 0; v < f.vertex_count() && !pick; ++v)
      for (std::size_t i = 0; i < f.module(v).generators() && !pick; ++i) {
        RepElement e{v, f.module(v).generator(i)};
        if (!stage.contains(e)) pick = e;
      }
    const PureClosure pc = pure_closure_rep(f, {*pick}, stage);
    const SubRep& next = pc.result;
    if (!next.contains(stage) || !is_componentwise_pure_subrep(next))
      throw std::logic_error("filtration stage is not a componentwise pure extension");
    Representation quot = relative_quotient(next, stage);
    if (!is_flat_cw(quot)) throw std::logic_error("filtration quotient is not componentwise flat");
    out.steps.push_back({*pick, next, quot, pc.trace.size()});
    stage = next;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ext

FGModule ext1_rep(const Representation& x, const Representation& y) {
  if (x.quiver() != y.quiver() || x.ring() != y.ring()) throw Incompatible("Ext between incompatible representations");
  const Quiver& q = x.quiver();
  if (!q.is_acyclic()) throw Refusal("Ext computation needs an acyclic quiver");
  const CoefficientRing& ring = x.ring();
  std::vector<SFunctorImage> images;
  std::vector<Representation> parts;
  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    images.push_back(s_functor(q, v, FGModule::free(ring, x.module(v).generators())));
    parts.push_back(images.back().rep);
  }
  const RepDirectSum p = direct_sum(parts);
  RepMorphism eps = RepMorphism::zero(p.sum, x);
  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    const ModuleMap gens(images[v].module, x.module(v), Matrix::identity(ring, x.module(v).generators()));
    eps = eps + adjunction_to_rep(images[v], x, gens) * p.projections[v];
  }
  if (!eps.is_surjective()) throw std::logic_error("projective presentation is not surjective");
  const SubRep k = kernel(eps);
  const RepHomGroup hp = rep_hom_group(p.sum, y);
  const RepHomGroup hk = rep_hom_group(k.representation(), y);
  std::vector<Matrix> cols;
  for (const auto& b : hp.basis) cols.push_back(*hk.coordinates(b * k.inclusion()));
  const ModuleMap restriction(FGModule::free(ring, cols.size()), hk.group,
                              Matrix::hstack(ring, cols, hk.group.generators()));
  return FGModule::from_normal_form(ring, map_factorization_data(restriction).cokernel.normal_form());
}

bool is_in_perp(const Representation& c, const std::vector<Representation>& family) {
  for (const auto& f : family)
    if (!ext1_rep(f, c).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Interval decomposition

std::string Interval::to_string() const {
  return "[" + std::to_string(start + 1) + "," + std::to_string(end + 1) + "]";
}

std::string Barcode::to_string() const {
  std::string s;
  for (const auto& iv : intervals)
    for (std::size_t k = 0; k < iv.multiplicity; ++k) {
      if (!s.empty()) s += " ";
      s += iv.to_string();
    }
  return s;
}

std::vector<std::vector<std::size_t>> rank_invariant(const Representation& x) {
  if (!x.quiver().is_line()) throw InvalidInput("rank invariant needs the line quiver v1 -> ... -> vn");
  if (!x.ring().is_field()) throw InvalidInput("rank invariant needs a field");
  const Representation xn = normalized(x).rep;
  const std::size_t n = xn.vertex_count();
  std::vector<std::vector<std::size_t>> r(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    Matrix m = Matrix::identity(xn.ring(), xn.module(i).generators());
    r[i][i] = m.rows();
    for (std::size_t j = i + 1; j < n; ++j) {
      m = xn.map(j - 1).matrix() * m;
      r[i][j] = rank(m);
    }
  }
  return r;
}

Representation interval_rep(const Quiver& line, const CoefficientRing& field, std::size_t start, std::size_t end) {
  if (!line.is_line()) throw InvalidInput("interval representations live on the line quiver");
  if (start > end || end >= line.vertex_count()) throw InvalidInput("interval out of range");
  std::vector<FGModule> mods;
  for (std::size_t v = 0; v < line.vertex_count(); ++v)
    mods.push_back(FGModule::free(field, v >= start && v <= end ? 1 : 0));
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < line.arrow_count(); ++a) {
    Matrix m(field, mods[a + 1].generators(), mods[a].generators());
    if (m.rows() == 1 && m.cols() == 1) m.set(0, 0, Scalar(1));
    mats.push_back(m);
  }
  return Representation(line, field, mods, mats);
}

Representation reconstruct(const Barcode& b, const Quiver& line, const CoefficientRing& field) {
  std::vector<Representation> parts;
  for (const auto& iv : b.intervals)
    for (std::size_t k = 0; k < iv.multiplicity; ++k) parts.push_back(interval_rep(line, field, iv.start, iv.end));
  if (parts.empty()) return Representation::zero(line, field);
  return direct_sum(parts).sum;
}

Barcode decompose_interval(const Representation& x) {
  const auto r = rank_invariant(x);
  const std::size_t n = r.size();
  auto rk = [&](long i, long j) -> long {
    if (i < 0 || j >= static_cast<long>(n) || i > j) return 0;
    return static_cast<long>(r[i][j]);
  };
  Barcode b;
  b.length = n;
  for (long i = 0; i < static_cast<long>(n); ++i)
    for (long j = i; j < static_cast<long>(n); ++j) {
      const long mult = rk(i, j) - rk(i - 1, j) - rk(i, j + 1) + rk(i - 1, j + 1);
      if (mult < 0) throw std::logic_error("negative interval multiplicity");
      if (mult > 0)
        b.intervals.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                               static_cast<std::size_t>(mult), i == 0});
    }
  if (rank_invariant(reconstruct(b, x.quiver(), x.ring())) != r)
    throw std::logic_error("barcode reconstruction has a different rank invariant");
  return b;
}

}  // namespace qrep
