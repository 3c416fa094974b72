#include "qrep/representation.hpp"

#include <cmath>
#include <sstream>

#include "qrep/error.hpp"
#include "qrep/linear_system.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// Representation

Representation::Representation()
    : Representation(Quiver(), CoefficientRing::integers(), {}, {}) {}

Representation::Representation(Quiver quiver, CoefficientRing ring, std::vector<FGModule> modules,
                               const std::vector<Matrix>& arrow_matrices) {
  if (modules.size() != quiver.vertex_count())
    throw InvalidInput("representation needs one module per vertex");
  if (arrow_matrices.size() != quiver.arrow_count())
    throw InvalidInput("representation needs one matrix per arrow");
  for (const auto& m : modules)
    if (m.ring() != ring) throw Incompatible("vertex module over the wrong ring");
  auto impl = std::make_shared<Impl>();
  impl->quiver = std::move(quiver);
  impl->ring = ring;
  impl->modules = std::move(modules);
  for (std::size_t a = 0; a < arrow_matrices.size(); ++a) {
    const Arrow& ar = impl->quiver.arrow(a);
    try {
      impl->maps.emplace_back(impl->modules[ar.source], impl->modules[ar.target],
                              arrow_matrices[a]);
    } catch (const InvalidInput& e) {
      throw InvalidInput("arrow '" + ar.id + "': " + e.what());
    }
  }
  impl_ = impl;
}

Representation Representation::zero(const Quiver& q, const CoefficientRing& ring) {
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < q.arrow_count(); ++a) mats.emplace_back(ring, 0, 0);
  return Representation(q, ring, std::vector<FGModule>(q.vertex_count(), FGModule::zero(ring)),
                        mats);
}

Matrix Representation::path_matrix(const Path& p) const {
  Matrix m = Matrix::identity(ring(), module(p.start).generators());
  for (auto a : p.arrows) m = map(a).matrix() * m;
  return m;
}

bool Representation::is_zero() const {
  for (const auto& m : modules())
    if (!m.is_zero()) return false;
  return true;
}

std::string Representation::describe() const {
  std::ostringstream os;
  const Quiver& q = quiver();
  for (std::size_t v = 0; v < vertex_count(); ++v)
    os << (v ? ", " : "") << q.vertex_name(v) << ": " << module(v).describe();
  for (std::size_t a = 0; a < q.arrow_count(); ++a)
    os << (a ? ", " : " | ") << q.arrow(a).id << ": " << map(a).matrix().to_string();
  return os.str();
}

bool operator==(const Representation& a, const Representation& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.ring() != b.ring() || a.quiver() != b.quiver() || a.modules() != b.modules()) return false;
  for (std::size_t i = 0; i < a.quiver().arrow_count(); ++i)
    if (a.map(i).matrix() != b.map(i).matrix()) return false;
  return true;
}

RepVector RepVector::zero(const Representation& x) {
  RepVector out;
  for (const auto& m : x.modules()) out.parts.push_back(m.zero_element());
  return out;
}

RepVector RepVector::of(const Representation& x, const RepElement& e) {
  check_element(x, e);
  RepVector out = zero(x);
  out.parts[e.vertex] = e.value;
  return out;
}

bool RepVector::is_zero_in(const Representation& x) const {
  for (std::size_t v = 0; v < parts.size(); ++v)
    if (!x.module(v).is_zero_element(parts[v])) return false;
  return true;
}

void check_element(const Representation& x, const RepElement& e) {
  if (e.vertex >= x.vertex_count()) throw InvalidInput("element at an unknown vertex");
  x.module(e.vertex).check_element(e.value);
}

// ---------------------------------------------------------------------------
// Morphisms

bool commutes(const Representation& x, const Representation& y,
              const std::vector<ModuleMap>& components) {
  const Quiver& q = x.quiver();
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    const Matrix lhs = y.map(a).matrix() * components[ar.source].matrix();
    const Matrix rhs = components[ar.target].matrix() * x.map(a).matrix();
    if (!span_contains(y.module(ar.target).relations(), lhs - rhs)) return false;
  }
  return true;
}

RepMorphism::RepMorphism(Representation source, Representation target,
                         std::vector<ModuleMap> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (source_.quiver() != target_.quiver()) throw Incompatible("morphism between different quivers");
  if (source_.ring() != target_.ring()) throw Incompatible("morphism across rings");
  if (components_.size() != source_.vertex_count())
    throw InvalidInput("morphism needs one component per vertex");
  for (std::size_t v = 0; v < components_.size(); ++v) {
    if (components_[v].source() != source_.module(v) || components_[v].target() != target_.module(v))
      throw Incompatible("component at " + source_.quiver().vertex_name(v) +
                         " has the wrong source or target");
  }
  if (!commutes(source_, target_, components_))
    throw InvalidInput("morphism components do not commute with the arrow maps");
}

namespace {

std::vector<ModuleMap> to_components(const Representation& x, const Representation& y,
                                     const std::vector<Matrix>& matrices) {
  if (matrices.size() != x.vertex_count())
    throw InvalidInput("morphism needs one matrix per vertex");
  std::vector<ModuleMap> out;
  for (std::size_t v = 0; v < matrices.size(); ++v) {
    try {
      out.emplace_back(x.module(v), y.module(v), matrices[v]);
    } catch (const InvalidInput& e) {
      throw InvalidInput("component at " + x.quiver().vertex_name(v) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

RepMorphism::RepMorphism(Representation source, Representation target,
                         const std::vector<Matrix>& matrices)
    : RepMorphism(source, target, to_components(source, target, matrices)) {}

RepMorphism RepMorphism::identity(const Representation& x) {
  std::vector<ModuleMap> comps;
  for (const auto& m : x.modules()) comps.push_back(ModuleMap::identity(m));
  return RepMorphism(x, x, comps);
}

RepMorphism RepMorphism::zero(const Representation& x, const Representation& y) {
  std::vector<ModuleMap> comps;
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    comps.push_back(ModuleMap::zero(x.module(v), y.module(v)));
  return RepMorphism(x, y, comps);
}

RepElement RepMorphism::apply(const RepElement& e) const {
  check_element(source_, e);
  return {e.vertex, components_[e.vertex].apply(e.value)};
}

bool RepMorphism::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

bool RepMorphism::is_injective() const {
  for (const auto& c : components_)
    if (!c.is_injective()) return false;
  return true;
}

bool RepMorphism::is_surjective() const {
  for (const auto& c : components_)
    if (!c.is_surjective()) return false;
  return true;
}

bool RepMorphism::equals(const RepMorphism& other) const {
  if (source_ != other.source_ || target_ != other.target_) return false;
  for (std::size_t v = 0; v < components_.size(); ++v)
    if (!components_[v].equals(other.components_[v])) return false;
  return true;
}

RepMorphism operator*(const RepMorphism& after, const RepMorphism& before) {
  if (after.source() != before.target()) throw Incompatible("composition of mismatched morphisms");
  std::vector<ModuleMap> comps;
  for (std::size_t v = 0; v < after.components().size(); ++v)
    comps.push_back(after.component(v) * before.component(v));
  return RepMorphism(before.source(), after.target(), comps);
}

RepMorphism operator+(const RepMorphism& a, const RepMorphism& b) {
  if (a.source() != b.source() || a.target() != b.target())
    throw Incompatible("sum of morphisms with different source/target");
  std::vector<ModuleMap> comps;
  for (std::size_t v = 0; v < a.components().size(); ++v)
    comps.push_back(a.component(v) + b.component(v));
  return RepMorphism(a.source(), a.target(), comps);
}

RepMorphism operator-(const RepMorphism& a, const RepMorphism& b) { return a + b.scaled(-1); }

RepMorphism RepMorphism::scaled(const Scalar& c) const {
  std::vector<ModuleMap> comps;
  for (const auto& m : components_) comps.push_back(m.scaled(c));
  return RepMorphism(source_, target_, comps);
}

// ---------------------------------------------------------------------------
// Subrepresentations

bool is_closed_family(const Representation& x, const std::vector<Submodule>& parts) {
  const Quiver& q = x.quiver();
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    if (!span_contains(parts[ar.target].lattice(),
                       x.map(a).matrix() * parts[ar.source].lattice()))
      return false;
  }
  return true;
}

SubRep::SubRep(Representation ambient, std::vector<Submodule> parts)
    : ambient_(std::move(ambient)), parts_(std::move(parts)) {
  if (parts_.size() != ambient_.vertex_count())
    throw InvalidInput("subrepresentation needs one submodule per vertex");
  for (std::size_t v = 0; v < parts_.size(); ++v)
    if (parts_[v].ambient() != ambient_.module(v))
      throw Incompatible("submodule at " + ambient_.quiver().vertex_name(v) +
                         " lives in the wrong module");
  if (!is_closed_family(ambient_, parts_))
    throw InvalidInput("family of submodules is not closed under the arrow maps");
  const Quiver& q = ambient_.quiver();
  std::vector<FGModule> modules;
  for (const auto& p : parts_) modules.push_back(p.module());
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    auto c = parts_[ar.target].coordinates(ambient_.map(a).matrix() * parts_[ar.source].generators());
    if (!c) throw std::logic_error("closed family without coordinates");
    mats.push_back(*c);
  }
  rep_ = Representation(q, ambient_.ring(), modules, mats);
}

SubRep SubRep::zero(const Representation& x) {
  std::vector<Submodule> parts;
  for (const auto& m : x.modules()) parts.push_back(Submodule::zero(m));
  return SubRep(x, parts);
}

SubRep SubRep::whole(const Representation& x) {
  std::vector<Submodule> parts;
  for (const auto& m : x.modules()) parts.push_back(Submodule::whole(m));
  return SubRep(x, parts);
}

RepMorphism SubRep::inclusion() const {
  std::vector<ModuleMap> comps;
  for (const auto& p : parts_) comps.push_back(p.inclusion());
  return RepMorphism(rep_, ambient_, comps);
}

Representation SubRep::quotient() const {
  std::vector<FGModule> modules;
  for (const auto& p : parts_) modules.push_back(p.quotient());
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < ambient_.quiver().arrow_count(); ++a)
    mats.push_back(ambient_.map(a).matrix());
  return Representation(ambient_.quiver(), ambient_.ring(), modules, mats);
}

RepMorphism SubRep::projection() const {
  const Representation q = quotient();
  std::vector<Matrix> mats;
  for (const auto& m : ambient_.modules())
    mats.push_back(Matrix::identity(ambient_.ring(), m.generators()));
  return RepMorphism(ambient_, q, mats);
}

bool SubRep::contains(const RepElement& e) const {
  check_element(ambient_, e);
  return parts_[e.vertex].contains(e.value);
}

bool SubRep::contains(const SubRep& other) const {
  if (ambient_ != other.ambient_) throw Incompatible("subrepresentations of different representations");
  for (std::size_t v = 0; v < parts_.size(); ++v)
    if (!parts_[v].contains(other.parts_[v])) return false;
  return true;
}

bool SubRep::is_zero() const {
  for (const auto& p : parts_)
    if (!p.is_zero()) return false;
  return true;
}

bool SubRep::is_whole() const {
  for (const auto& p : parts_)
    if (!p.is_whole()) return false;
  return true;
}

bool operator==(const SubRep& a, const SubRep& b) {
  return a.ambient_ == b.ambient_ && a.parts_ == b.parts_;
}

SubRep operator+(const SubRep& a, const SubRep& b) {
  if (a.ambient() != b.ambient()) throw Incompatible("sum of subrepresentations of different representations");
  std::vector<Submodule> parts;
  for (std::size_t v = 0; v < a.parts().size(); ++v) parts.push_back(a.part(v) + b.part(v));
  return SubRep(a.ambient(), parts);
}

SubRep generated_subrep(const Representation& x, const std::vector<Submodule>& parts,
                        std::size_t iteration_bound) {
  if (parts.size() != x.vertex_count())
    throw InvalidInput("need one submodule per vertex");
  const Quiver& q = x.quiver();
  std::vector<Submodule> cur = parts;
  auto push = [&](std::size_t a) {
    const Arrow& ar = q.arrow(a);
    const Submodule img(x.module(ar.target), x.map(a).matrix() * cur[ar.source].lattice());
    if (cur[ar.target].contains(img)) return false;
    cur[ar.target] = cur[ar.target] + img;
    return true;
  };
  if (q.is_acyclic()) {
    for (auto v : q.topological_order())
      for (auto a : q.outgoing(v)) push(a);
    return SubRep(x, cur);
  }
  for (std::size_t round = 0; round < iteration_bound; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < q.arrow_count(); ++a) changed = push(a) || changed;
    if (!changed) return SubRep(x, cur);
  }
  throw PreconditionFailed("generated subrepresentation did not stabilize within " +
                           std::to_string(iteration_bound) + " rounds");
}

SubRep subrep_generated_by(const Representation& x, const std::vector<RepElement>& elements,
                           std::size_t iteration_bound) {
  std::vector<std::vector<Matrix>> cols(x.vertex_count());
  for (const auto& e : elements) {
    check_element(x, e);
    cols[e.vertex].push_back(e.value);
  }
  std::vector<Submodule> parts;
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    parts.emplace_back(x.module(v), Matrix::hstack(x.ring(), cols[v], x.module(v).generators()));
  return generated_subrep(x, parts, iteration_bound);
}

// ---------------------------------------------------------------------------
// Kernels, images, cokernels, sums

SubRep kernel(const RepMorphism& eta) {
  std::vector<Submodule> parts;
  for (const auto& c : eta.components()) parts.push_back(kernel(c));
  return SubRep(eta.source(), parts);
}

SubRep image(const RepMorphism& eta) {
  std::vector<Submodule> parts;
  for (const auto& c : eta.components()) parts.push_back(image(c));
  return SubRep(eta.target(), parts);
}

RepCokernel cokernel(const RepMorphism& eta) {
  const SubRep im = image(eta);
  return {im.quotient(), im.projection()};
}

RepDirectSum direct_sum(const std::vector<Representation>& parts) {
  if (parts.empty()) throw InvalidInput("direct sum of no representations");
  const Quiver& q = parts.front().quiver();
  const CoefficientRing& ring = parts.front().ring();
  for (const auto& p : parts)
    if (p.quiver() != q || p.ring() != ring) throw Incompatible("direct sum of incompatible representations");
  std::vector<FGModule> modules;
  std::vector<std::vector<std::size_t>> offsets(q.vertex_count());
  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    std::vector<FGModule> ms;
    std::size_t off = 0;
    for (const auto& p : parts) {
      offsets[v].push_back(off);
      off += p.module(v).generators();
      ms.push_back(p.module(v));
    }
    modules.push_back(direct_sum(ms));
  }
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    std::vector<Matrix> blocks;
    for (const auto& p : parts) blocks.push_back(p.map(a).matrix());
    mats.push_back(Matrix::block_diag(ring, blocks));
  }
  RepDirectSum out{Representation(q, ring, modules, mats), {}, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Matrix> inj, proj;
    for (std::size_t v = 0; v < q.vertex_count(); ++v) {
      const std::size_t g = parts[i].module(v).generators();
      const std::size_t total = modules[v].generators();
      Matrix in(ring, total, g), pr(ring, g, total);
      for (std::size_t k = 0; k < g; ++k) {
        in.set(offsets[v][i] + k, k, Scalar(1));
        pr.set(k, offsets[v][i] + k, Scalar(1));
      }
      inj.push_back(in);
      proj.push_back(pr);
    }
    out.injections.emplace_back(parts[i], out.sum, inj);
    out.projections.emplace_back(out.sum, parts[i], proj);
  }
  return out;
}

NormalizedRep normalized(const Representation& x) {
  const SubRep whole = SubRep::whole(x);
  std::vector<Matrix> back;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    const std::size_t g = x.module(v).generators();
    auto c = whole.part(v).coordinates(Matrix::identity(x.ring(), g));
    if (!c) throw std::logic_error("whole submodule without coordinates");
    back.push_back(*c);
  }
  return {whole.representation(), whole.inclusion(),
          RepMorphism(x, whole.representation(), back)};
}

// ---------------------------------------------------------------------------
// S_v and the adjunction

std::size_t SFunctorImage::offset(const Path& p) const {
  const auto& list = copies.at(p.end);
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == p) return i * module.generators();
  throw InvalidInput("path does not start at the vertex of S_v");
}

SFunctorImage s_functor(const Quiver& q, std::size_t v, const FGModule& m) {
  if (!q.is_acyclic()) throw Refusal("S_v needs path enumeration, refused on a cyclic quiver");
  SFunctorImage out;
  out.vertex = v;
  out.module = m;
  out.copies.assign(q.vertex_count(), {});
  for (auto& p : paths_from(q, v)) out.copies[p.end].push_back(p);
  std::vector<FGModule> modules;
  for (std::size_t w = 0; w < q.vertex_count(); ++w) modules.push_back(power(m, out.copies[w].size()));
  const std::size_t g = m.generators();
  const CoefficientRing& ring = m.ring();
  std::vector<Matrix> mats;
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    Matrix mat(ring, modules[ar.target].generators(), modules[ar.source].generators());
    const auto& src = out.copies[ar.source];
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Path next = *compose(Path::of_arrow(q, a), src[i]);
      const std::size_t j = out.offset(next);
      for (std::size_t k = 0; k < g; ++k) mat.set(j + k, i * g + k, Scalar(1));
    }
    mats.push_back(mat);
  }
  out.rep = Representation(q, ring, modules, mats);
  return out;
}

RepMorphism adjunction_to_rep(const SFunctorImage& s, const Representation& x, const ModuleMap& f) {
  if (x.quiver() != s.rep.quiver()) throw Incompatible("adjunction across quivers");
  if (f.source() != s.module || f.target() != x.module(s.vertex))
    throw Incompatible("adjunction: map must go from M to X(v)");
  std::vector<Matrix> comps;
  for (std::size_t w = 0; w < x.vertex_count(); ++w) {
    std::vector<Matrix> blocks;
    for (const auto& p : s.copies[w]) blocks.push_back(x.path_matrix(p) * f.matrix());
    comps.push_back(Matrix::hstack(x.ring(), blocks, x.module(w).generators()));
  }
  return RepMorphism(s.rep, x, comps);
}

ModuleMap adjunction_to_module(const SFunctorImage& s, const RepMorphism& eta) {
  if (eta.source() != s.rep) throw Incompatible("adjunction: morphism must start at S_v(M)");
  const std::size_t off = s.offset(Path::trivial(s.vertex));
  const Matrix m = eta.component(s.vertex).matrix().columns(off, s.module.generators());
  return ModuleMap(s.module, eta.target().module(s.vertex), m);
}

namespace {

using IntMat = std::vector<std::vector<long>>;

IntMat to_int(const Matrix& m) {
  IntMat out(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_num().get_si();
  return out;
}

// (a*b) mod p; b has m columns (explicit, since b may have no rows).
IntMat mul_mod(const IntMat& a, const IntMat& b, std::size_t m, long p) {
  const std::size_t n = a.size(), k = b.size();
  IntMat out(n, std::vector<long>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (std::size_t j = 0; j < m; ++j) out[i][j] = (out[i][j] + a[i][l] * b[l][j]) % p;
  return out;
}

}  // namespace

AdjunctionCount adjunction_card_check(std::size_t v, const FGModule& m, const Representation& x) {
  const CoefficientRing& ring = x.ring();
  if (!ring.is_finite()) throw PreconditionFailed("exhaustive hom enumeration needs a prime field");
  const long p = static_cast<long>(ring.characteristic());
  const FGModule mn = Submodule::whole(m).module();
  const Representation xn = normalized(x).rep;
  const SFunctorImage s = s_functor(x.quiver(), v, mn);
  const Quiver& q = x.quiver();

  // Unknown entries: one matrix dim X(w) x dim S(w) per vertex.
  std::vector<std::size_t> rows, cols, offset;
  std::size_t total = 0;
  for (std::size_t w = 0; w < q.vertex_count(); ++w) {
    rows.push_back(xn.module(w).generators());
    cols.push_back(s.rep.module(w).generators());
    offset.push_back(total);
    total += rows.back() * cols.back();
  }
  const std::size_t module_entries = xn.module(v).generators() * mn.generators();
  const double worst = std::pow(static_cast<double>(p), static_cast<double>(std::max(total, module_entries)));
  if (worst > 4.0e6) throw PreconditionFailed("hom sets too large for exhaustive enumeration");

  AdjunctionCount out;
  // Module side: every matrix is a map between relation-free presentations.
  {
    std::vector<long> e(module_entries, 0);
    mpz_class count = 0;
    while (true) {
      ++count;
      std::size_t k = 0;
      while (k < e.size() && ++e[k] == p) e[k++] = 0;
      if (k == e.size()) break;
    }
    out.module_side = count;
  }
  std::vector<IntMat> xa, sa;
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    xa.push_back(to_int(xn.map(a).matrix()));
    sa.push_back(to_int(s.rep.map(a).matrix()));
  }
  std::vector<long> e(total, 0);
  mpz_class count = 0;
  while (true) {
    std::vector<IntMat> eta(q.vertex_count());
    for (std::size_t w = 0; w < q.vertex_count(); ++w) {
      eta[w].assign(rows[w], std::vector<long>(cols[w]));
      for (std::size_t i = 0; i < rows[w]; ++i)
        for (std::size_t j = 0; j < cols[w]; ++j) eta[w][i][j] = e[offset[w] + i * cols[w] + j];
    }
    bool ok = true;
    for (std::size_t a = 0; a < q.arrow_count() && ok; ++a) {
      const Arrow& ar = q.arrow(a);
      ok = mul_mod(xa[a], eta[ar.source], cols[ar.source], p) ==
           mul_mod(eta[ar.target], sa[a], cols[ar.source], p);
    }
    if (ok) ++count;
    std::size_t k = 0;
    while (k < e.size() && ++e[k] == p) e[k++] = 0;
    if (k == e.size()) break;
  }
  out.rep_side = count;
  return out;
}

// ---------------------------------------------------------------------------
// Hom groups

std::optional<Matrix> RepHomGroup::coordinates(const RepMorphism& eta) const {
  std::vector<Matrix> vecs;
  for (const auto& c : eta.components()) vecs.push_back(c.matrix().vec());
  return presentation.coordinates(Matrix::vstack(source.ring(), vecs, 1));
}

RepMorphism RepHomGroup::combine(const Matrix& coefficients) const {
  RepMorphism acc = RepMorphism::zero(source, target);
  for (std::size_t i = 0; i < basis.size(); ++i) acc = acc + basis[i].scaled(coefficients(i, 0));
  return acc;
}

RepHomGroup rep_hom_group(const Representation& x, const Representation& y) {
  if (x.quiver() != y.quiver()) throw Incompatible("Hom between representations of different quivers");
  if (x.ring() != y.ring()) throw Incompatible("Hom between representations over different rings");
  const CoefficientRing& ring = x.ring();
  const Quiver& q = x.quiver();
  LinearSystem sys(ring);
  std::vector<LinearSystem::Block> blocks;
  for (std::size_t v = 0; v < q.vertex_count(); ++v)
    blocks.push_back(sys.add_unknown(y.module(v).generators(), x.module(v).generators()));
  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    if (x.module(v).relations().cols() == 0) continue;
    sys.add_equation({{Matrix::identity(ring, y.module(v).generators()), blocks[v],
                       x.module(v).relations()}},
                     nullptr, y.module(v).relations());
  }
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    sys.add_equation(
        {{y.map(a).matrix(), blocks[ar.source], Matrix::identity(ring, x.module(ar.source).generators())},
         {-Matrix::identity(ring, y.module(ar.target).generators()), blocks[ar.target],
          x.map(a).matrix()}},
        nullptr, y.module(ar.target).relations());
  }
  const Matrix maps = sys.homogeneous_projection(blocks);
  std::vector<Matrix> zero_parts;
  for (std::size_t v = 0; v < q.vertex_count(); ++v)
    zero_parts.push_back(zero_map_span(y.module(v).relations(), x.module(v).generators()));
  const Matrix zeros = Matrix::block_diag(x.ring(), zero_parts);
  RepHomGroup out;
  out.source = x;
  out.target = y;
  out.presentation = present_subquotient(maps, zeros);
  out.group = FGModule(ring, out.presentation.size(), out.presentation.relation_matrix());
  for (std::size_t i = 0; i < out.presentation.size(); ++i) {
    const auto mats = sys.split_projected(out.presentation.generators.col(i), blocks);
    out.basis.emplace_back(x, y, mats);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classes

RepClassification classify_rep(const Representation& x, const TorsionTheorySpec& tt) {
  tt.validate_for(x.ring());
  RepClassification c;
  std::vector<Submodule> torsion;
  for (const auto& m : x.modules()) {
    c.vertices.push_back(classify_module(m, tt));
    const auto& mc = c.vertices.back();
    c.torsion_cw = c.torsion_cw && mc.torsion;
    c.torsion_free_cw = c.torsion_free_cw && mc.torsion_free;
    c.flat_cw = c.flat_cw && mc.flat;
    torsion.push_back(mc.torsion_submodule);
  }
  c.torsion_subrep = SubRep(x, torsion);
  return c;
}

bool is_flat_cw(const Representation& x) {
  for (const auto& m : x.modules())
    if (!is_flat_module(m)) return false;
  return true;
}

bool is_componentwise_pure_subrep(const SubRep& p) {
  for (const auto& part : p.parts())
    if (!is_pure_submodule(part)) return false;
  return true;
}

bool InjectivityConditions::all_i() const {
  for (bool b : condition_i)
    if (!b) return false;
  return true;
}

bool InjectivityConditions::all_ii() const {
  for (bool b : condition_ii)
    if (!b) return false;
  return true;
}

ModuleMap outgoing_map(const Representation& x, std::size_t v) {
  const auto& out = x.quiver().outgoing(v);
  std::vector<FGModule> targets;
  std::vector<Matrix> rows;
  for (auto a : out) {
    targets.push_back(x.map(a).target());
    rows.push_back(x.map(a).matrix());
  }
  const FGModule target = targets.empty() ? FGModule::zero(x.ring()) : direct_sum(targets);
  return ModuleMap(x.module(v), target, Matrix::vstack(x.ring(), rows, x.module(v).generators()));
}

ModuleMap incoming_map(const Representation& x, std::size_t v) {
  const auto& in = x.quiver().incoming(v);
  std::vector<FGModule> sources;
  std::vector<Matrix> cols;
  for (auto a : in) {
    sources.push_back(x.map(a).source());
    cols.push_back(x.map(a).matrix());
  }
  const FGModule source = sources.empty() ? FGModule::zero(x.ring()) : direct_sum(sources);
  return ModuleMap(source, x.module(v), Matrix::hstack(x.ring(), cols, x.module(v).generators()));
}

InjectivityConditions injectivity_conditions(const Representation& x) {
  InjectivityConditions c;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    c.condition_i.push_back(is_injective_module(x.module(v)));
    const ModuleMap out = outgoing_map(x, v);
    c.condition_ii.push_back(out.is_surjective() && has_section(out).has_value());
  }
  return c;
}

bool is_injective_rep(const Representation& x) {
  const QuiverClassification qc = classify_quiver(x.quiver());
  if (qc.source_injective != TriState::Yes)
    throw Refusal("injectivity refused: the quiver is not certified source injective (" +
                  qc.reason + "), so conditions (i) and (ii) do not characterize injectivity");
  if (!qc.property_B)
    throw Refusal("injectivity refused: property (B) fails, the product over outgoing arrows is infinite");
  const InjectivityConditions c = injectivity_conditions(x);
  return c.all_i() && c.all_ii();
}

CategoricalFlatReport categorical_flat_report(const Representation& x) {
  CategoricalFlatReport r;
  r.flat_cw = is_flat_cw(x);
  const Quiver& q = x.quiver();
  if (!q.is_acyclic()) {
    r.verdict = TriState::Unknown;
    r.reason = "criterion certified only on finite acyclic quivers";
    return r;
  }
  if (!r.flat_cw) {
    for (std::size_t v = 0; v < x.vertex_count(); ++v)
      if (!is_flat_module(x.module(v))) {
        r.failing_vertex = v;
        break;
      }
    r.verdict = TriState::No;
    r.reason = "not componentwise flat at " + q.vertex_name(*r.failing_vertex);
    return r;
  }
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    if (q.incoming(v).empty()) continue;
    const ModuleMap in = incoming_map(x, v);
    if (!in.is_injective()) {
      r.verdict = TriState::No;
      r.failing_vertex = v;
      r.reason = "incoming map at " + q.vertex_name(v) + " is not injective";
      return r;
    }
    if (!is_pure_submodule(image(in))) {
      r.verdict = TriState::No;
      r.failing_vertex = v;
      r.reason = "image of the incoming map at " + q.vertex_name(v) + " is not pure";
      return r;
    }
  }
  r.verdict = TriState::Yes;
  r.reason = "componentwise flat with pure monomorphic incoming maps";
  return r;
}

TriState is_categorical_flat(const Representation& x) { return categorical_flat_report(x).verdict; }

}  // namespace qrep
