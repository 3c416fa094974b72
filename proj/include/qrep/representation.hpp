#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrep/module.hpp"
#include "qrep/quiver.hpp"

namespace qrep {

/// Functor from a finite quiver to finitely generated R-modules: one
/// FGModule per vertex, one ModuleMap per arrow. Immutable; copies share.
class Representation {
 public:
  Representation();
  /// Arrow matrices are checked for well-definedness.
  Representation(Quiver quiver, CoefficientRing ring, std::vector<FGModule> modules,
                 const std::vector<Matrix>& arrow_matrices);

  static Representation zero(const Quiver& q, const CoefficientRing& ring);

  const Quiver& quiver() const noexcept { return impl_->quiver; }
  const CoefficientRing& ring() const noexcept { return impl_->ring; }
  const FGModule& module(std::size_t v) const { return impl_->modules.at(v); }
  const ModuleMap& map(std::size_t a) const { return impl_->maps.at(a); }
  const std::vector<FGModule>& modules() const noexcept { return impl_->modules; }
  std::size_t vertex_count() const noexcept { return impl_->modules.size(); }

  /// Composite of the arrow maps along a path (identity on a trivial path).
  Matrix path_matrix(const Path& p) const;

  bool is_zero() const;
  std::string describe() const;

  /// Same quiver, ring, presentations and matrices.
  friend bool operator==(const Representation& a, const Representation& b);
  friend bool operator!=(const Representation& a, const Representation& b) { return !(a == b); }

 private:
  struct Impl {
    Quiver quiver;
    CoefficientRing ring;
    std::vector<FGModule> modules;
    std::vector<ModuleMap> maps;
  };
  std::shared_ptr<const Impl> impl_;
};

/// An element of X(v).
struct RepElement {
  std::size_t vertex = 0;
  Matrix value;
};

/// An element of the total module ⊕_v X(v).
struct RepVector {
  std::vector<Matrix> parts;

  static RepVector zero(const Representation& x);
  static RepVector of(const Representation& x, const RepElement& e);
  bool is_zero_in(const Representation& x) const;
};

/// Throws InvalidInput unless e is an element of X(e.vertex).
void check_element(const Representation& x, const RepElement& e);

// ---------------------------------------------------------------------------

class RepMorphism {
 public:
  RepMorphism() = default;
  /// Checks Y(a)∘η_{s(a)} = η_{t(a)}∘X(a) for every arrow (modulo relations).
  RepMorphism(Representation source, Representation target, std::vector<ModuleMap> components);
  RepMorphism(Representation source, Representation target, const std::vector<Matrix>& matrices);

  static RepMorphism identity(const Representation& x);
  static RepMorphism zero(const Representation& x, const Representation& y);

  const Representation& source() const noexcept { return source_; }
  const Representation& target() const noexcept { return target_; }
  const ModuleMap& component(std::size_t v) const { return components_.at(v); }
  const std::vector<ModuleMap>& components() const noexcept { return components_; }

  RepElement apply(const RepElement& e) const;

  bool is_zero() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const { return is_injective() && is_surjective(); }
  bool equals(const RepMorphism& other) const;

  friend RepMorphism operator*(const RepMorphism& after, const RepMorphism& before);
  friend RepMorphism operator+(const RepMorphism& a, const RepMorphism& b);
  friend RepMorphism operator-(const RepMorphism& a, const RepMorphism& b);
  RepMorphism scaled(const Scalar& c) const;

 private:
  Representation source_;
  Representation target_;
  std::vector<ModuleMap> components_;
};

/// Commuting-square validator (no exception).
bool commutes(const Representation& x, const Representation& y,
              const std::vector<ModuleMap>& components);

// ---------------------------------------------------------------------------

/// Subrepresentation: a submodule at every vertex, closed under arrow maps.
class SubRep {
 public:
  SubRep() = default;
  /// Throws InvalidInput if some arrow map leaves the family.
  SubRep(Representation ambient, std::vector<Submodule> parts);

  static SubRep zero(const Representation& x);
  static SubRep whole(const Representation& x);

  const Representation& ambient() const noexcept { return ambient_; }
  const Submodule& part(std::size_t v) const { return parts_.at(v); }
  const std::vector<Submodule>& parts() const noexcept { return parts_; }

  /// The subrepresentation on its own minimal generators.
  const Representation& representation() const { return rep_; }
  RepMorphism inclusion() const;
  Representation quotient() const;
  RepMorphism projection() const;

  bool contains(const RepElement& e) const;
  bool contains(const SubRep& other) const;
  bool is_zero() const;
  bool is_whole() const;

  friend bool operator==(const SubRep& a, const SubRep& b);
  friend bool operator!=(const SubRep& a, const SubRep& b) { return !(a == b); }
  friend SubRep operator+(const SubRep& a, const SubRep& b);

 private:
  Representation ambient_;
  std::vector<Submodule> parts_;
  Representation rep_;
};

/// Is the family of vertex submodules closed under every arrow map?
bool is_closed_family(const Representation& x, const std::vector<Submodule>& parts);

/// Smallest subrepresentation containing the given vertex submodules. On
/// acyclic quivers this is one pass in topological order; on cyclic quivers a
/// fixpoint iteration (which terminates by the ascending chain condition; the
/// bound is a safety net that raises PreconditionFailed).
SubRep generated_subrep(const Representation& x, const std::vector<Submodule>& parts,
                        std::size_t iteration_bound = 256);
SubRep subrep_generated_by(const Representation& x, const std::vector<RepElement>& elements,
                           std::size_t iteration_bound = 256);

// ---------------------------------------------------------------------------
// Kernels, images, cokernels, sums

SubRep kernel(const RepMorphism& eta);
SubRep image(const RepMorphism& eta);

struct RepCokernel {
  Representation cokernel;
  RepMorphism projection;
};
RepCokernel cokernel(const RepMorphism& eta);

struct RepDirectSum {
  Representation sum;
  std::vector<RepMorphism> injections;
  std::vector<RepMorphism> projections;
};
RepDirectSum direct_sum(const std::vector<Representation>& parts);

/// Same representation on minimal presentations (relation-free over a
/// field), with the isomorphism normalized -> original.
struct NormalizedRep {
  Representation rep;
  RepMorphism to_original;
  RepMorphism from_original;
};
NormalizedRep normalized(const Representation& x);

// ---------------------------------------------------------------------------
// The adjoint pair S_v -| T_v

struct SFunctorImage {
  Representation rep;
  std::size_t vertex = 0;
  FGModule module;
  /// copies[w] lists the paths v -> w; copy i of M at w is indexed by copies[w][i].
  std::vector<std::vector<Path>> copies;

  /// Position of the copy indexed by `p` inside S_v(M)(p.end), in generators.
  std::size_t offset(const Path& p) const;
};

/// S_v(M)(w) = ⊕_{paths v->w} M. Refuses cyclic quivers.
SFunctorImage s_functor(const Quiver& q, std::size_t v, const FGModule& m);
inline const FGModule& t_functor(std::size_t v, const Representation& x) { return x.module(v); }

/// Hom_R(M, X(v)) -> Hom(S_v(M), X): the copy indexed by p goes by X(p)∘f.
RepMorphism adjunction_to_rep(const SFunctorImage& s, const Representation& x, const ModuleMap& f);
/// Hom(S_v(M), X) -> Hom_R(M, X(v)): restriction to the copy indexed by e_v.
ModuleMap adjunction_to_module(const SFunctorImage& s, const RepMorphism& eta);

struct AdjunctionCount {
  mpz_class module_side;  // |Hom_R(M, X(v))|
  mpz_class rep_side;     // |Hom(S_v(M), X)|
  bool equal() const { return module_side == rep_side; }
};
/// Exhaustive enumeration of both hom sets over a prime field.
AdjunctionCount adjunction_card_check(std::size_t v, const FGModule& m, const Representation& x);

// ---------------------------------------------------------------------------
// Hom groups between representations

struct RepHomGroup {
  FGModule group;
  std::vector<RepMorphism> basis;
  Subquotient presentation;
  Representation source;
  Representation target;

  std::optional<Matrix> coordinates(const RepMorphism& eta) const;
  RepMorphism combine(const Matrix& coefficients) const;
};

RepHomGroup rep_hom_group(const Representation& x, const Representation& y);

// ---------------------------------------------------------------------------
// Componentwise classes

struct RepClassification {
  bool torsion_cw = true;
  bool torsion_free_cw = true;
  bool flat_cw = true;
  std::vector<ModuleClassification> vertices;
  SubRep torsion_subrep;
};

RepClassification classify_rep(const Representation& x, const TorsionTheorySpec& tt);
bool is_flat_cw(const Representation& x);

/// Vertexwise purity; P is a SubRep, so closure is already verified.
bool is_componentwise_pure_subrep(const SubRep& p);

/// Conditions (i) and (ii) for every vertex, without the source-injectivity
/// gate. Outgoing products are finite direct sums (property (B)).
struct InjectivityConditions {
  std::vector<bool> condition_i;
  std::vector<bool> condition_ii;
  bool all_i() const;
  bool all_ii() const;
};
InjectivityConditions injectivity_conditions(const Representation& x);
/// X(v) -> ⊕_{s(a)=v} X(t(a)) with its source and target.
ModuleMap outgoing_map(const Representation& x, std::size_t v);
/// ⊕_{t(a)=v} X(s(a)) -> X(v).
ModuleMap incoming_map(const Representation& x, std::size_t v);

/// Refuses (Refusal) unless the quiver is certified source injective and
/// satisfies (B); then (i) and (ii) decide injectivity.
bool is_injective_rep(const Representation& x);

struct CategoricalFlatReport {
  TriState verdict = TriState::Unknown;
  bool flat_cw = false;
  std::optional<std::size_t> failing_vertex;
  std::string reason;
};
/// Componentwise flat plus a pure monomorphism ⊕_{t(a)=v} X(s(a)) -> X(v)
/// at each vertex. Unknown on cyclic quivers.
CategoricalFlatReport categorical_flat_report(const Representation& x);
TriState is_categorical_flat(const Representation& x);

}  // namespace qrep
