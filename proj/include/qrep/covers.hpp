#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrep/representation.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// Lifting

/// f : Y -> X' with psi ∘ f = phi (phi : Y -> X, psi : X' -> X), or nothing.
/// Exact: linear algebra over fields, Diophantine solvability over Z.
std::optional<RepMorphism> factor_through(const RepMorphism& phi, const RepMorphism& psi);

// ---------------------------------------------------------------------------
// Test families

enum class MemberClass { ComponentwiseFlat, CategoricalFlat };

struct TestFamily {
  std::string name;
  MemberClass member_class = MemberClass::ComponentwiseFlat;
  std::vector<Representation> members;
};

/// "free<k>": every representation with free vertex modules of rank <= k and
/// 0/1 arrow matrices. Componentwise flat.
TestFamily free_family(const Quiver& q, const CoefficientRing& ring, std::size_t max_rank);
/// "proj<k>": sums of S_v(R) with at most k summands in total. Categorical flat.
TestFamily proj_family(const Quiver& q, const CoefficientRing& ring, std::size_t max_summands);
/// Parses "free<k>" or "proj<k>" (also "free2"/"proj2").
TestFamily family_by_name(const std::string& name, const Quiver& q, const CoefficientRing& ring);
/// Deterministic reordering of the members for a given seed.
void shuffle_family(TestFamily& family, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Precovers and covers

struct PrecoverReport {
  bool pass = true;
  std::string family;
  std::size_t members_tested = 0;
  std::size_t lifts_checked = 0;
  /// Family members outside the stated class (warnings, not failures).
  std::vector<std::string> warnings;
  /// For a failure: the member index and the test morphism that does not lift.
  std::optional<std::size_t> failing_member;
  std::optional<RepMorphism> witness;
  /// One certificate lift per generator of Hom(F', X), in member order.
  std::vector<RepMorphism> certificates;
};

PrecoverReport is_precover(const RepMorphism& psi, const TestFamily& family);

enum class CoverStatus { IsCover, NotCover, Unknown };
std::string to_string(CoverStatus s);

struct CoverVerdict {
  PrecoverReport precover;
  CoverStatus cover = CoverStatus::Unknown;
  std::string reason;
  /// Basis of L: the maps l with psi ∘ l = 0, so the solutions of
  /// psi ∘ f = psi are exactly identity + L.
  std::vector<RepMorphism> endomorphism_lattice;
  bool lattice_nilpotent = false;
  /// For NotCover from sampling: a non-automorphism f with psi ∘ f = psi.
  std::optional<RepMorphism> witness;
  std::size_t samples_tried = 0;
  std::size_t sample_bound = 0;
};

/// Solves psi ∘ f = psi. L = 0 gives IsCover. If every element of L is
/// nilpotent (the algebra generated by L is nilpotent), identity + l is always
/// invertible and the verdict is also IsCover. Otherwise identity + c·b is
/// sampled for c in (1, -1, 2, -2) and each basis element b, up to the bound.
/// A failed precover check yields NotCover without an endomorphism witness.
CoverVerdict cover_verdict(const RepMorphism& psi, const TestFamily& family, std::size_t sample_bound = 8);

// ---------------------------------------------------------------------------
// Recipes turning a module-level cover into a representation-level one

enum class CoverKind { TorsionFree, Flat };

struct ModuleCoverData {
  ModuleMap phi;  // F -> M
  CoverKind kind = CoverKind::Flat;
  std::optional<ModuleMap> aux_cover;           // G -> Ker phi (aux cover of the kernel)
  std::optional<ModuleMap> cotorsion_envelope;  // i : F -> C, C flat

  /// Ker phi as a submodule of F. Checks the invariants of the optional maps.
  Submodule kernel() const;
  void validate() const;
};

enum class Recipe { Ex3_8, Ex5_1_1, Ex5_1_2, Ex5_2, Ex5_3_1, Ex5_3_2 };
/// "ex3.8", "ex5.1.1", "ex5.1.2", "ex5.2", "ex5.3.1", "ex5.3.2".
Recipe parse_recipe(const std::string& id);
std::string to_string(Recipe r);
/// The test family whose class matches the recipe's cover notion.
TestFamily default_family(Recipe r, const Quiver& q, const CoefficientRing& ring);

struct RecipeResult {
  Recipe recipe = Recipe::Ex3_8;
  RepMorphism candidate;
  /// One line per verified square / invariant.
  std::vector<std::string> certificate;
};

/// Throws InvalidInput naming the missing field when auxiliary data is absent.
RecipeResult build_recipe(Recipe r, const ModuleCoverData& data);

/// The explicit lift (f, g, h) with h(x) = (tau1(x), (tau2 - z)(x)) for a test
/// morphism t : (F1 -> F2 -> F3) -> (M -> 0 -> M) against the ex5.3.1 output.
/// Each auxiliary map is found by the module-level solvers; nothing when one
/// of them does not exist.
std::optional<RepMorphism> explicit_ex531_lift(const ModuleCoverData& data, const RecipeResult& built,
                                               const RepMorphism& t);

// ---------------------------------------------------------------------------
// Pure closure and filtrations

struct ClosureStep {
  enum class Kind { Generate, Purify } kind = Kind::Generate;
  std::vector<Submodule> parts;
  std::string description;
};

struct PureClosure {
  SubRep result;
  std::vector<ClosureStep> trace;
  /// Product over vertices of |P(v) / M^0(v)| on torsion parts; a finite-scale
  /// size bound (empty when some index is infinite).
  std::optional<mpz_class> index_bound;
};

/// Smallest stage of the alternation "generate, purify vertexwise, generate,
/// ..." starting at the subrepresentation generated by `seed` and `elements`.
PureClosure pure_closure_rep(const Representation& m, const std::vector<RepElement>& elements,
                             const std::optional<SubRep>& seed = std::nullopt);
PureClosure pure_closure_rep(const Representation& m, const RepElement& x);

struct FiltrationStep {
  RepElement element;  // the unabsorbed element that triggered the step
  SubRep stage;
  Representation quotient;  // stage / previous stage
  std::size_t closure_steps = 0;
};

struct Filtration {
  Representation whole;
  std::vector<FiltrationStep> steps;  // empty for the zero representation
};

/// Throws PreconditionFailed unless F is componentwise flat.
Filtration small_filtration(const Representation& f);

// ---------------------------------------------------------------------------
// Ext

/// Ext^1(X, Y) from the presentation 0 -> K -> ⊕ S_v(R^{g_v}) -> X -> 0:
/// the cokernel of the restriction Hom(P, Y) -> Hom(K, Y). Refuses cyclic quivers.
FGModule ext1_rep(const Representation& x, const Representation& y);
/// Ext^1(F, C) = 0 for every member F (a finite-family surrogate).
bool is_in_perp(const Representation& c, const std::vector<Representation>& family);

// ---------------------------------------------------------------------------
// Interval decomposition on the line quiver

struct Interval {
  std::size_t start = 0;  // 0-based vertex index
  std::size_t end = 0;    // inclusive
  std::size_t multiplicity = 0;
  bool injective = false;  // starts at the first vertex

  std::string to_string() const;  // "[1,2]" (1-based)
};

struct Barcode {
  std::size_t length = 0;
  std::vector<Interval> intervals;  // sorted by (start, end)

  /// Intervals repeated by multiplicity, space separated.
  std::string to_string() const;
};

/// Over a field on the line quiver v1 -> ... -> vn. Asserts the rank-invariant
/// identity of the reconstruction.
Barcode decompose_interval(const Representation& x);

/// k at vertices start..end joined by identities, 0 elsewhere.
Representation interval_rep(const Quiver& line, const CoefficientRing& field, std::size_t start, std::size_t end);
Representation reconstruct(const Barcode& b, const Quiver& line, const CoefficientRing& field);
/// r(i, j) = rank of X(v_i) -> X(v_j), i <= j.
std::vector<std::vector<std::size_t>> rank_invariant(const Representation& x);

}  // namespace qrep
