#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrep/lattice.hpp"
#include "qrep/matrix.hpp"
#include "qrep/ring.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// Torsion theories

enum class TorsionKind { Classical, PPrimary, Trivial };

/// Hereditary, faithful torsion theory on the module category of the ring.
/// Classical and p-primary theories live over the integers; the trivial
/// theory (nothing is torsion) is admitted over every ring.
struct TorsionTheorySpec {
  TorsionKind kind = TorsionKind::Classical;
  std::uint64_t prime = 0;  // PPrimary only

  static TorsionTheorySpec classical() { return {TorsionKind::Classical, 0}; }
  static TorsionTheorySpec p_primary(std::uint64_t p);
  static TorsionTheorySpec trivial() { return {TorsionKind::Trivial, 0}; }
  /// "classical", "p-primary:<p>", "trivial".
  static TorsionTheorySpec parse(const std::string& text);
  /// Default theory for a ring: classical over Z, trivial over a field.
  static TorsionTheorySpec default_for(const CoefficientRing& ring);

  /// Throws Incompatible if the theory is not admitted over the ring.
  void validate_for(const CoefficientRing& ring) const;
  std::string to_string() const;

  friend bool operator==(const TorsionTheorySpec& a, const TorsionTheorySpec& b) {
    return a.kind == b.kind && a.prime == b.prime;
  }
};

// ---------------------------------------------------------------------------

/// Isomorphism invariant of a finitely generated module over a PID:
/// invariant factors d_1 | d_2 | ... (non-units) plus a free rank. Over a
/// field the factor list is always empty and free_rank is the dimension.
struct NormalForm {
  std::vector<Scalar> factors;
  std::size_t free_rank = 0;

  bool is_zero() const { return factors.empty() && free_rank == 0; }
  std::string to_string(const CoefficientRing& ring) const;
  friend bool operator==(const NormalForm& a, const NormalForm& b) {
    return a.free_rank == b.free_rank && a.factors == b.factors;
  }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }
};

NormalForm direct_sum(const CoefficientRing& ring, const NormalForm& a, const NormalForm& b);

/// ring^generators / colspan(relations). Immutable; copies share storage.
class FGModule {
 public:
  FGModule();
  /// `relations` must have `generators` rows (any number of columns).
  FGModule(CoefficientRing ring, std::size_t generators, Matrix relations);

  static FGModule free(CoefficientRing ring, std::size_t rank);
  static FGModule zero(CoefficientRing ring) { return free(ring, 0); }
  /// ring / (d)
  static FGModule cyclic(CoefficientRing ring, const Scalar& d);
  static FGModule from_normal_form(CoefficientRing ring, const NormalForm& nf);

  const CoefficientRing& ring() const noexcept { return impl_->ring; }
  std::size_t generators() const noexcept { return impl_->generators; }
  const Matrix& relations() const noexcept { return impl_->relations; }
  const NormalForm& normal_form() const noexcept { return impl_->normal_form; }

  bool is_zero() const { return normal_form().is_zero(); }
  bool is_torsion_free() const { return normal_form().factors.empty(); }
  /// Cardinality when finite.
  std::optional<mpz_class> cardinality() const;
  /// Exponent of the torsion submodule (1 when torsion-free).
  Scalar torsion_exponent() const;

  Matrix zero_element() const { return Matrix(ring(), generators(), 1); }
  Matrix generator(std::size_t i) const { return Matrix::unit_vector(ring(), generators(), i); }
  bool is_zero_element(const Matrix& x) const;
  bool same_element(const Matrix& x, const Matrix& y) const { return is_zero_element(x - y); }
  /// Throws InvalidInput unless x is a column of the right height.
  void check_element(const Matrix& x) const;

  bool isomorphic_to(const FGModule& other) const {
    return ring() == other.ring() && normal_form() == other.normal_form();
  }
  /// Same presentation (not merely isomorphic).
  friend bool operator==(const FGModule& a, const FGModule& b);
  friend bool operator!=(const FGModule& a, const FGModule& b) { return !(a == b); }

  std::string describe() const { return normal_form().to_string(ring()); }

 private:
  struct Impl {
    CoefficientRing ring;
    std::size_t generators = 0;
    Matrix relations;
    NormalForm normal_form;
  };
  std::shared_ptr<const Impl> impl_;
};

/// (invariant factors, free rank) of a presentation.
NormalForm normalize_module(const FGModule& m);

/// Direct sum with canonical injections/projections given as plain matrices
/// on generators (block structure in summand order).
FGModule direct_sum(const std::vector<FGModule>& parts);
FGModule power(const FGModule& m, std::size_t copies);

// ---------------------------------------------------------------------------

/// Homomorphism given by its matrix on generators. Construction checks that
/// relations of the source land in the relation lattice of the target.
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(FGModule source, FGModule target, Matrix matrix);

  static ModuleMap identity(const FGModule& m);
  static ModuleMap zero(const FGModule& source, const FGModule& target);

  const FGModule& source() const noexcept { return source_; }
  const FGModule& target() const noexcept { return target_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  Matrix apply(const Matrix& x) const { return matrix_ * x; }

  bool is_zero() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const { return is_injective() && is_surjective(); }

  /// Equality as homomorphisms (matrices may differ by relations).
  bool equals(const ModuleMap& other) const;

  friend ModuleMap operator*(const ModuleMap& after, const ModuleMap& before);
  friend ModuleMap operator+(const ModuleMap& a, const ModuleMap& b);
  friend ModuleMap operator-(const ModuleMap& a, const ModuleMap& b);
  ModuleMap scaled(const Scalar& c) const;

 private:
  FGModule source_;
  FGModule target_;
  Matrix matrix_;
};

/// Is `matrix` a well-defined map between these presentations?
bool is_well_defined(const FGModule& source, const FGModule& target, const Matrix& matrix);

// ---------------------------------------------------------------------------

/// Submodule of an FGModule, stored canonically as the Hermite basis of its
/// preimage lattice in ring^generators (which contains the relations).
class Submodule {
 public:
  Submodule() = default;
  /// Submodule generated by the columns of `generators` (ambient coordinates).
  Submodule(FGModule ambient, const Matrix& generators);

  static Submodule zero(const FGModule& ambient);
  static Submodule whole(const FGModule& ambient);

  const FGModule& ambient() const noexcept { return ambient_; }
  const Matrix& lattice() const noexcept { return lattice_; }
  /// Minimal generators in ambient coordinates (one per cyclic summand).
  const Matrix& generators() const noexcept { return presentation_.generators; }
  const Subquotient& presentation() const noexcept { return presentation_; }

  /// Intrinsic presentation on the minimal generators.
  const FGModule& module() const noexcept { return module_; }
  ModuleMap inclusion() const;
  FGModule quotient() const;
  ModuleMap projection() const;

  bool contains(const Matrix& x) const;
  bool contains(const Submodule& other) const;
  /// Coordinates of an ambient element in the intrinsic presentation.
  std::optional<Matrix> coordinates(const Matrix& x) const { return presentation_.coordinates(x); }

  bool is_zero() const { return module_.is_zero(); }
  bool is_whole() const;

  friend bool operator==(const Submodule& a, const Submodule& b);
  friend bool operator!=(const Submodule& a, const Submodule& b) { return !(a == b); }
  friend Submodule operator+(const Submodule& a, const Submodule& b);

 private:
  FGModule ambient_;
  Matrix lattice_;
  Subquotient presentation_;
  FGModule module_;
};

/// Kernel, image and cokernel of a map with their canonical maps.
struct MapFactorization {
  Submodule kernel;
  ModuleMap kernel_inclusion;  // ker -> source
  Submodule image;
  ModuleMap coimage;           // source -> im (surjective)
  ModuleMap image_inclusion;   // im -> target
  FGModule cokernel;
  ModuleMap cokernel_projection;  // target -> coker
};

Submodule kernel(const ModuleMap& f);
Submodule image(const ModuleMap& f);
MapFactorization map_factorization_data(const ModuleMap& f);

/// Hom_R(A, B) presented as a module; `basis[i]` realizes generator i.
struct ModuleHomGroup {
  FGModule group;
  std::vector<ModuleMap> basis;
  Subquotient presentation;
  std::size_t source_generators = 0;
  std::size_t target_generators = 0;
  FGModule source;
  FGModule target;

  /// Coordinates of a map in the generators of `group`.
  std::optional<Matrix> coordinates(const ModuleMap& f) const;
  /// Sum of coefficient * basis map.
  ModuleMap combine(const Matrix& coefficients) const;
};

ModuleHomGroup hom_module(const FGModule& a, const FGModule& b);

// ---------------------------------------------------------------------------

/// Fast purity test (see is_pure_submodule in module.cpp for the criterion).
bool is_pure_submodule(const Submodule& a);
/// Convenience overload: submodule of b generated by the columns of gens.
bool is_pure_submodule(const Matrix& gens, const FGModule& b);

struct PureSuperset {
  Submodule pure;
  /// |pure / input| = order of the torsion submodule of ambient / input
  /// (nothing when that order is infinite, which never happens over a PID).
  std::optional<mpz_class> index;
};

/// Preimage of the torsion submodule of B/A: a pure (in fact direct summand)
/// submodule of B containing A.
PureSuperset pure_superset(const Submodule& a);

struct ModuleClassification {
  bool torsion = false;
  bool torsion_free = false;
  bool flat = false;
  bool injective = false;
  bool divisible = false;
  Submodule torsion_submodule;
};

ModuleClassification classify_module(const FGModule& m, const TorsionTheorySpec& tt);
Submodule torsion_submodule(const FGModule& m, const TorsionTheorySpec& tt);
bool is_injective_module(const FGModule& m);
bool is_flat_module(const FGModule& m);

/// s with psi ∘ s = id_target, if one exists.
std::optional<ModuleMap> has_section(const ModuleMap& psi);
bool is_split_epimorphism(const ModuleMap& psi);

/// f with psi ∘ f = phi (common target), if one exists.
std::optional<ModuleMap> factor_module(const ModuleMap& phi, const ModuleMap& psi);
/// h with h ∘ alpha = g (common source), if one exists.
std::optional<ModuleMap> extend_module(const ModuleMap& alpha, const ModuleMap& g);

/// Matrices whose columns lie in colspan(target_relations), vectorized
/// row-major as (target_rows x source_cols) matrices: the maps that are zero.
Matrix zero_map_span(const Matrix& target_relations, std::size_t source_cols);

}  // namespace qrep
