#include "qrep/module.hpp"

#include <sstream>

#include "qrep/error.hpp"
#include "qrep/linear_system.hpp"

namespace qrep {

// ---------------------------------------------------------------------------
// Torsion theories

TorsionTheorySpec TorsionTheorySpec::p_primary(std::uint64_t p) {
  CoefficientRing::prime_field(p);  // validates primality
  return {TorsionKind::PPrimary, p};
}

TorsionTheorySpec TorsionTheorySpec::parse(const std::string& text) {
  if (text == "classical") return classical();
  if (text == "trivial") return trivial();
  const std::string prefix = "p-primary:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || digits.size() > 18 ||
        digits.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidInput("bad torsion theory '" + text + "'");
    }
    return p_primary(std::stoull(digits));
  }
  throw InvalidInput("unknown torsion theory '" + text + "'");
}

TorsionTheorySpec TorsionTheorySpec::default_for(const CoefficientRing& ring) {
  return ring.is_field() ? trivial() : classical();
}

void TorsionTheorySpec::validate_for(const CoefficientRing& ring) const {
  if (kind != TorsionKind::Trivial && ring.kind() != RingKind::Integers) {
    throw Incompatible("torsion theory " + to_string() + " is not admitted over " +
                       ring.symbol() + " (only the trivial theory is admitted over a field)");
  }
}

std::string TorsionTheorySpec::to_string() const {
  switch (kind) {
    case TorsionKind::Classical:
      return "classical";
    case TorsionKind::PPrimary:
      return "p-primary:" + std::to_string(prime);
    case TorsionKind::Trivial:
      return "trivial";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Normal forms

std::string NormalForm::to_string(const CoefficientRing& ring) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : factors) {
    if (!first) os << " + ";
    os << ring.symbol() << '/' << format_scalar(d);
    first = false;
  }
  if (free_rank > 0) {
    if (!first) os << " + ";
    os << ring.symbol();
    if (free_rank > 1) os << '^' << free_rank;
  }
  return os.str();
}

NormalForm normalize_module(const FGModule& m) {
  NormalForm nf;
  const Matrix& rel = m.relations();
  if (rel.cols() == 0) {
    nf.free_rank = m.generators();
    return nf;
  }
  const SmithForm s = smith_normal_form(rel);
  for (std::size_t i = 0; i < s.rank; ++i) {
    const Scalar& d = s.D(i, i);
    if (!m.ring().is_unit(d)) nf.factors.push_back(d);
  }
  nf.free_rank = m.generators() - s.rank;
  return nf;
}

NormalForm direct_sum(const CoefficientRing& ring, const NormalForm& a, const NormalForm& b) {
  std::vector<Scalar> all = a.factors;
  all.insert(all.end(), b.factors.begin(), b.factors.end());
  NormalForm out;
  out.free_rank = a.free_rank + b.free_rank;
  if (all.empty()) return out;
  Matrix d(ring, all.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) d.raw(i, i) = all[i];
  const SmithForm s = smith_normal_form(d);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (!ring.is_unit(s.D(i, i))) out.factors.push_back(s.D(i, i));
  return out;
}

// ---------------------------------------------------------------------------
// FGModule

FGModule::FGModule() : FGModule(CoefficientRing::integers(), 0, Matrix()) {}

FGModule::FGModule(CoefficientRing ring, std::size_t generators, Matrix relations) {
  if (relations.rows() == 0 && relations.cols() == 0) relations = Matrix(ring, generators, 0);
  if (relations.rows() != generators) {
    throw InvalidInput("relation matrix has " + std::to_string(relations.rows()) +
                       " rows but the module has " + std::to_string(generators) + " generators");
  }
  if (relations.ring() != ring) throw Incompatible("relation matrix over the wrong ring");
  auto impl = std::make_shared<Impl>();
  impl->ring = ring;
  impl->generators = generators;
  impl->relations = std::move(relations);
  impl_ = impl;
  impl->normal_form = normalize_module(*this);
}

FGModule FGModule::free(CoefficientRing ring, std::size_t rank) {
  return FGModule(ring, rank, Matrix(ring, rank, 0));
}

FGModule FGModule::cyclic(CoefficientRing ring, const Scalar& d) {
  Matrix rel(ring, 1, 1);
  rel.set(0, 0, d);
  return FGModule(ring, 1, rel);
}

FGModule FGModule::from_normal_form(CoefficientRing ring, const NormalForm& nf) {
  const std::size_t k = nf.factors.size();
  Matrix rel(ring, k + nf.free_rank, k);
  for (std::size_t i = 0; i < k; ++i) rel.set(i, i, nf.factors[i]);
  return FGModule(ring, k + nf.free_rank, rel);
}

std::optional<mpz_class> FGModule::cardinality() const {
  const NormalForm& nf = normal_form();
  mpz_class total = 1;
  if (nf.free_rank > 0) {
    if (!ring().is_finite()) return std::nullopt;
    mpz_class p(static_cast<unsigned long>(ring().characteristic()));
    mpz_pow_ui(total.get_mpz_t(), p.get_mpz_t(), nf.free_rank);
  }
  for (const auto& d : nf.factors) total *= abs(d.get_num());
  return total;
}

Scalar FGModule::torsion_exponent() const {
  const auto& f = normal_form().factors;
  return f.empty() ? Scalar(1) : f.back();
}

bool FGModule::is_zero_element(const Matrix& x) const {
  check_element(x);
  return in_span(relations(), x);
}

void FGModule::check_element(const Matrix& x) const {
  if (x.ring() != ring()) throw Incompatible("element over the wrong ring");
  if (x.cols() != 1 || x.rows() != generators()) {
    throw InvalidInput("element has shape " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()) + ", expected " +
                       std::to_string(generators()) + "x1");
  }
}

bool operator==(const FGModule& a, const FGModule& b) {
  if (a.impl_ == b.impl_) return true;
  return a.ring() == b.ring() && a.generators() == b.generators() &&
         a.relations() == b.relations();
}

FGModule direct_sum(const std::vector<FGModule>& parts) {
  if (parts.empty()) return FGModule();
  const CoefficientRing ring = parts.front().ring();
  std::size_t gens = 0;
  std::vector<Matrix> rels;
  for (const auto& p : parts) {
    if (p.ring() != ring) throw Incompatible("direct sum across rings");
    gens += p.generators();
    rels.push_back(p.relations());
  }
  return FGModule(ring, gens, Matrix::block_diag(ring, rels));
}

FGModule power(const FGModule& m, std::size_t copies) {
  if (copies == 0) return FGModule::zero(m.ring());
  return direct_sum(std::vector<FGModule>(copies, m));
}

// ---------------------------------------------------------------------------
// ModuleMap

bool is_well_defined(const FGModule& source, const FGModule& target, const Matrix& matrix) {
  if (matrix.rows() != target.generators() || matrix.cols() != source.generators()) return false;
  if (source.relations().cols() == 0) return true;
  return span_contains(target.relations(), matrix * source.relations());
}

ModuleMap::ModuleMap(FGModule source, FGModule target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (source_.ring() != target_.ring() || matrix_.ring() != source_.ring()) {
    throw Incompatible("module map across rings");
  }
  if (matrix_.rows() == 0 && matrix_.cols() == 0)
    matrix_ = Matrix(source_.ring(), target_.generators(), source_.generators());
  if (matrix_.rows() != target_.generators() || matrix_.cols() != source_.generators()) {
    throw InvalidInput("map matrix is " + std::to_string(matrix_.rows()) + "x" +
                       std::to_string(matrix_.cols()) + ", expected " +
                       std::to_string(target_.generators()) + "x" +
                       std::to_string(source_.generators()));
  }
  if (!is_well_defined(source_, target_, matrix_)) {
    throw InvalidInput("map does not send relations of the source into the relations of the target");
  }
}

ModuleMap ModuleMap::identity(const FGModule& m) {
  return ModuleMap(m, m, Matrix::identity(m.ring(), m.generators()));
}

ModuleMap ModuleMap::zero(const FGModule& source, const FGModule& target) {
  return ModuleMap(source, target, Matrix(source.ring(), target.generators(), source.generators()));
}

bool ModuleMap::is_zero() const { return span_contains(target_.relations(), matrix_); }

bool ModuleMap::is_injective() const { return kernel(*this).is_zero(); }

bool ModuleMap::is_surjective() const {
  const std::size_t g = target_.generators();
  if (g == 0) return true;
  const Matrix h = hermite_basis(Matrix::hstack(target_.relations(), matrix_));
  return h.cols() == g && h.is_identity();
}

bool ModuleMap::equals(const ModuleMap& other) const {
  if (source_ != other.source_ || target_ != other.target_) return false;
  return span_contains(target_.relations(), matrix_ - other.matrix_);
}

ModuleMap operator*(const ModuleMap& after, const ModuleMap& before) {
  if (after.source() != before.target()) {
    throw Incompatible("composition of maps with mismatched modules");
  }
  return ModuleMap(before.source(), after.target(), after.matrix() * before.matrix());
}

ModuleMap operator+(const ModuleMap& a, const ModuleMap& b) {
  if (a.source() != b.source() || a.target() != b.target()) {
    throw Incompatible("sum of maps with different source/target");
  }
  return ModuleMap(a.source(), a.target(), a.matrix() + b.matrix());
}

ModuleMap operator-(const ModuleMap& a, const ModuleMap& b) {
  if (a.source() != b.source() || a.target() != b.target()) {
    throw Incompatible("difference of maps with different source/target");
  }
  return ModuleMap(a.source(), a.target(), a.matrix() - b.matrix());
}

ModuleMap ModuleMap::scaled(const Scalar& c) const {
  return ModuleMap(source_, target_, matrix_.scaled(c));
}

// ---------------------------------------------------------------------------
// Submodule

Submodule::Submodule(FGModule ambient, const Matrix& generators) : ambient_(std::move(ambient)) {
  const CoefficientRing& ring = ambient_.ring();
  Matrix gens = generators;
  if (gens.rows() == 0 && gens.cols() == 0) gens = Matrix(ring, ambient_.generators(), 0);
  if (gens.rows() != ambient_.generators()) {
    throw InvalidInput("submodule generators are not elements of the ambient module");
  }
  lattice_ = hermite_basis(Matrix::hstack(gens, ambient_.relations()));
  presentation_ = present_subquotient(lattice_, ambient_.relations());
  module_ = FGModule(ring, presentation_.size(), presentation_.relation_matrix());
}

Submodule Submodule::zero(const FGModule& ambient) {
  return Submodule(ambient, Matrix(ambient.ring(), ambient.generators(), 0));
}

Submodule Submodule::whole(const FGModule& ambient) {
  return Submodule(ambient, Matrix::identity(ambient.ring(), ambient.generators()));
}

ModuleMap Submodule::inclusion() const { return ModuleMap(module_, ambient_, generators()); }

FGModule Submodule::quotient() const {
  return FGModule(ambient_.ring(), ambient_.generators(), lattice_);
}

ModuleMap Submodule::projection() const {
  return ModuleMap(ambient_, quotient(), Matrix::identity(ambient_.ring(), ambient_.generators()));
}

bool Submodule::contains(const Matrix& x) const {
  ambient_.check_element(x);
  return in_span(lattice_, x);
}

bool Submodule::contains(const Submodule& other) const {
  if (ambient_ != other.ambient_) throw Incompatible("submodules of different modules");
  return span_contains(lattice_, other.lattice_);
}

bool Submodule::is_whole() const {
  return lattice_.cols() == ambient_.generators() && lattice_.is_identity();
}

bool operator==(const Submodule& a, const Submodule& b) {
  return a.ambient_ == b.ambient_ && a.lattice_ == b.lattice_;
}

Submodule operator+(const Submodule& a, const Submodule& b) {
  if (a.ambient() != b.ambient()) throw Incompatible("sum of submodules of different modules");
  return Submodule(a.ambient(), Matrix::hstack(a.lattice(), b.lattice()));
}

// ---------------------------------------------------------------------------
// Kernels, images, cokernels

Submodule kernel(const ModuleMap& f) {
  const FGModule& a = f.source();
  const Matrix system = Matrix::hstack(f.matrix(), f.target().relations());
  if (system.cols() == 0) return Submodule::zero(a);
  const Matrix k = kernel_basis(system);
  return Submodule(a, k.rows_range(0, a.generators()));
}

Submodule image(const ModuleMap& f) { return Submodule(f.target(), f.matrix()); }

MapFactorization map_factorization_data(const ModuleMap& f) {
  MapFactorization out;
  out.kernel = kernel(f);
  out.kernel_inclusion = out.kernel.inclusion();
  out.image = image(f);
  auto coords = out.image.coordinates(f.matrix());
  if (!coords) throw std::logic_error("image does not contain the images of generators");
  out.coimage = ModuleMap(f.source(), out.image.module(), *coords);
  out.image_inclusion = out.image.inclusion();
  out.cokernel = FGModule(f.target().ring(), f.target().generators(),
                          Matrix::hstack(f.target().relations(), f.matrix()));
  out.cokernel_projection = ModuleMap(
      f.target(), out.cokernel, Matrix::identity(f.target().ring(), f.target().generators()));
  return out;
}

// ---------------------------------------------------------------------------
// Hom groups

Matrix zero_map_span(const Matrix& target_relations, std::size_t source_cols) {
  const std::size_t m = target_relations.rows();
  const std::size_t r = target_relations.cols();
  Matrix out(target_relations.ring(), m * source_cols, r * source_cols);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < source_cols; ++j)
      for (std::size_t i = 0; i < m; ++i)
        out.raw(i * source_cols + j, k * source_cols + j) = target_relations(i, k);
  return out;
}

std::optional<Matrix> ModuleHomGroup::coordinates(const ModuleMap& f) const {
  return presentation.coordinates(f.matrix().vec());
}

ModuleMap ModuleHomGroup::combine(const Matrix& coefficients) const {
  Matrix acc(group.ring(), target_generators, source_generators);
  for (std::size_t i = 0; i < basis.size(); ++i)
    acc = acc + basis[i].matrix().scaled(coefficients(i, 0));
  return ModuleMap(source, target, acc);
}

ModuleHomGroup hom_module(const FGModule& a, const FGModule& b) {
  if (a.ring() != b.ring()) throw Incompatible("Hom between modules over different rings");
  const CoefficientRing& ring = a.ring();
  LinearSystem sys(ring);
  const auto t = sys.add_unknown(b.generators(), a.generators());
  if (a.relations().cols() > 0) {
    sys.add_equation({{Matrix::identity(ring, b.generators()), t, a.relations()}}, nullptr,
                     b.relations());
  }
  const Matrix maps = sys.homogeneous_projection({t});
  const Matrix zeros = zero_map_span(b.relations(), a.generators());
  ModuleHomGroup out;
  out.source_generators = a.generators();
  out.target_generators = b.generators();
  out.source = a;
  out.target = b;
  out.presentation = present_subquotient(maps, zeros);
  out.group = FGModule(ring, out.presentation.size(), out.presentation.relation_matrix());
  for (std::size_t i = 0; i < out.presentation.size(); ++i) {
    out.basis.emplace_back(
        a, b, Matrix::unvec(out.presentation.generators.col(i), b.generators(), a.generators()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Purity

// Over a field every submodule is a direct summand. Over the integers a
// submodule A of a finitely generated B is pure iff it is a direct summand
// (B/A is finitely presented), and by Miyata's theorem 0 -> A -> B -> B/A -> 0
// splits iff B ≅ A ⊕ B/A; the latter is a comparison of normal forms.
bool is_pure_submodule(const Submodule& a) {
  const FGModule& b = a.ambient();
  if (b.ring().is_field()) return true;
  const NormalForm sum = direct_sum(b.ring(), a.module().normal_form(), a.quotient().normal_form());
  return sum == b.normal_form();
}

bool is_pure_submodule(const Matrix& gens, const FGModule& b) {
  return is_pure_submodule(Submodule(b, gens));
}

PureSuperset pure_superset(const Submodule& a) {
  const FGModule& b = a.ambient();
  PureSuperset out;
  const Matrix sat = a.lattice().cols() == 0 ? a.lattice() : saturation(a.lattice());
  out.pure = Submodule(b, sat);
  mpz_class index = 1;
  const FGModule quotient = a.quotient();
  for (const auto& d : quotient.normal_form().factors) index *= abs(d.get_num());
  out.index = index;
  return out;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

bool is_power_of(const Scalar& d, std::uint64_t p) {
  mpz_class n = abs(d.get_num());
  const unsigned long pp = static_cast<unsigned long>(p);
  while (n > 1 && mpz_divisible_ui_p(n.get_mpz_t(), pp)) n /= pp;
  return n == 1;
}

mpz_class prime_to_p_part(const Scalar& d, std::uint64_t p) {
  mpz_class n = abs(d.get_num());
  const unsigned long pp = static_cast<unsigned long>(p);
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), pp)) n /= pp;
  return n;
}

}  // namespace

Submodule torsion_submodule(const FGModule& m, const TorsionTheorySpec& tt) {
  tt.validate_for(m.ring());
  if (tt.kind == TorsionKind::Trivial || m.relations().cols() == 0) return Submodule::zero(m);
  const SmithForm s = smith_normal_form(m.relations());
  const Matrix uinv = inverse(s.U);
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < s.rank; ++i) {
    const Scalar& d = s.D(i, i);
    if (m.ring().is_unit(d)) continue;
    if (tt.kind == TorsionKind::Classical) {
      gens.push_back(uinv.col(i));
    } else if (mpz_divisible_ui_p(d.get_num_mpz_t(), static_cast<unsigned long>(tt.prime))) {
      gens.push_back(uinv.col(i).scaled(Scalar(prime_to_p_part(d, tt.prime))));
    }
  }
  if (gens.empty()) return Submodule::zero(m);
  return Submodule(m, Matrix::hstack(m.ring(), gens, m.generators()));
}

bool is_injective_module(const FGModule& m) {
  // No nonzero finitely generated abelian group is divisible.
  return m.ring().is_field() || m.is_zero();
}

bool is_flat_module(const FGModule& m) { return m.ring().is_field() || m.is_torsion_free(); }

ModuleClassification classify_module(const FGModule& m, const TorsionTheorySpec& tt) {
  tt.validate_for(m.ring());
  const NormalForm& nf = m.normal_form();
  ModuleClassification c;
  c.flat = is_flat_module(m);
  c.injective = is_injective_module(m);
  c.divisible = c.injective;
  switch (tt.kind) {
    case TorsionKind::Trivial:
      c.torsion = m.is_zero();
      c.torsion_free = true;
      break;
    case TorsionKind::Classical:
      c.torsion = nf.free_rank == 0;
      c.torsion_free = nf.factors.empty();
      break;
    case TorsionKind::PPrimary: {
      c.torsion = nf.free_rank == 0;
      c.torsion_free = true;
      for (const auto& d : nf.factors) {
        if (!is_power_of(d, tt.prime)) c.torsion = false;
        if (mpz_divisible_ui_p(d.get_num_mpz_t(), static_cast<unsigned long>(tt.prime)))
          c.torsion_free = false;
      }
      break;
    }
  }
  c.torsion_submodule = torsion_submodule(m, tt);
  return c;
}

// ---------------------------------------------------------------------------
// Lifting problems

std::optional<ModuleMap> has_section(const ModuleMap& psi) {
  const FGModule& a = psi.source();
  const FGModule& b = psi.target();
  const CoefficientRing& ring = a.ring();
  LinearSystem sys(ring);
  const auto s = sys.add_unknown(a.generators(), b.generators());
  if (b.relations().cols() > 0) {
    sys.add_equation({{Matrix::identity(ring, a.generators()), s, b.relations()}}, nullptr,
                     a.relations());
  }
  const Matrix minus_id = -Matrix::identity(ring, b.generators());
  sys.add_equation({{psi.matrix(), s, Matrix::identity(ring, b.generators())}}, &minus_id,
                   b.relations());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ModuleMap(b, a, (*sol)[s]);
}

bool is_split_epimorphism(const ModuleMap& psi) {
  return psi.is_surjective() && has_section(psi).has_value();
}

std::optional<ModuleMap> factor_module(const ModuleMap& phi, const ModuleMap& psi) {
  if (phi.target() != psi.target()) throw Incompatible("factor_module: targets differ");
  const FGModule& y = phi.source();
  const FGModule& xp = psi.source();
  const CoefficientRing& ring = y.ring();
  LinearSystem sys(ring);
  const auto f = sys.add_unknown(xp.generators(), y.generators());
  if (y.relations().cols() > 0) {
    sys.add_equation({{Matrix::identity(ring, xp.generators()), f, y.relations()}}, nullptr,
                     xp.relations());
  }
  const Matrix minus_phi = -phi.matrix();
  sys.add_equation({{psi.matrix(), f, Matrix::identity(ring, y.generators())}}, &minus_phi,
                   phi.target().relations());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ModuleMap(y, xp, (*sol)[f]);
}

std::optional<ModuleMap> extend_module(const ModuleMap& alpha, const ModuleMap& g) {
  if (alpha.source() != g.source()) throw Incompatible("extend_module: sources differ");
  const FGModule& b = alpha.target();
  const FGModule& c = g.target();
  const CoefficientRing& ring = b.ring();
  LinearSystem sys(ring);
  const auto h = sys.add_unknown(c.generators(), b.generators());
  if (b.relations().cols() > 0) {
    sys.add_equation({{Matrix::identity(ring, c.generators()), h, b.relations()}}, nullptr,
                     c.relations());
  }
  const Matrix minus_g = -g.matrix();
  sys.add_equation({{Matrix::identity(ring, c.generators()), h, alpha.matrix()}}, &minus_g,
                   c.relations());
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ModuleMap(b, c, (*sol)[h]);
}

}  // namespace qrep
