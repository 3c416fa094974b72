#include "qrep/path_ring.hpp"

#include <sstream>

#include "qrep/error.hpp"

namespace qrep {

void PathRingElement::add_term(const Path& p, const Scalar& c) {
  const Scalar sum = ring_.add(terms_.count(p) ? terms_[p] : Scalar(0), c);
  if (sum == 0) terms_.erase(p);
  else terms_[p] = sum;
}

PathRingElement PathRingElement::path(const CoefficientRing& ring, const Path& p, const Scalar& c) {
  PathRingElement out(ring);
  out.add_term(p, ring.normalize(c));
  return out;
}

PathRingElement PathRingElement::vertex(const CoefficientRing& ring, std::size_t v) {
  return path(ring, Path::trivial(v));
}

PathRingElement PathRingElement::one(const Quiver& q, const CoefficientRing& ring) {
  PathRingElement out(ring);
  for (std::size_t v = 0; v < q.vertex_count(); ++v) out.add_term(Path::trivial(v), Scalar(1));
  return out;
}

PathRingElement operator+(const PathRingElement& a, const PathRingElement& b) {
  if (a.ring_ != b.ring_) throw Incompatible("path ring elements over different rings");
  PathRingElement out = a;
  for (const auto& [p, c] : b.terms_) out.add_term(p, c);
  return out;
}

PathRingElement operator-(const PathRingElement& a, const PathRingElement& b) {
  return a + b.scaled(-1);
}

PathRingElement operator*(const PathRingElement& a, const PathRingElement& b) {
  if (a.ring_ != b.ring_) throw Incompatible("path ring elements over different rings");
  PathRingElement out(a.ring_);
  for (const auto& [p, c] : a.terms_)
    for (const auto& [q, d] : b.terms_)
      if (auto pq = compose(p, q)) out.add_term(*pq, a.ring_.mul(c, d));
  return out;
}

PathRingElement PathRingElement::scaled(const Scalar& c) const {
  PathRingElement out(ring_);
  for (const auto& [p, d] : terms_) out.add_term(p, ring_.mul(ring_.normalize(c), d));
  return out;
}

std::string PathRingElement::to_string(const Quiver& q) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    Scalar shown = c;
    bool negative = !ring_.is_finite() && c < 0;
    if (negative) shown = -c;
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << "-";
    if (shown != 1) os << format_scalar(shown) << "*";
    os << p.to_string(q);
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

RepElement act_path(const Representation& x, const Path& p, const RepElement& e) {
  check_element(x, e);
  if (p.start != e.vertex)
    throw InvalidInput("path " + p.to_string(x.quiver()) + " starts at " +
                       x.quiver().vertex_name(p.start) + " but the element lives at " +
                       x.quiver().vertex_name(e.vertex));
  return {p.end, x.path_matrix(p) * e.value};
}

RepVector act(const PathRingElement& s, const Representation& x, const RepVector& v) {
  if (s.ring() != x.ring()) throw Incompatible("path ring element over the wrong ring");
  if (v.parts.size() != x.vertex_count()) throw InvalidInput("vector has the wrong number of parts");
  RepVector out = RepVector::zero(x);
  for (const auto& [p, c] : s.terms()) {
    const Matrix img = x.path_matrix(p) * v.parts[p.start];
    out.parts[p.end] = out.parts[p.end] + img.scaled(c);
  }
  return out;
}

RepVector act(const PathRingElement& s, const Representation& x, const RepElement& e) {
  return act(s, x, RepVector::of(x, e));
}

std::vector<RepVector> act_on_generators(const PathRingElement& s, const Representation& x) {
  std::vector<RepVector> out;
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    for (std::size_t i = 0; i < x.module(v).generators(); ++i)
      out.push_back(act(s, x, RepElement{v, x.module(v).generator(i)}));
  return out;
}

// ---------------------------------------------------------------------------

Representation nloop_rep(std::size_t n, const FGModule& e) {
  if (n == 0) throw InvalidInput("the n-loop needs n >= 1");
  const Quiver q = Quiver::loop(n);
  const CoefficientRing& ring = e.ring();
  const FGModule en = power(e, n);
  const std::size_t g = e.generators();
  // block i of the image is block i-1 of the argument (block 0 takes block n-1)
  Matrix shift(ring, n * g, n * g);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t from = (i + n - 1) % n;
    for (std::size_t k = 0; k < g; ++k) shift.set(i * g + k, from * g + k, Scalar(1));
  }
  return Representation(q, ring, std::vector<FGModule>(n, en), std::vector<Matrix>(n, shift));
}

namespace {

bool is_single_cycle(const Quiver& q) {
  const std::size_t n = q.vertex_count();
  if (n == 0 || q.arrow_count() != n) return false;
  for (std::size_t v = 0; v < n; ++v)
    if (q.outgoing(v).size() != 1 || q.incoming(v).size() != 1) return false;
  std::size_t v = 0, steps = 0;
  do {
    v = q.arrow(q.outgoing(v)[0]).target;
    ++steps;
  } while (v != 0 && steps <= n);
  return steps == n;
}

}  // namespace

PathRingElement loop_annihilator(const Quiver& q, const CoefficientRing& ring) {
  if (!is_single_cycle(q)) throw InvalidInput("annihilator element needs a quiver that is a single oriented cycle");
  const std::size_t n = q.vertex_count();
  PathRingElement s(ring);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> arrows;
    std::size_t w = v;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t a = q.outgoing(w)[0];
      arrows.push_back(a);
      w = q.arrow(a).target;
    }
    s = s + PathRingElement::path(ring, Path::from_arrows(q, arrows));
  }
  return s - PathRingElement::one(q, ring);
}

std::string AnnihilatorReport::summary() const {
  if (vacuous) return "vacuous: the representation is zero, divisibility test skipped";
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream os;
  os << "annihilates: " << yn(annihilates) << "; s nonzero: " << yn(s_nonzero)
     << "; condition (i): " << yn(conditions_i) << "; condition (ii): " << yn(conditions_ii)
     << "; divisible: " << yn(divisible) << "; injective: " << yn(injective);
  return os.str();
}

AnnihilatorReport annihilator_witness(const Representation& x) {
  const Quiver& q = x.quiver();
  const PathRingElement s = loop_annihilator(q, x.ring());
  AnnihilatorReport r;
  r.element = s.to_string(q);
  r.s_nonzero = !s.is_zero();
  const InjectivityConditions c = injectivity_conditions(x);
  r.conditions_i = c.all_i();
  r.conditions_ii = c.all_ii();
  if (x.is_zero()) {
    r.vacuous = true;
    return r;
  }
  r.annihilates = true;
  for (const auto& img : act_on_generators(s, x))
    if (!img.is_zero_in(x)) r.annihilates = false;
  if (r.annihilates && r.s_nonzero) {
    // s·X = 0 by linearity, so no x solves s·x = m for a nonzero m.
    for (std::size_t v = 0; v < x.vertex_count() && !r.witness; ++v)
      for (std::size_t i = 0; i < x.module(v).generators(); ++i) {
        const Matrix g = x.module(v).generator(i);
        if (!x.module(v).is_zero_element(g)) {
          r.witness = RepElement{v, g};
          break;
        }
      }
    r.divisible = false;
    r.injective = false;
  }
  return r;
}

}  // namespace qrep
