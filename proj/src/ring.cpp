#include "qrep/ring.hpp"

#include <stdexcept>

#include "qrep/error.hpp"

namespace qrep {

namespace {

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long m) {
  return static_cast<unsigned long>((static_cast<unsigned __int128>(a) * b) % m);
}

// m prime, a in [1, m)
unsigned long inverse_mod(unsigned long a, unsigned long m) {
  unsigned long result = 1;
  unsigned long base = a;
  unsigned long e = m - 2;
  while (e > 0) {
    if (e & 1UL) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

}  // namespace

CoefficientRing CoefficientRing::prime_field(std::uint64_t p) {
  mpz_class pz(static_cast<unsigned long>(p));
  if (p < 2 || mpz_probab_prime_p(pz.get_mpz_t(), 40) == 0) {
    throw InvalidInput("prime field characteristic " + std::to_string(p) + " is not prime");
  }
  return CoefficientRing(RingKind::PrimeField, p);
}

CoefficientRing CoefficientRing::parse(std::string_view text) {
  if (text == "Z" || text == "ZZ" || text == "integers") return integers();
  if (text == "Q" || text == "QQ" || text == "rationals") return rationals();
  std::string_view digits;
  if (text.size() > 1 && text[0] == 'F' && text[1] != 'p') {
    digits = text.substr(1);
  } else if (text.rfind("Fp:", 0) == 0) {
    digits = text.substr(3);
  } else if (text.rfind("GF(", 0) == 0 && text.back() == ')') {
    digits = text.substr(3, text.size() - 4);
  } else {
    throw InvalidInput("unknown coefficient ring '" + std::string(text) + "'");
  }
  if (digits.empty() || digits.size() > 18 ||
      digits.find_first_not_of("0123456789") != std::string_view::npos) {
    throw InvalidInput("bad prime field spec '" + std::string(text) + "'");
  }
  return prime_field(std::stoull(std::string(digits)));
}

std::string CoefficientRing::symbol() const {
  switch (kind_) {
    case RingKind::Integers:
      return "Z";
    case RingKind::Rationals:
      return "Q";
    case RingKind::PrimeField:
      return "F" + std::to_string(p_);
  }
  return "?";
}

Scalar CoefficientRing::reduce(const Scalar& x) const {
  if (kind_ != RingKind::PrimeField) return x;
  const unsigned long p = static_cast<unsigned long>(p_);
  unsigned long num = mpz_fdiv_ui(x.get_num_mpz_t(), p);
  if (x.get_den() == 1) return Scalar(num);
  unsigned long den = mpz_fdiv_ui(x.get_den_mpz_t(), p);
  if (den == 0) {
    throw InvalidInput("denominator " + x.get_den().get_str() + " is not invertible mod " +
                       std::to_string(p_));
  }
  return Scalar(static_cast<unsigned long>(mulmod(num, inverse_mod(den, p), p)));
}

Scalar CoefficientRing::normalize(const Scalar& x) const {
  Scalar c = x;
  c.canonicalize();
  if (kind_ == RingKind::Integers && c.get_den() != 1) {
    throw InvalidInput("scalar " + c.get_str() + " is not an integer");
  }
  return reduce(c);
}

bool CoefficientRing::is_unit(const Scalar& a) const {
  if (kind_ == RingKind::Integers) return a == 1 || a == -1;
  return a != 0;
}

Scalar CoefficientRing::inverse(const Scalar& a) const {
  if (!is_unit(a)) throw std::domain_error("inverse of a non-unit " + a.get_str());
  if (kind_ == RingKind::Integers) return a;
  return reduce(Scalar(1) / a);
}

mpz_class CoefficientRing::norm(const Scalar& a) const {
  if (kind_ == RingKind::Integers) return abs(a.get_num());
  return a == 0 ? mpz_class(0) : mpz_class(1);
}

std::pair<Scalar, Scalar> CoefficientRing::divmod(const Scalar& a, const Scalar& b) const {
  if (b == 0) throw std::domain_error("division by zero");
  if (kind_ == RingKind::Integers) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    return {Scalar(q), Scalar(r)};
  }
  return {reduce(a / b), Scalar(0)};
}

bool CoefficientRing::divides(const Scalar& a, const Scalar& b) const {
  if (a == 0) return b == 0;
  if (kind_ == RingKind::Integers) return mpz_divisible_p(b.get_num_mpz_t(), a.get_num_mpz_t()) != 0;
  return true;
}

Bezout CoefficientRing::gcdext(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::Integers) {
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    return {Scalar(g), Scalar(s), Scalar(t)};
  }
  if (a != 0) return {Scalar(1), inverse(a), Scalar(0)};
  if (b != 0) return {Scalar(1), Scalar(0), inverse(b)};
  return {Scalar(0), Scalar(1), Scalar(0)};
}

Scalar CoefficientRing::normalizing_unit(const Scalar& a) const {
  if (a == 0) return Scalar(1);
  if (kind_ == RingKind::Integers) return a < 0 ? Scalar(-1) : Scalar(1);
  return inverse(a);
}

std::string CoefficientRing::format(const Scalar& a) const { return format_scalar(a); }

std::string format_scalar(const Scalar& a) {
  if (a.get_den() == 1) return a.get_num().get_str();
  return a.get_num().get_str() + "/" + a.get_den().get_str();
}

}  // namespace qrep
