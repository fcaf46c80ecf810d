#include "flagkit/rational.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flagkit {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto first = s.find_first_not_of(" \t");
  s = first == std::string::npos ? std::string() : s.substr(first, s.find_last_not_of(" \t") - first + 1);
  auto bad = [&]() { return std::invalid_argument("malformed rational: '" + s + "'"); };
  if (s.empty()) throw bad();

  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw bad();
    Integer d(strip_plus(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(Integer(strip_plus(num), 10), d);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    std::string digits = whole;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits = digits.substr(1);
    if (digits.empty()) digits = "0";
    if (!is_int(digits) || (!frac.empty() && !is_int(frac)) || frac.find_first_of("+-") != std::string::npos)
      throw bad();
    Integer den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Integer num(digits + frac, 10);
    Rational q(neg ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
  }
  if (!is_int(s)) throw bad();
  return Rational(Integer(strip_plus(s), 10));
}

std::string ComplexRational::to_string() const {
  if (sgn(im) == 0) return flagkit::to_string(re);
  if (sgn(re) == 0) return flagkit::to_string(im) + "i";
  std::string out = flagkit::to_string(re);
  out += sgn(im) > 0 ? "+" : "-";
  out += flagkit::to_string(Rational(abs(im))) + "i";
  return out;
}

std::pair<Integer, Integer> squarefree_decompose(const Integer& n) {
  if (n <= 0) throw std::invalid_argument("squarefree_decompose: non-positive argument");
  Integer rest = n, k = 1, s = 1;
  for (Integer p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) k *= p;
    if (e % 2) s *= p;
  }
  s *= rest;
  return {k, s};
}

Surd Surd::sqrt(const Rational& q) {
  if (sgn(q) < 0) throw std::invalid_argument("Surd::sqrt of a negative rational");
  Surd out;
  if (sgn(q) == 0) return out;
  Rational c = q;
  c.canonicalize();
  // sqrt(p/r) = sqrt(p*r) / r
  auto [k, s] = squarefree_decompose(Integer(c.get_num() * c.get_den()));
  out.add_term(s, ComplexRational{Rational(k, c.get_den())});
  return out;
}

void Surd::add_term(const Integer& radicand, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(radicand);
  if (it == terms_.end()) {
    terms_.emplace(radicand, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Surd Surd::conj() const {
  Surd out;
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, c.conj());
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  for (const auto& [s, c] : o.terms_) add_term(s, -c);
  return *this;
}

Surd operator-(const Surd& a) {
  Surd out;
  for (const auto& [s, c] : a.terms_) out.terms_.emplace(s, -c);
  return out;
}

Surd operator*(const Surd& a, const Surd& b) {
  Surd out;
  for (const auto& [s1, c1] : a.terms_) {
    for (const auto& [s2, c2] : b.terms_) {
      // sqrt(s1) sqrt(s2) = g sqrt((s1/g)(s2/g)), g = gcd(s1, s2)
      Integer g;
      mpz_gcd(g.get_mpz_t(), s1.get_mpz_t(), s2.get_mpz_t());
      Integer rad = (s1 / g) * (s2 / g);
      out.add_term(rad, Rational(g) * (c1 * c2));
    }
  }
  return out;
}

bool operator==(const Surd& a, const Surd& b) { return (a - b).is_zero(); }

std::complex<double> Surd::to_complex() const {
  std::complex<double> v{0.0, 0.0};
  for (const auto& [s, c] : terms_) v += c.to_complex() * std::sqrt(s.get_d());
  return v;
}

std::string Surd::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool compound = sgn(c.re) != 0 && sgn(c.im) != 0;
    if (s == 1) {
      os << (compound ? "(" + c.to_string() + ")" : c.to_string());
    } else {
      os << (compound ? "(" + c.to_string() + ")" : c.to_string()) << "*sqrt(" << s.get_str() << ")";
    }
  }
  return os.str();
}

}  // namespace flagkit
