#pragma once

// Exact scalars used throughout flagkit: GMP rationals, Gaussian rationals,
// and finite sums of square roots with Gaussian-rational coefficients.

#include <complex>
#include <map>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace flagkit {

using Integer = mpz_class;
using Rational = mpq_class;

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Parses "p/q", "p", or a finite decimal such as "-0.25". Throws
/// std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Element of Q(i).
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational r, Rational i = Rational{0}) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  ComplexRational conj() const { return {re, -im}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator*(const Rational& s, const ComplexRational& a) {
    return {s * a.re, s * a.im};
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string to_string() const;
};

/// Squarefree decomposition n = k^2 * s with s squarefree; returns {k, s}.
/// Requires n > 0.
std::pair<Integer, Integer> squarefree_decompose(const Integer& n);

/// Finite sum  sum_s c_s * sqrt(s)  with distinct squarefree radicands s and
/// Gaussian-rational coefficients c_s. Square roots of distinct squarefree
/// integers are linearly independent over Q(i), so the representation is
/// canonical and is_zero() is an exact test.
class Surd {
 public:
  Surd() = default;
  Surd(const Rational& q) { add_term(Integer{1}, ComplexRational{q}); }
  Surd(const ComplexRational& c) { add_term(Integer{1}, c); }

  /// sqrt(q) for q >= 0.
  static Surd sqrt(const Rational& q);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Integer, ComplexRational>& terms() const { return terms_; }

  /// True when the value lies in Q(i).
  bool is_gaussian_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
  }

  Surd conj() const;

  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator-(const Surd& a);
  friend Surd operator*(const Surd& a, const Surd& b);
  friend bool operator==(const Surd& a, const Surd& b);

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  void add_term(const Integer& radicand, const ComplexRational& c);

  std::map<Integer, ComplexRational> terms_;
};

}  // namespace flagkit
