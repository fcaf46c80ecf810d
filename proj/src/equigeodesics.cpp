#include "flagkit/equigeodesics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace flagkit {

namespace {

bool negligible(const Surd& s, double) { return s.is_zero(); }
bool negligible(const std::complex<double>& z, double tol) { return std::abs(z) <= tol; }

bool exactly_zero(const Surd& s) { return s.is_zero(); }
bool exactly_zero(const std::complex<double>& z) { return z == std::complex<double>{}; }

Surd conj_of(const Surd& s) { return s.conj(); }
std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }

template <class S>
S from_surd(const Surd& s);
template <>
Surd from_surd<Surd>(const Surd& s) {
  return s;
}
template <>
std::complex<double> from_surd<std::complex<double>>(const Surd& s) {
  return s.to_complex();
}

std::string text_of(const Surd& s) { return s.to_string(); }
std::string text_of(const std::complex<double>& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}
std::complex<double> numeric_of(const Surd& s) { return s.to_complex(); }
std::complex<double> numeric_of(const std::complex<double>& z) { return z; }

Surd constant(const WeylBasisData& w, const Root& a, const Root& b, ConstantMode mode) {
  if (mode == ConstantMode::True) return w.structure_constant(a, b);
  return Surd(Rational(w.sign(a, b)));
}

template <class S>
void for_each_term(const BasicTangentVector<S>& x, auto&& fn) {
  for (const auto& [r, c] : x.positive_coeffs()) {
    fn(r, c);
    fn(-r, S(-conj_of(c)));
  }
}

const Root kA2{0, 1}, kA12{1, 1}, kA122{1, 2}, kA1222{1, 3}, kA1122{2, 3};

void require_g2_three_summand(const FlagManifold& f) {
  if (f.root_system().lie_type() != LieType{Family::G, 2} || f.parabolic() != std::vector<int>{0})
    throw std::invalid_argument("classification applies to G2 with parabolic {1} only, got " + f.name());
}

}  // namespace

// ---------------------------------------------------------------------------
// BasicTangentVector

template <class S>
void BasicTangentVector<S>::set(const Root& alpha, const S& c) {
  if (alpha.is_zero()) throw std::invalid_argument("zero root");
  const Root key = alpha.is_positive() ? alpha : -alpha;
  const S value = alpha.is_positive() ? c : S(-conj_of(c));
  if (exactly_zero(value)) {
    coeffs_.erase(key);
  } else {
    coeffs_[key] = value;
  }
}

template <class S>
S BasicTangentVector<S>::coeff(const Root& alpha) const {
  const Root key = alpha.is_positive() ? alpha : -alpha;
  auto it = coeffs_.find(key);
  if (it == coeffs_.end()) return S{};
  return alpha.is_positive() ? it->second : S(-conj_of(it->second));
}

template <class S>
BasicTangentVector<S>& BasicTangentVector<S>::operator+=(const BasicTangentVector& o) {
  for (const auto& [r, c] : o.coeffs_) set(r, coeff(r) + c);
  return *this;
}

template <class S>
BasicTangentVector<S> BasicTangentVector<S>::scaled(double t) const {
  BasicTangentVector out;
  for (const auto& [r, c] : coeffs_) {
    if constexpr (std::is_same_v<S, Surd>) {
      out.set(r, Surd(Rational(t)) * c);
    } else {
      out.set(r, t * c);
    }
  }
  return out;
}

template class BasicTangentVector<Surd>;
template class BasicTangentVector<std::complex<double>>;

NumericTangentVector to_numeric(const TangentVector& x) {
  NumericTangentVector out;
  for (const auto& [r, c] : x.positive_coeffs()) out.set(r, c.to_complex());
  return out;
}

// ---------------------------------------------------------------------------
// Brackets

template <class S>
void require_in_m(const FlagManifold& f, const BasicTangentVector<S>& x) {
  for (const auto& [r, c] : x.positive_coeffs())
    if (!f.is_m_root(r)) throw std::invalid_argument("coefficient on non-complementary root " + r.to_string());
}

template <class S>
BasicTangentVector<S> module_component(const FlagManifold& f, const BasicTangentVector<S>& x, size_t k) {
  BasicTangentVector<S> out;
  for (const auto& [r, c] : x.positive_coeffs())
    if (f.module_of(r) == k) out.set(r, c);
  return out;
}

template <class S>
BasicTangentVector<S> bracket_m(const FlagManifold& f, const WeylBasisData& w, const BasicTangentVector<S>& x,
                                const BasicTangentVector<S>& y, ConstantMode mode) {
  const RootSystem& rs = w.root_system();
  std::map<Root, S> acc;
  for_each_term(x, [&](const Root& a, const S& ca) {
    for_each_term(y, [&](const Root& b, const S& db) {
      const Root g = a + b;
      if (!g.is_positive() || !rs.is_root(g) || !f.is_m_root(g)) return;
      acc[g] = acc[g] + from_surd<S>(constant(w, a, b, mode)) * ca * db;
    });
  });
  BasicTangentVector<S> out;
  for (const auto& [g, c] : acc) out.set(g, c);
  return out;
}

template <class S>
EquigeodesicVerdict is_equigeodesic(const FlagManifold& f, const WeylBasisData& w, const BasicTangentVector<S>& x,
                                    double tol, ConstantMode mode) {
  require_in_m(f, x);
  EquigeodesicVerdict v;
  if (x.is_zero()) {
    v.is_equigeodesic = true;
    v.family = "trivial";
    return v;
  }
  for (size_t k = 0; k < f.module_count(); ++k) {
    auto xk = module_component(f, x, k);
    if (xk.is_zero()) continue;
    auto b = bracket_m(f, w, x, xk, mode);
    for (const auto& [g, c] : b.positive_coeffs()) {
      if (negligible(c, tol)) continue;
      v.witness = EquigeodesicWitness{k, g, text_of(c), numeric_of(c)};
      return v;
    }
  }
  v.is_equigeodesic = true;
  return v;
}

bool is_equigeodesic_pair_fullflag(const RootSystem& rs, const Root& alpha, const Root& beta) {
  for (const Root* r : {&alpha, &beta})
    if (!rs.is_root(*r) || !r->is_positive()) throw std::invalid_argument("expected a positive root: " + r->to_string());
  if (alpha == beta) throw std::invalid_argument("roots must be distinct");
  return !rs.is_root(alpha + beta) && !rs.is_root(alpha - beta);
}

bool is_equigeodesic_multiroot_fullflag(const RootSystem& rs, const std::vector<Root>& roots) {
  for (size_t i = 0; i < roots.size(); ++i) {
    if (!rs.is_root(roots[i]) || !roots[i].is_positive())
      throw std::invalid_argument("expected a positive root: " + roots[i].to_string());
    for (size_t j = 0; j < i; ++j)
      if (roots[i] == roots[j]) throw std::invalid_argument("duplicate root " + roots[i].to_string());
  }
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (!is_equigeodesic_pair_fullflag(rs, roots[i], roots[j])) return false;
  return true;
}

bool geodesic_vector_check(const FlagManifold& f, const WeylBasisData& w, const ExactMetric& metric,
                           const TangentVector& x) {
  metric.validate(f.module_count());
  require_in_m(f, x);
  TangentVector lx;
  for (const auto& [r, c] : x.positive_coeffs()) lx.set(r, Surd(metric[*f.module_of(r)]) * c);
  return bracket_m(f, w, x, lx).is_zero();
}

bool geodesic_vector_check(const FlagManifold& f, const WeylBasisData& w, const NumericMetric& metric,
                           const NumericTangentVector& x, double tol) {
  metric.validate(f.module_count());
  require_in_m(f, x);
  NumericTangentVector lx;
  for (const auto& [r, c] : x.positive_coeffs()) lx.set(r, metric[*f.module_of(r)] * c);
  for (const auto& [g, c] : bracket_m(f, w, x, lx).positive_coeffs())
    if (std::abs(c) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// G2 three-summand flag

template <class S>
G2ThreeSummandCoords<S> g2_three_summand_coords(const BasicTangentVector<S>& v) {
  return {v.coeff(kA2), v.coeff(kA12), v.coeff(-kA2), v.coeff(-kA12),
          v.coeff(kA122), v.coeff(-kA122), v.coeff(kA1222), v.coeff(kA1122)};
}

std::pair<Surd, Surd> g2_family_e_weights(const WeylBasisData& w, ConstantMode mode) {
  if (mode == ConstantMode::Unit) return {Surd(Rational(1)), Surd(Rational(1))};
  return {w.structure_constant(-kA2, kA1222), w.structure_constant(-kA12, kA1122)};
}

template <class S>
std::vector<S> g2_three_summand_system(const FlagManifold& f, const WeylBasisData& w,
                                       const BasicTangentVector<S>& v, ConstantMode mode) {
  require_g2_three_summand(f);
  require_in_m(f, v);
  const auto x = g2_three_summand_coords(v);
  auto k = [&](const Root& a, const Root& b) {
    return mode == ConstantMode::True ? from_surd<S>(w.structure_constant(a, b)) : from_surd<S>(Surd(Rational(1)));
  };
  const auto [w1, w2] = g2_family_e_weights(w, mode);
  return {
      k(-kA12, kA122) * x.b2 * x.c1,
      k(-kA122, kA1222) * x.c2 * x.d1,
      k(-kA2, kA122) * x.b1 * x.c1,
      k(-kA122, kA1122) * x.c2 * x.d2,
      from_surd<S>(w1) * x.b1 * x.d1 + from_surd<S>(w2) * x.b2 * x.d2,
      k(kA2, kA122) * x.a1 * x.c1,
      k(kA12, kA122) * x.a2 * x.c1,
  };
}

template <class S>
EquigeodesicVerdict classify_g2_three_summand(const FlagManifold& f, const WeylBasisData& w,
                                              const BasicTangentVector<S>& v, ConstantMode mode, double tol) {
  const auto rows = g2_three_summand_system(f, w, v, mode);
  EquigeodesicVerdict verdict;
  verdict.is_equigeodesic = std::all_of(rows.begin(), rows.end(), [&](const S& r) { return negligible(r, tol); });
  if (!verdict.is_equigeodesic) {
    verdict.family = "f";
    verdict.witness = is_equigeodesic(f, w, v, tol, mode).witness;
    return verdict;
  }
  const auto x = g2_three_summand_coords(v);
  const bool has_a1 = !negligible(x.a1, tol), has_a2 = !negligible(x.a2, tol);
  const bool in1 = has_a1 || has_a2, in2 = !negligible(x.c1, tol);
  const bool has_d1 = !negligible(x.d1, tol), has_d2 = !negligible(x.d2, tol);
  const bool in3 = has_d1 || has_d2;
  if (!in1 && !in2 && !in3) {
    verdict.family = "trivial";
  } else if (!in2 && !in3) {
    verdict.family = "a";
  } else if (!in1 && !in3) {
    verdict.family = "b";
  } else if (!in1 && !in2) {
    verdict.family = "c";
  } else if (!has_a1 && !in2 && !has_d2) {
    verdict.family = "d";
  } else {
    verdict.family = "e";
  }
  return verdict;
}

#define FLAGKIT_INSTANTIATE(S)                                                                                     \
  template void require_in_m(const FlagManifold&, const BasicTangentVector<S>&);                                  \
  template BasicTangentVector<S> module_component(const FlagManifold&, const BasicTangentVector<S>&, size_t);     \
  template BasicTangentVector<S> bracket_m(const FlagManifold&, const WeylBasisData&, const BasicTangentVector<S>&, \
                                           const BasicTangentVector<S>&, ConstantMode);                           \
  template EquigeodesicVerdict is_equigeodesic(const FlagManifold&, const WeylBasisData&,                         \
                                               const BasicTangentVector<S>&, double, ConstantMode);               \
  template G2ThreeSummandCoords<S> g2_three_summand_coords(const BasicTangentVector<S>&);                         \
  template std::vector<S> g2_three_summand_system(const FlagManifold&, const WeylBasisData&,                      \
                                                  const BasicTangentVector<S>&, ConstantMode);                    \
  template EquigeodesicVerdict classify_g2_three_summand(const FlagManifold&, const WeylBasisData&,               \
                                                         const BasicTangentVector<S>&, ConstantMode, double);

FLAGKIT_INSTANTIATE(Surd)
FLAGKIT_INSTANTIATE(std::complex<double>)

#undef FLAGKIT_INSTANTIATE

}  // namespace flagkit
