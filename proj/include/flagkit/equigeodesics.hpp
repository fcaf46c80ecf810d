#pragma once

// Equigeodesic vectors on flag manifolds: X in m whose orbit curve through
// the origin is geodesic for every invariant metric, i.e. [X, Lambda X]_m = 0
// for all Lambda.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagkit/flagspace.hpp"
#include "flagkit/metric.hpp"
#include "flagkit/rootsystem.hpp"

namespace flagkit {

/// How m_{alpha,beta} enters the bracket: the actual Weyl-basis constants, or
/// only their signs (every |m_{alpha,beta}| replaced by 1).
enum class ConstantMode { True, Unit };

/// X = sum over positive complementary alpha of c_alpha E_alpha - conj(c_alpha) E_-alpha.
/// S is Surd (exact) or std::complex<double>.
template <class S>
class BasicTangentVector {
 public:
  /// Sets the coefficient on E_alpha; for negative alpha this stores
  /// -conj(c) on -alpha. Zero coefficients are dropped.
  void set(const Root& alpha, const S& c);
  /// Coefficient on E_alpha for either sign of alpha.
  S coeff(const Root& alpha) const;
  /// Positive roots with a nonzero coefficient.
  const std::map<Root, S>& positive_coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  BasicTangentVector& operator+=(const BasicTangentVector& o);
  friend BasicTangentVector operator+(BasicTangentVector a, const BasicTangentVector& b) { return a += b; }
  /// Real scalar multiple.
  BasicTangentVector scaled(double t) const;

 private:
  std::map<Root, S> coeffs_;
};

using TangentVector = BasicTangentVector<Surd>;
using NumericTangentVector = BasicTangentVector<std::complex<double>>;

NumericTangentVector to_numeric(const TangentVector& x);

/// Components of X in module k.
template <class S>
BasicTangentVector<S> module_component(const FlagManifold& f, const BasicTangentVector<S>& x, size_t k);

/// Checks that every root in the support of X is complementary.
template <class S>
void require_in_m(const FlagManifold& f, const BasicTangentVector<S>& x);

/// [X, Y]_m: the coefficient on E_gamma (gamma in R_M) is
/// sum over alpha + beta = gamma of m_{alpha,beta} c_alpha d_beta.
template <class S>
BasicTangentVector<S> bracket_m(const FlagManifold& f, const WeylBasisData& w, const BasicTangentVector<S>& x,
                                const BasicTangentVector<S>& y, ConstantMode mode = ConstantMode::True);

struct EquigeodesicWitness {
  size_t module = 0;  // k with [X, X_k]_m != 0
  Root root;          // a gamma with nonzero coefficient on E_gamma
  std::string value;  // that coefficient, exact text or decimal
  std::complex<double> numeric;
};

struct EquigeodesicVerdict {
  bool is_equigeodesic = false;
  std::optional<EquigeodesicWitness> witness;
  /// "trivial" for X = 0; a-f for the G2 three-summand classification.
  std::string family;
};

inline constexpr double kDefaultZeroTol = 1e-12;

template <class S>
EquigeodesicVerdict is_equigeodesic(const FlagManifold& f, const WeylBasisData& w, const BasicTangentVector<S>& x,
                                    double tol = kDefaultZeroTol, ConstantMode mode = ConstantMode::True);

/// Full flags: u_alpha + u_beta consists of equigeodesic vectors iff neither
/// alpha + beta nor alpha - beta is a root. Throws for alpha = beta or
/// non-positive input.
bool is_equigeodesic_pair_fullflag(const RootSystem& rs, const Root& alpha, const Root& beta);

/// Pairwise criterion over a set of distinct positive roots.
bool is_equigeodesic_multiroot_fullflag(const RootSystem& rs, const std::vector<Root>& roots);

/// [X, Lambda X]_m = 0 for one fixed metric.
bool geodesic_vector_check(const FlagManifold& f, const WeylBasisData& w, const ExactMetric& metric,
                           const TangentVector& x);
bool geodesic_vector_check(const FlagManifold& f, const WeylBasisData& w, const NumericMetric& metric,
                           const NumericTangentVector& x, double tol = 1e-10);

// --- G2 with K generated by alpha_1 (three modules) ------------------------
//
// V = X + Y + Z with
//   X = a1 E_{a2} + a2 E_{a1+a2} + b1 E_{-a2} + b2 E_{-(a1+a2)}      in m_1
//   Y = c1 E_{a1+2a2} + c2 E_{-(a1+2a2)}                              in m_2
//   Z = d1 E_{a1+3a2} + d2 E_{2a1+3a2} + e1 E_{-(a1+3a2)} + e2 E_{-(2a1+3a2)}  in m_3
// and b_i = -conj(a_i), c2 = -conj(c1), e_i = -conj(d_i).

template <class S>
struct G2ThreeSummandCoords {
  S a1, a2, b1, b2, c1, c2, d1, d2;
};

template <class S>
G2ThreeSummandCoords<S> g2_three_summand_coords(const BasicTangentVector<S>& v);

/// The seven equations in the order
///   b2c1, c2d1, b1c1, c2d2, b1d1 + b2d2, a1c1, a2c1,
/// each weighted by its structure constant in ConstantMode::True. In
/// ConstantMode::Unit the constants are dropped entirely.
template <class S>
std::vector<S> g2_three_summand_system(const FlagManifold& f, const WeylBasisData& w,
                                       const BasicTangentVector<S>& v, ConstantMode mode);

/// Weights (w1, w2) of the relation w1 b1 d1 + w2 b2 d2 = 0.
std::pair<Surd, Surd> g2_family_e_weights(const WeylBasisData& w, ConstantMode mode);

/// Decides equigeodesicity from the system and labels the family:
/// a: V in m_1, b: V in m_2, c: V in m_3, d: V in u_{a1+a2} + u_{a1+3a2},
/// e: c1 = 0 and the weighted relation, f: not equigeodesic.
/// Throws std::invalid_argument unless f is G2 with parabolic {alpha_1}.
template <class S>
EquigeodesicVerdict classify_g2_three_summand(const FlagManifold& f, const WeylBasisData& w,
                                              const BasicTangentVector<S>& v,
                                              ConstantMode mode = ConstantMode::True, double tol = kDefaultZeroTol);

}  // namespace flagkit
