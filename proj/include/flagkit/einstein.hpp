#pragma once

// Scalar curvature, Ricci components and the Einstein system for invariant
// metrics, a multistart Newton solver, invariant complex structures and
// Kahler-Einstein metrics.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagkit/flagspace.hpp"
#include "flagkit/metric.hpp"
#include "flagkit/rootsystem.hpp"
#include "flagkit/triples.hpp"

namespace flagkit {

/// Sum of c * x_0^e_0 ... x_{n-1}^e_{n-1} with integer (possibly negative)
/// exponents and rational coefficients.
class LaurentPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit LaurentPolynomial(size_t variables = 0) : n_(variables) {}

  size_t variables() const { return n_; }
  void add_term(const Rational& c, const Exponents& e);
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  LaurentPolynomial derivative(size_t var) const;
  /// Throws std::invalid_argument on a zero variable under a negative power.
  Rational evaluate(const std::vector<Rational>& x) const;
  double evaluate(const std::vector<double>& x) const;

 private:
  size_t n_;
  std::map<Exponents, Rational> terms_;
};

/// S = 1/2 sum D_i/x_i - 1/4 sum_{i,j,k} C_{ij}^k x_k/(x_i x_j).
LaurentPolynomial scalar_curvature_polynomial(const FlagManifold& f, const CTensor& c);

/// r_k = 1/(2x_k) + 1/(4D_k) sum C_{ij}^k x_k/(x_i x_j) - 1/(2D_k) sum C_{ki}^j x_j/(x_k x_i).
std::vector<LaurentPolynomial> ricci_polynomials(const FlagManifold& f, const CTensor& c);

Rational scalar_curvature(const FlagManifold& f, const CTensor& c, const ExactMetric& m);
double scalar_curvature(const FlagManifold& f, const CTensor& c, const NumericMetric& m);

std::vector<Rational> ricci_components(const FlagManifold& f, const CTensor& c, const ExactMetric& m);
std::vector<double> ricci_components(const FlagManifold& f, const CTensor& c, const NumericMetric& m);

/// dS/dx_l - xi D_l V/x_l for each module, then V - 1, where V = prod x_i^D_i.
std::vector<Rational> einstein_residual(const FlagManifold& f, const CTensor& c, const ExactMetric& m,
                                        const Rational& xi);
std::vector<double> einstein_residual(const FlagManifold& f, const CTensor& c, const NumericMetric& m, double xi);

/// The multiplier minimizing the max norm of einstein_residual, and that norm.
struct ResidualFit {
  double xi = 0;
  double max_residual = 0;
};
ResidualFit best_einstein_residual(const FlagManifold& f, const CTensor& c, const NumericMetric& m);

/// Rescales m so that prod x_i^D_i = 1.
NumericMetric volume_normalized(const FlagManifold& f, const NumericMetric& m);

/// Components r_alpha with their positive root, in root order. Requires a
/// full flag with one parameter per positive root.
using RootComponents = std::vector<std::pair<Root, Rational>>;
RootComponents ricci_components_fullflag(const RootSystem& rs, const WeylBasisData& w, const ExactMetric& m);
RootComponents ricci_components_fullflag(const FlagManifold& f, const WeylBasisData& w, const ExactMetric& m);

/// One sign per positive T-root in module order; -delta carries the opposite sign.
struct ComplexStructure {
  std::vector<int> signs;

  ComplexStructure conjugate() const;
  bool operator==(const ComplexStructure&) const = default;
  std::string to_string() const;
};

/// All 2^s sign vectors; bit j of the index set means module j has sign -1.
/// Throws std::length_error above 24 modules.
std::vector<ComplexStructure> enumerate_iacs(const FlagManifold& f);

/// epsilon of a complementary root under J.
int root_sign(const FlagManifold& f, const ComplexStructure& j, const Root& a);

/// Complementary roots with positive sign under J, in root order.
std::vector<Root> j_positive_roots(const FlagManifold& f, const ComplexStructure& j);

/// For alpha, beta, alpha+beta complementary: equal signs on alpha and beta
/// force the same sign on alpha+beta.
bool is_integrable(const FlagManifold& f, const ComplexStructure& j);

struct KahlerEinsteinMetric {
  ExactMetric raw;     // (delta_J, alpha) with short roots of square length 1
  ExactMetric scaled;  // smallest positive integer multiple
};

/// Throws std::invalid_argument when J is not integrable or has the wrong size.
KahlerEinsteinMetric kahler_einstein_metric(const FlagManifold& f, const ComplexStructure& j);

/// x_{alpha+beta} = x_alpha + x_beta for J-positive alpha, beta with
/// alpha+beta a root. Throws std::invalid_argument unless f is a full flag.
bool kahler_criterion(const FlagManifold& f, const ExactMetric& m, const ComplexStructure& j);

/// Smallest positive integer vector proportional to m.
ExactMetric integer_rescaled(const ExactMetric& m);

struct DimensionPair {
  size_t i = 0, j = 0;
  TRoot delta_i, delta_j;
  int dim_i = 0, dim_j = 0;
  bool excluded() const { return dim_i != dim_j; }
};

/// Pairs i < j with signed representatives delta_i, delta_j such that
/// -(delta_i + delta_j) is a T-root and T(delta_i) = T(delta_j) = 1.
std::vector<DimensionPair> dimension_obstruction(const FlagManifold& f, TripleMode mode = TripleMode::Multiset);

struct EinsteinSolution {
  NumericMetric metric;  // unit volume
  double einstein_constant = 0;
  double residual = 0;
  std::optional<ComplexStructure> kahler_for;
};

struct SolveOptions {
  int max_iterations = 100;
  unsigned threads = 0;  // 0 uses the hardware concurrency
  double dedupe_tol = 1e-8;
};

/// Damped Newton on r_i - r_s in volume-normalized log coordinates from each
/// start. Results keep first-found order and do not depend on scheduling.
std::vector<EinsteinSolution> solve_einstein(const FlagManifold& f, const CTensor& c,
                                             const std::vector<NumericMetric>& starts, double tol,
                                             const SolveOptions& opts = {});

/// Log-uniform starts in [0.1, 10].
std::vector<NumericMetric> random_starts(size_t count, size_t modules, std::uint64_t seed);

}  // namespace flagkit
