#pragma once

// Root systems of the simple Lie algebras in exact arithmetic, normalized by
// the Cartan-Killing form, together with a Weyl basis (E_alpha with
// <E_alpha, E_-alpha> = 1) and its real structure constants m_{alpha,beta}.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flagkit/rational.hpp"

namespace flagkit {

enum class Family { A, B, C, D, E, F, G };

struct LieType {
  Family family = Family::A;
  int rank = 1;

  /// Parses names such as "G2", "A3", "D8" (case-insensitive family letter).
  static LieType parse(std::string_view name);
  std::string name() const;
  /// Throws std::invalid_argument if the rank is not admissible for the family.
  void validate() const;

  friend bool operator==(const LieType&, const LieType&) = default;
};

/// Integer coordinates over the simple roots.
class Root {
 public:
  Root() = default;
  explicit Root(std::vector<int> coords) : coords_(std::move(coords)) {}
  Root(std::initializer_list<int> coords) : coords_(coords) {}

  const std::vector<int>& coords() const { return coords_; }
  size_t size() const { return coords_.size(); }
  int operator[](size_t i) const { return coords_[i]; }

  int height() const;
  bool is_zero() const;
  /// Nonzero with all coordinates non-negative.
  bool is_positive() const;

  Root operator-() const;
  friend Root operator+(const Root& a, const Root& b);
  friend Root operator-(const Root& a, const Root& b);
  friend Root operator*(int k, const Root& a);

  std::vector<Rational> to_rational() const;

  /// "1,2" form used on the command line and in JSON keys.
  std::string to_string() const;
  static Root parse(std::string_view text);

  friend auto operator<=>(const Root&, const Root&) = default;

 private:
  std::vector<int> coords_;
};

/// Deterministic total order on roots: height, then coordinates compared
/// lexicographically with larger leading coefficients first, so alpha_1
/// precedes alpha_2.
bool root_order_less(const Root& a, const Root& b);

class RootSystem {
 public:
  const LieType& lie_type() const { return type_; }
  int rank() const { return type_.rank; }
  /// Dimension of the (complex) Lie algebra.
  int dimension() const { return rank() + 2 * static_cast<int>(positive_.size()); }

  /// Positive roots in root_order_less order; simple roots come first.
  const std::vector<Root>& positive_roots() const { return positive_; }
  /// Positive roots followed by their negatives in the same order.
  std::vector<Root> roots() const;
  Root simple_root(size_t i) const;

  /// a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i). For G2 with alpha_1 long
  /// this is [[2,-1],[-3,2]].
  const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
  /// Killing-form Gram matrix of the simple roots.
  const std::vector<std::vector<Rational>>& killing_gram() const { return gram_; }
  /// Gram matrix rescaled so that the shortest roots have squared length 1
  /// (for G2: short 1, long 3).
  std::vector<std::vector<Rational>> unit_short_gram() const;
  /// Factor f with unit_short_gram = f * killing_gram.
  const Rational& unit_short_scale() const { return unit_short_scale_; }

  /// Killing inner product of two functionals given over the simple roots.
  /// Throws std::invalid_argument on dimension mismatch.
  Rational killing_inner(std::span<const Rational> phi, std::span<const Rational> psi) const;
  Rational killing_inner(const Root& a, const Root& b) const;

  bool is_root(std::span<const int> v) const;
  bool is_root(const Root& v) const { return is_root(std::span<const int>(v.coords())); }
  /// Index into positive_roots() of alpha or -alpha; nullopt if not a root.
  std::optional<size_t> positive_index(const Root& v) const;

  /// Maximal (p, q) with beta - p alpha, ..., beta + q alpha all roots.
  /// Throws std::invalid_argument if alpha = +-beta or either is not a root.
  std::pair<int, int> root_string(const Root& alpha, const Root& beta) const;

  /// N^2_{alpha,beta} = q(1+p)/2 (alpha,alpha) for the Killing-normalized
  /// Weyl basis; zero exactly when alpha + beta is not a root.
  Rational structure_constant_sq(const Root& alpha, const Root& beta) const;

  /// Simple reflection s_i applied to a functional over the simple roots.
  std::vector<Rational> reflect(size_t i, std::span<const Rational> v) const;
  Root reflect(size_t i, const Root& r) const;

 private:
  friend RootSystem build_root_system(LieType t);

  LieType type_;
  std::vector<Root> positive_;
  std::map<Root, size_t> positive_lookup_;
  std::vector<std::vector<int>> cartan_;
  std::vector<std::vector<Rational>> gram_;
  Rational unit_short_scale_{1};
};

/// Throws std::invalid_argument for an invalid LieType.
RootSystem build_root_system(LieType t);

/// Element of the complexified Lie algebra over the basis {h_lambda} + {E_alpha}.
/// The Cartan part is an element of h* over the simple roots, identified with h
/// through the Killing form, so that [E_alpha, E_-alpha] = alpha and
/// [lambda, E_beta] = (lambda, beta) E_beta.
struct LieElement {
  std::vector<Surd> cartan;
  std::map<Root, Surd> root_part;

  bool is_zero() const;
  LieElement& operator+=(const LieElement& o);
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator*(const Surd& s, const LieElement& a);
};

/// Signs and magnitudes of the structure constants of a Weyl basis.
class WeylBasisData {
 public:
  const RootSystem& root_system() const { return *rs_; }
  /// All roots: positives then negatives (matching RootSystem::roots()).
  const std::vector<Root>& roots() const { return roots_; }
  size_t root_index(const Root& r) const;

  /// N^2_{alpha,beta}; zero when alpha + beta is not a root.
  const Rational& n_squared(const Root& a, const Root& b) const;
  /// Sign of m_{alpha,beta}: +1, -1, or 0 when alpha + beta is not a root.
  int sign(const Root& a, const Root& b) const;
  /// m_{alpha,beta} = sign * sqrt(N^2), exact.
  const Surd& structure_constant(const Root& a, const Root& b) const;
  double structure_constant_value(const Root& a, const Root& b) const;

  LieElement basis_cartan(size_t i) const;
  LieElement basis_root(const Root& r) const;
  LieElement bracket(const LieElement& x, const LieElement& y) const;

 private:
  friend WeylBasisData assign_signs(const RootSystem& rs);

  std::shared_ptr<const RootSystem> rs_;
  std::vector<Root> roots_;
  std::map<Root, size_t> lookup_;
  std::vector<std::vector<Rational>> nsq_;
  std::vector<std::vector<std::int8_t>> sign_;
  std::vector<std::vector<Surd>> m_;
  std::vector<std::vector<double>> m_value_;
};

/// Fixes the signs of m_{alpha,beta}: +1 on every extraspecial pair, all other
/// signs forced by antisymmetry, m_{alpha,beta} = -m_{-alpha,-beta}, the cyclic
/// rule for alpha+beta+gamma = 0 and the four-root Jacobi relation.
WeylBasisData assign_signs(const RootSystem& rs);

}  // namespace flagkit
