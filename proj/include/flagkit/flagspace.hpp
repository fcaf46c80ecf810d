#pragma once

// Generalized flag manifolds G/K: K-roots, complementary roots, the
// restriction kappa of roots to the centre t of k, and the irreducible
// isotropy summands m_eta indexed by positive T-roots.

#include <optional>
#include <string>
#include <vector>

#include "flagkit/rational.hpp"
#include "flagkit/rootsystem.hpp"

namespace flagkit {

/// Restriction of a root to t, expressed over the basis
/// {kappa(alpha_j) : alpha_j simple, not in the parabolic set}.
class TRoot {
 public:
  TRoot() = default;
  explicit TRoot(std::vector<Rational> coords) : coords_(std::move(coords)) {}

  const std::vector<Rational>& coords() const { return coords_; }
  size_t size() const { return coords_.size(); }
  bool is_zero() const;
  /// Sum of coordinates (the T-root height).
  Rational level() const;
  bool is_positive() const;

  TRoot operator-() const;
  friend TRoot operator+(const TRoot& a, const TRoot& b);
  friend TRoot operator*(const Rational& k, const TRoot& a);
  friend bool operator==(const TRoot&, const TRoot&) = default;
  /// Level first, then coordinates with larger leading entries first.
  friend bool operator<(const TRoot& a, const TRoot& b);

  std::string to_string() const;

 private:
  std::vector<Rational> coords_;
};

struct IsotropyModule {
  TRoot t_root;             // positive representative
  std::vector<Root> roots;  // positive complementary roots in the fibre
  int dim() const { return 2 * static_cast<int>(roots.size()); }
};

class FlagManifold {
 public:
  /// `parabolic` holds 0-based simple-root indices spanning R_K. Throws
  /// std::invalid_argument for out-of-range or duplicate indices, or when all
  /// simple roots are chosen.
  FlagManifold(RootSystem rs, std::vector<int> parabolic);

  const RootSystem& root_system() const { return rs_; }
  const std::vector<int>& parabolic() const { return parabolic_; }
  bool is_full() const { return parabolic_.empty(); }
  int t_dim() const { return static_cast<int>(complement_.size()); }

  /// Roots of k (both signs), in root order.
  const std::vector<Root>& k_roots() const { return k_roots_; }
  /// Complementary roots of both signs: positives first.
  const std::vector<Root>& m_roots() const { return m_roots_; }
  const std::vector<Root>& m_positive() const { return m_positive_; }

  bool is_k_root(const Root& r) const;
  bool is_m_root(const Root& r) const;

  /// kappa(alpha); zero exactly for K-roots. Throws if alpha is not a root.
  TRoot kappa(const Root& alpha) const;
  /// Orthogonal projection (Killing form) of alpha onto span(Sigma_K)^perp,
  /// over the simple roots.
  std::vector<Rational> kappa_projection(const Root& alpha) const;

  const std::vector<IsotropyModule>& modules() const { return modules_; }
  size_t module_count() const { return modules_.size(); }
  /// Module whose fibre contains alpha or -alpha.
  std::optional<size_t> module_of(const Root& alpha) const;
  /// +1 if kappa(alpha) is the positive representative of its module, -1 otherwise.
  int t_sign(const Root& alpha) const;

  std::vector<TRoot> positive_t_roots() const;
  /// R_T: positive T-roots followed by their negatives.
  std::vector<TRoot> t_roots() const;
  /// Index of a T-root of either sign among the modules, or nullopt.
  std::optional<size_t> t_root_module(const TRoot& t) const;
  /// Complementary roots (either sign) with kappa(alpha) = t.
  std::vector<Root> fibre(const TRoot& t) const;

  std::vector<int> dims() const;
  std::string name() const;

 private:
  RootSystem rs_;
  std::vector<int> parabolic_;
  std::vector<int> complement_;
  std::vector<Root> k_roots_;
  std::vector<Root> m_roots_;
  std::vector<Root> m_positive_;
  std::vector<IsotropyModule> modules_;
  std::vector<std::vector<Rational>> k_gram_inverse_;
};

/// Builds the flag from a root system and a parabolic index set (0-based).
FlagManifold build_flag(const RootSystem& rs, const std::vector<int>& parabolic);

/// Parses "1,2" style 1-based simple-root indices; empty means the full flag.
std::vector<int> parse_parabolic(const std::string& text);

}  // namespace flagkit
