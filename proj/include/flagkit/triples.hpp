#pragma once

// Zero-sum triples of T-roots, triple counts T(delta), the structure tensor
// C_{ij}^k between isotropy modules, and the shape of small T-root systems.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagkit/flagspace.hpp"
#include "flagkit/rootsystem.hpp"

namespace flagkit {

/// Multiset allows a T-root to appear twice (delta + delta + zeta = 0);
/// Distinct requires three different T-roots.
enum class TripleMode { Multiset, Distinct };

TripleMode parse_triple_mode(const std::string& s);
std::string to_string(TripleMode m);

struct TRootTriple {
  std::array<TRoot, 3> members;
  /// Roots alpha, beta, gamma with alpha + beta + gamma = 0 and
  /// kappa(alpha), kappa(beta), kappa(gamma) equal to the members.
  std::optional<std::array<Root, 3>> witness;

  bool contains(const TRoot& t) const;
};

/// Triples are unordered; each is listed once, with members in R_T order.
std::vector<TRootTriple> zero_sum_triples(const FlagManifold& f, TripleMode mode = TripleMode::Multiset);

/// Number of triples containing delta. Throws std::invalid_argument if delta
/// is not a T-root.
int triple_count(const FlagManifold& f, const TRoot& delta, TripleMode mode = TripleMode::Multiset);

struct IsolationReport {
  bool applicable = false;  // false when |R_T+| <= 1
  bool holds = false;       // every T-root lies in some multiset triple
  std::vector<TRoot> isolated;
};

IsolationReport verify_no_isolated_troot(const FlagManifold& f);

/// Symmetric tensor over module indices, stored on sorted index triples.
class CTensor {
 public:
  explicit CTensor(size_t modules = 0) : n_(modules) {}

  size_t modules() const { return n_; }
  const Rational& operator()(size_t i, size_t j, size_t k) const;
  void add(size_t i, size_t j, size_t k, const Rational& v);
  /// Nonzero entries keyed by i <= j <= k.
  const std::map<std::array<size_t, 3>, Rational>& entries() const { return entries_; }

 private:
  size_t n_;
  std::map<std::array<size_t, 3>, Rational> entries_;
};

/// C_{ij}^k = sum of (A_{XY}^Z)^2 over orthonormal bases of m_i, m_j, m_k,
/// reduced to 2 N^2 per root triple with alpha + beta + gamma = 0.
CTensor c_tensor(const FlagManifold& f, const WeylBasisData& w);

/// True when some choice of signs makes +-delta_i +- delta_j +- delta_k vanish.
bool signed_zero_sum(const FlagManifold& f, size_t i, size_t j, size_t k);

struct RtShape {
  enum class Kind {
    Double,      // {+-z, +-2z}
    SumClosed,   // {+-d, +-z, +-(d+z)}
    Quadruple,   // {+-d, +-2d, +-4d}
    Unrecognized,
  };
  Kind kind = Kind::Unrecognized;
  /// For SumClosed: all three T-roots are multiples of one (d, 2d, 3d).
  bool collinear = false;
  std::string description;
};

std::string to_string(RtShape::Kind k);

/// Throws std::invalid_argument unless f has 2 or 3 isotropy modules.
RtShape rt_shape(const FlagManifold& f);

}  // namespace flagkit
