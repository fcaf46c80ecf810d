#include "flagkit/flagspace.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flagkit {

// ---------------------------------------------------------------------------
// TRoot

bool TRoot::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Rational TRoot::level() const {
  Rational s = 0;
  for (const auto& q : coords_) s += q;
  return s;
}

bool TRoot::is_positive() const {
  return !is_zero() && std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return sgn(q) >= 0; });
}

TRoot TRoot::operator-() const {
  std::vector<Rational> c(coords_);
  for (auto& q : c) q = -q;
  return TRoot(std::move(c));
}

TRoot operator+(const TRoot& a, const TRoot& b) {
  if (a.size() != b.size()) throw std::invalid_argument("T-root dimension mismatch");
  std::vector<Rational> c(a.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] + b.coords_[i];
  return TRoot(std::move(c));
}

TRoot operator*(const Rational& k, const TRoot& a) {
  std::vector<Rational> c(a.coords_);
  for (auto& q : c) q *= k;
  return TRoot(std::move(c));
}

bool operator<(const TRoot& a, const TRoot& b) {
  const Rational la = a.level(), lb = b.level();
  if (la != lb) return la < lb;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a.coords_[i] != b.coords_[i]) return a.coords_[i] > b.coords_[i];
  return a.size() < b.size();
}

std::string TRoot::to_string() const {
  std::string out;
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += flagkit::to_string(coords_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FlagManifold

FlagManifold::FlagManifold(RootSystem rs, std::vector<int> parabolic) : rs_(std::move(rs)), parabolic_(std::move(parabolic)) {
  const int n = rs_.rank();
  std::sort(parabolic_.begin(), parabolic_.end());
  if (std::adjacent_find(parabolic_.begin(), parabolic_.end()) != parabolic_.end())
    throw std::invalid_argument("parabolic set has duplicate indices");
  for (int i : parabolic_)
    if (i < 0 || i >= n) throw std::invalid_argument("parabolic index out of range: " + std::to_string(i + 1));
  if (static_cast<int>(parabolic_.size()) == n)
    throw std::invalid_argument("parabolic set contains every simple root; G/K is a point, not a flag");
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(parabolic_.begin(), parabolic_.end(), j)) complement_.push_back(j);

  for (const Root& r : rs_.roots()) {
    const bool in_k = std::all_of(complement_.begin(), complement_.end(), [&](int j) { return r[j] == 0; });
    (in_k ? k_roots_ : m_roots_).push_back(r);
  }
  for (const Root& r : m_roots_)
    if (r.is_positive()) m_positive_.push_back(r);

  // Inverse Gram matrix of Sigma_K for the orthogonal projection.
  const size_t kdim = parabolic_.size();
  if (kdim > 0) {
    std::vector<std::vector<Rational>> a(kdim, std::vector<Rational>(2 * kdim, Rational{0}));
    for (size_t i = 0; i < kdim; ++i) {
      for (size_t j = 0; j < kdim; ++j) a[i][j] = rs_.killing_gram()[parabolic_[i]][parabolic_[j]];
      a[i][kdim + i] = 1;
    }
    for (size_t c = 0; c < kdim; ++c) {
      size_t piv = c;
      while (sgn(a[piv][c]) == 0) ++piv;
      std::swap(a[piv], a[c]);
      const Rational d = a[c][c];
      for (auto& x : a[c]) x /= d;
      for (size_t r = 0; r < kdim; ++r) {
        if (r == c || sgn(a[r][c]) == 0) continue;
        const Rational f = a[r][c];
        for (size_t k = 0; k < 2 * kdim; ++k) a[r][k] -= f * a[c][k];
      }
    }
    k_gram_inverse_.assign(kdim, std::vector<Rational>(kdim));
    for (size_t i = 0; i < kdim; ++i)
      for (size_t j = 0; j < kdim; ++j) k_gram_inverse_[i][j] = a[i][kdim + j];
  }

  std::vector<IsotropyModule> mods;
  for (const Root& r : m_positive_) {
    TRoot t = kappa(r);
    auto it = std::find_if(mods.begin(), mods.end(), [&](const IsotropyModule& m) { return m.t_root == t; });
    if (it == mods.end()) {
      mods.push_back(IsotropyModule{t, {r}});
    } else {
      it->roots.push_back(r);
    }
  }
  std::sort(mods.begin(), mods.end(), [](const IsotropyModule& a, const IsotropyModule& b) { return a.t_root < b.t_root; });
  modules_ = std::move(mods);
}

bool FlagManifold::is_k_root(const Root& r) const {
  return rs_.is_root(r) && std::all_of(complement_.begin(), complement_.end(), [&](int j) { return r[j] == 0; });
}

bool FlagManifold::is_m_root(const Root& r) const { return rs_.is_root(r) && !is_k_root(r); }

TRoot FlagManifold::kappa(const Root& alpha) const {
  if (!rs_.is_root(alpha)) throw std::invalid_argument("kappa: not a root: " + alpha.to_string());
  std::vector<Rational> c;
  c.reserve(complement_.size());
  for (int j : complement_) c.emplace_back(alpha[j]);
  return TRoot(std::move(c));
}

std::vector<Rational> FlagManifold::kappa_projection(const Root& alpha) const {
  if (!rs_.is_root(alpha)) throw std::invalid_argument("kappa_projection: not a root");
  std::vector<Rational> v = alpha.to_rational();
  const size_t kdim = parabolic_.size();
  if (kdim == 0) return v;
  // v - sum_{i,j} (v, a_i) (G^-1)_{ij} a_j
  std::vector<Rational> pairing(kdim);
  for (size_t i = 0; i < kdim; ++i)
    pairing[i] = rs_.killing_inner(alpha, rs_.simple_root(parabolic_[i]));
  for (size_t j = 0; j < kdim; ++j) {
    Rational c = 0;
    for (size_t i = 0; i < kdim; ++i) c += pairing[i] * k_gram_inverse_[i][j];
    v[parabolic_[j]] -= c;
  }
  return v;
}

std::optional<size_t> FlagManifold::module_of(const Root& alpha) const {
  if (!is_m_root(alpha)) return std::nullopt;
  TRoot t = kappa(alpha.is_positive() ? alpha : -alpha);
  return t_root_module(t);
}

int FlagManifold::t_sign(const Root& alpha) const {
  if (!is_m_root(alpha)) throw std::invalid_argument("t_sign: not a complementary root");
  return alpha.is_positive() ? 1 : -1;
}

std::vector<TRoot> FlagManifold::positive_t_roots() const {
  std::vector<TRoot> out;
  for (const auto& m : modules_) out.push_back(m.t_root);
  return out;
}

std::vector<TRoot> FlagManifold::t_roots() const {
  std::vector<TRoot> out = positive_t_roots();
  for (const auto& m : modules_) out.push_back(-m.t_root);
  return out;
}

std::optional<size_t> FlagManifold::t_root_module(const TRoot& t) const {
  for (size_t i = 0; i < modules_.size(); ++i)
    if (modules_[i].t_root == t || modules_[i].t_root == -t) return i;
  return std::nullopt;
}

std::vector<Root> FlagManifold::fibre(const TRoot& t) const {
  std::vector<Root> out;
  for (const auto& m : modules_) {
    if (m.t_root == t) return m.roots;
    if (m.t_root == -t) {
      for (const Root& r : m.roots) out.push_back(-r);
      return out;
    }
  }
  return out;
}

std::vector<int> FlagManifold::dims() const {
  std::vector<int> d;
  for (const auto& m : modules_) d.push_back(m.dim());
  return d;
}

std::string FlagManifold::name() const {
  std::string s = rs_.lie_type().name() + "[";
  for (size_t i = 0; i < parabolic_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parabolic_[i] + 1);
  }
  return s + "]";
}

FlagManifold build_flag(const RootSystem& rs, const std::vector<int>& parabolic) { return FlagManifold(rs, parabolic); }

std::vector<int> parse_parabolic(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    if (!std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw std::invalid_argument("invalid parabolic index '" + item + "'");
    const int v = std::stoi(item);
    if (v < 1) throw std::invalid_argument("parabolic indices are 1-based");
    out.push_back(v - 1);
  }
  return out;
}

}  // namespace flagkit
