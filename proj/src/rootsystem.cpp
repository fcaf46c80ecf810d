#include "flagkit/rootsystem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace flagkit {

namespace {

constexpr int kMaxClassicalRank = 16;

using Gram = std::vector<std::vector<Rational>>;

Gram zero_gram(int n) { return Gram(n, std::vector<Rational>(n, Rational{0})); }

void link(Gram& g, int i, int j, Rational v) {
  g[i][j] = v;
  g[j][i] = v;
}

// Symmetrized Cartan data in an arbitrary scale; Bourbaki numbering except for
// G2, where alpha_1 is the long root.
Gram base_gram(const LieType& t) {
  const int n = t.rank;
  Gram g = zero_gram(n);
  switch (t.family) {
    case Family::A:
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      for (int i = 0; i + 1 < n; ++i) link(g, i, i + 1, -1);
      break;
    case Family::B:
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      g[n - 1][n - 1] = 1;
      for (int i = 0; i + 1 < n; ++i) link(g, i, i + 1, -1);
      break;
    case Family::C:
      for (int i = 0; i < n; ++i) g[i][i] = 1;
      g[n - 1][n - 1] = 2;
      for (int i = 0; i + 2 < n; ++i) link(g, i, i + 1, Rational(-1, 2));
      link(g, n - 2, n - 1, -1);
      break;
    case Family::D:
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      for (int i = 0; i + 2 < n; ++i) link(g, i, i + 1, -1);
      link(g, n - 3, n - 1, -1);
      break;
    case Family::E:
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      link(g, 0, 2, -1);
      link(g, 1, 3, -1);
      for (int i = 2; i + 1 < n; ++i) link(g, i, i + 1, -1);
      break;
    case Family::F:
      g[0][0] = 2;
      g[1][1] = 2;
      g[2][2] = 1;
      g[3][3] = 1;
      link(g, 0, 1, -1);
      link(g, 1, 2, -1);
      link(g, 2, 3, Rational(-1, 2));
      break;
    case Family::G:
      g[0][0] = 3;
      g[1][1] = 1;
      link(g, 0, 1, Rational(-3, 2));
      break;
  }
  return g;
}

Rational inner(const Gram& g, std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) s += a[i] * g[i][j] * b[j];
  }
  return s;
}

Rational inner(const Gram& g, const Root& a, const Root& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) s += a[i] * g[i][j] * b[j];
  }
  return s;
}

Root unit_root(int n, int i) {
  std::vector<int> c(n, 0);
  c[i] = 1;
  return Root(std::move(c));
}

}  // namespace

// ---------------------------------------------------------------------------
// LieType

LieType LieType::parse(std::string_view name) {
  std::string s(name);
  if (s.size() < 2) throw std::invalid_argument("invalid Lie type '" + s + "'");
  LieType t;
  switch (std::toupper(static_cast<unsigned char>(s[0]))) {
    case 'A': t.family = Family::A; break;
    case 'B': t.family = Family::B; break;
    case 'C': t.family = Family::C; break;
    case 'D': t.family = Family::D; break;
    case 'E': t.family = Family::E; break;
    case 'F': t.family = Family::F; break;
    case 'G': t.family = Family::G; break;
    default: throw std::invalid_argument("invalid Lie family in '" + s + "'");
  }
  std::string digits = s.substr(1);
  if (digits.empty() || digits.size() > 3 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("invalid rank in Lie type '" + s + "'");
  t.rank = std::stoi(digits);
  t.validate();
  return t;
}

std::string LieType::name() const {
  static const char letters[] = {'A', 'B', 'C', 'D', 'E', 'F', 'G'};
  return std::string(1, letters[static_cast<int>(family)]) + std::to_string(rank);
}

void LieType::validate() const {
  bool ok = false;
  switch (family) {
    case Family::A: ok = rank >= 1 && rank <= kMaxClassicalRank; break;
    case Family::B: ok = rank >= 2 && rank <= kMaxClassicalRank; break;
    case Family::C: ok = rank >= 3 && rank <= kMaxClassicalRank; break;
    case Family::D: ok = rank >= 4 && rank <= kMaxClassicalRank; break;
    case Family::E: ok = rank >= 6 && rank <= 8; break;
    case Family::F: ok = rank == 4; break;
    case Family::G: ok = rank == 2; break;
  }
  if (!ok) throw std::invalid_argument("invalid rank " + std::to_string(rank) + " for family " + name().substr(0, 1));
}

// ---------------------------------------------------------------------------
// Root

int Root::height() const {
  int h = 0;
  for (int c : coords_) h += c;
  return h;
}

bool Root::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
}

bool Root::is_positive() const {
  return !is_zero() && std::all_of(coords_.begin(), coords_.end(), [](int c) { return c >= 0; });
}

Root Root::operator-() const {
  std::vector<int> c(coords_);
  for (int& x : c) x = -x;
  return Root(std::move(c));
}

Root operator+(const Root& a, const Root& b) {
  if (a.size() != b.size()) throw std::invalid_argument("root dimension mismatch");
  std::vector<int> c(a.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return Root(std::move(c));
}

Root operator-(const Root& a, const Root& b) { return a + (-b); }

Root operator*(int k, const Root& a) {
  std::vector<int> c(a.coords());
  for (int& x : c) x *= k;
  return Root(std::move(c));
}

std::vector<Rational> Root::to_rational() const {
  std::vector<Rational> out;
  out.reserve(coords_.size());
  for (int c : coords_) out.emplace_back(c);
  return out;
}

std::string Root::to_string() const {
  std::string out;
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords_[i]);
  }
  return out;
}

Root Root::parse(std::string_view text) {
  std::vector<int> c;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch); }),
               item.end());
    if (item.empty()) throw std::invalid_argument("empty coordinate in root '" + std::string(text) + "'");
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid coordinate '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("invalid coordinate '" + item + "'");
    c.push_back(v);
  }
  if (c.empty()) throw std::invalid_argument("empty root");
  return Root(std::move(c));
}

bool root_order_less(const Root& a, const Root& b) {
  const bool pa = a.height() > 0, pb = b.height() > 0;
  if (pa != pb) return pa;  // positives before negatives
  const int ha = std::abs(a.height()), hb = std::abs(b.height());
  if (ha != hb) return ha < hb;
  for (size_t i = 0; i < a.size(); ++i) {
    const int x = std::abs(a[i]), y = std::abs(b[i]);
    if (x != y) return x > y;
  }
  return false;
}

// ---------------------------------------------------------------------------
// RootSystem

std::vector<Root> RootSystem::roots() const {
  std::vector<Root> out(positive_);
  for (const Root& r : positive_) out.push_back(-r);
  return out;
}

Root RootSystem::simple_root(size_t i) const {
  if (i >= static_cast<size_t>(rank())) throw std::out_of_range("simple root index");
  return unit_root(rank(), static_cast<int>(i));
}

std::vector<std::vector<Rational>> RootSystem::unit_short_gram() const {
  Gram g = gram_;
  for (auto& row : g)
    for (auto& x : row) x *= unit_short_scale_;
  return g;
}

Rational RootSystem::killing_inner(std::span<const Rational> phi, std::span<const Rational> psi) const {
  if (phi.size() != static_cast<size_t>(rank()) || psi.size() != static_cast<size_t>(rank()))
    throw std::invalid_argument("killing_inner: dimension mismatch");
  return inner(gram_, phi, psi);
}

Rational RootSystem::killing_inner(const Root& a, const Root& b) const {
  if (a.size() != static_cast<size_t>(rank()) || b.size() != static_cast<size_t>(rank()))
    throw std::invalid_argument("killing_inner: dimension mismatch");
  return inner(gram_, a, b);
}

bool RootSystem::is_root(std::span<const int> v) const {
  if (v.size() != static_cast<size_t>(rank())) throw std::invalid_argument("is_root: dimension mismatch");
  Root r(std::vector<int>(v.begin(), v.end()));
  if (r.is_zero()) return false;
  if (positive_lookup_.count(r)) return true;
  return positive_lookup_.count(-r) > 0;
}

std::optional<size_t> RootSystem::positive_index(const Root& v) const {
  if (v.size() != static_cast<size_t>(rank()) || v.is_zero()) return std::nullopt;
  if (auto it = positive_lookup_.find(v); it != positive_lookup_.end()) return it->second;
  if (auto it = positive_lookup_.find(-v); it != positive_lookup_.end()) return it->second;
  return std::nullopt;
}

std::pair<int, int> RootSystem::root_string(const Root& alpha, const Root& beta) const {
  if (!is_root(alpha) || !is_root(beta)) throw std::invalid_argument("root_string: argument is not a root");
  if (alpha == beta || alpha == -beta) throw std::invalid_argument("root_string: alpha = +-beta");
  int p = 0, q = 0;
  while (is_root(beta - (p + 1) * alpha)) ++p;
  while (is_root(beta + (q + 1) * alpha)) ++q;
  return {p, q};
}

Rational RootSystem::structure_constant_sq(const Root& alpha, const Root& beta) const {
  if (!is_root(alpha) || !is_root(beta))
    throw std::invalid_argument("structure_constant_sq: argument is not a root");
  if (!is_root(alpha + beta)) return Rational{0};
  auto [p, q] = root_string(alpha, beta);
  return Rational(q * (1 + p)) / 2 * killing_inner(alpha, alpha);
}

std::vector<Rational> RootSystem::reflect(size_t i, std::span<const Rational> v) const {
  const Root ai = simple_root(i);
  std::vector<Rational> a = ai.to_rational();
  Rational coeff = 2 * killing_inner(v, a) / gram_[i][i];
  std::vector<Rational> out(v.begin(), v.end());
  out[i] -= coeff;
  return out;
}

Root RootSystem::reflect(size_t i, const Root& r) const {
  auto v = reflect(i, r.to_rational());
  std::vector<int> c;
  for (auto& x : v) c.push_back(static_cast<int>(x.get_num().get_si()));
  return Root(std::move(c));
}

RootSystem build_root_system(LieType t) {
  t.validate();
  const int n = t.rank;
  const Gram g0 = base_gram(t);

  RootSystem rs;
  rs.type_ = t;
  rs.cartan_.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational a = 2 * g0[i][j] / g0[i][i];
      rs.cartan_[i][j] = static_cast<int>(a.get_num().get_si());
    }

  // Positive roots by height: beta + alpha_i is a root iff q > 0 in the
  // alpha_i-string through beta, q = p - <beta, alpha_i^vee>.
  std::vector<Root> all;
  std::map<Root, size_t> seen;
  std::vector<Root> layer;
  for (int i = 0; i < n; ++i) layer.push_back(unit_root(n, i));
  for (const Root& r : layer) seen.emplace(r, 0);
  while (!layer.empty()) {
    std::vector<Root> next;
    for (const Root& beta : layer) {
      all.push_back(beta);
      for (int i = 0; i < n; ++i) {
        const Root ai = unit_root(n, i);
        if (beta == ai) continue;
        int p = 0;
        while (seen.count(beta - (p + 1) * ai)) ++p;
        int pairing = 0;
        for (int j = 0; j < n; ++j) pairing += beta[j] * rs.cartan_[i][j];
        const int q = p - pairing;
        if (q > 0) {
          Root up = beta + ai;
          if (!seen.count(up)) {
            seen.emplace(up, 0);
            next.push_back(up);
          }
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(all.begin(), all.end(), root_order_less);
  rs.positive_ = all;
  for (size_t i = 0; i < all.size(); ++i) rs.positive_lookup_.emplace(all[i], i);

  // Killing normalization: (lambda, mu) = sum_{beta in R} (lambda, beta)(mu, beta).
  const Root a0 = unit_root(n, 0);
  Rational sum = 0;
  for (const Root& b : all) {
    Rational x = inner(g0, a0, b);
    sum += 2 * x * x;
  }
  const Rational scale = sum / g0[0][0];
  rs.gram_ = g0;
  for (auto& row : rs.gram_)
    for (auto& x : row) x /= scale;

  Rational shortest = rs.gram_[0][0];
  for (int i = 0; i < n; ++i) shortest = std::min(shortest, rs.gram_[i][i]);
  rs.unit_short_scale_ = 1 / shortest;
  return rs;
}

// ---------------------------------------------------------------------------
// LieElement

bool LieElement::is_zero() const {
  for (const Surd& s : cartan)
    if (!s.is_zero()) return false;
  for (const auto& [r, s] : root_part)
    if (!s.is_zero()) return false;
  return true;
}

LieElement& LieElement::operator+=(const LieElement& o) {
  if (cartan.size() < o.cartan.size()) cartan.resize(o.cartan.size());
  for (size_t i = 0; i < o.cartan.size(); ++i) cartan[i] += o.cartan[i];
  for (const auto& [r, s] : o.root_part) {
    Surd& t = root_part[r];
    t += s;
    if (t.is_zero()) root_part.erase(r);
  }
  return *this;
}

LieElement operator*(const Surd& s, const LieElement& a) {
  LieElement out;
  for (const Surd& c : a.cartan) out.cartan.push_back(s * c);
  for (const auto& [r, c] : a.root_part) {
    Surd v = s * c;
    if (!v.is_zero()) out.root_part.emplace(r, std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// WeylBasisData

size_t WeylBasisData::root_index(const Root& r) const {
  auto it = lookup_.find(r);
  if (it == lookup_.end()) throw std::invalid_argument("not a root: " + r.to_string());
  return it->second;
}

const Rational& WeylBasisData::n_squared(const Root& a, const Root& b) const {
  return nsq_[root_index(a)][root_index(b)];
}

int WeylBasisData::sign(const Root& a, const Root& b) const { return sign_[root_index(a)][root_index(b)]; }

const Surd& WeylBasisData::structure_constant(const Root& a, const Root& b) const {
  return m_[root_index(a)][root_index(b)];
}

double WeylBasisData::structure_constant_value(const Root& a, const Root& b) const {
  return m_value_[root_index(a)][root_index(b)];
}

LieElement WeylBasisData::basis_cartan(size_t i) const {
  LieElement e;
  e.cartan.assign(rs_->rank(), Surd{});
  e.cartan.at(i) = Surd(Rational{1});
  return e;
}

LieElement WeylBasisData::basis_root(const Root& r) const {
  root_index(r);
  LieElement e;
  e.cartan.assign(rs_->rank(), Surd{});
  e.root_part.emplace(r, Surd(Rational{1}));
  return e;
}

LieElement WeylBasisData::bracket(const LieElement& x, const LieElement& y) const {
  const int n = rs_->rank();
  LieElement out;
  out.cartan.assign(n, Surd{});
  auto pairing = [&](const std::vector<Surd>& h, const Root& beta) {
    // (h, beta) = sum_i h_i (alpha_i, beta)
    Surd s;
    for (int i = 0; i < n && i < static_cast<int>(h.size()); ++i) {
      if (h[i].is_zero()) continue;
      s += h[i] * Surd(rs_->killing_inner(unit_root(n, i), beta));
    }
    return s;
  };
  auto add_root = [&](const Root& r, const Surd& c) {
    if (c.is_zero()) return;
    Surd& t = out.root_part[r];
    t += c;
    if (t.is_zero()) out.root_part.erase(r);
  };

  for (const auto& [b, cb] : y.root_part) add_root(b, cb * pairing(x.cartan, b));
  for (const auto& [a, ca] : x.root_part) add_root(a, -(ca * pairing(y.cartan, a)));
  for (const auto& [a, ca] : x.root_part) {
    for (const auto& [b, cb] : y.root_part) {
      const Root s = a + b;
      if (s.is_zero()) {
        Surd c = ca * cb;
        for (int i = 0; i < n; ++i)
          if (a[i] != 0) out.cartan[i] += Surd(Rational(a[i])) * c;
        continue;
      }
      if (!rs_->is_root(s)) continue;
      add_root(s, structure_constant(a, b) * ca * cb);
    }
  }
  return out;
}

WeylBasisData assign_signs(const RootSystem& rs) {
  WeylBasisData w;
  w.rs_ = std::make_shared<const RootSystem>(rs);
  w.roots_ = rs.roots();
  const size_t npos = rs.positive_roots().size();
  const size_t total = w.roots_.size();
  for (size_t i = 0; i < total; ++i) w.lookup_.emplace(w.roots_[i], i);

  w.nsq_.assign(total, std::vector<Rational>(total, Rational{0}));
  for (size_t i = 0; i < total; ++i)
    for (size_t j = 0; j < total; ++j) w.nsq_[i][j] = rs.structure_constant_sq(w.roots_[i], w.roots_[j]);

  auto neg = [&](size_t i) { return i < npos ? i + npos : i - npos; };
  auto positive = [&](size_t i) { return i < npos; };
  auto sum_index = [&](size_t i, size_t j) -> std::optional<size_t> {
    const Root s = w.roots_[i] + w.roots_[j];
    if (auto it = w.lookup_.find(s); it != w.lookup_.end()) return it->second;
    return std::nullopt;
  };

  // Extraspecial pair of each non-simple positive root: the order-minimal
  // first summand.
  std::vector<std::optional<std::pair<size_t, size_t>>> extraspecial(npos);
  for (size_t k = 0; k < npos; ++k) {
    for (size_t a = 0; a < npos; ++a) {
      const Root rest = w.roots_[k] - w.roots_[a];
      auto it = w.lookup_.find(rest);
      if (it != w.lookup_.end() && positive(it->second)) {
        extraspecial[k] = std::make_pair(a, it->second);
        break;
      }
    }
  }

  w.sign_.assign(total, std::vector<std::int8_t>(total, 0));
  std::vector<std::vector<bool>> known(total, std::vector<bool>(total, false));

  std::function<int(size_t, size_t)> sign_of;
  auto value = [&](size_t i, size_t j) -> double {
    if (sgn(w.nsq_[i][j]) == 0) return 0.0;
    return sign_of(i, j) * std::sqrt(w.nsq_[i][j].get_d());
  };

  sign_of = [&](size_t i, size_t j) -> int {
    if (known[i][j]) return w.sign_[i][j];
    int s = 0;
    auto k = sum_index(i, j);
    if (!k) {
      s = 0;
    } else if (positive(i) && positive(j)) {
      if (j < i) {
        s = -sign_of(j, i);
      } else {
        const auto& ex = extraspecial[*k];
        if (ex && ex->first == i && ex->second == j) {
          s = 1;
        } else {
          // m_{a',b'} m_{-a,-b} + m_{b',-a} m_{a',-b} + m_{-a,a'} m_{b',-b} = 0
          const size_t ap = ex->first, bp = ex->second;
          const double rhs = -(value(bp, neg(i)) * value(ap, neg(j)) + value(neg(i), ap) * value(bp, neg(j)));
          const double m_neg = rhs / value(ap, bp);
          const double expected = std::sqrt(w.nsq_[neg(i)][neg(j)].get_d());
          if (std::abs(std::abs(m_neg) - expected) > 1e-9 * (1.0 + expected))
            throw std::logic_error("assign_signs: inconsistent four-root relation");
          s = m_neg > 0 ? -1 : 1;
        }
      }
    } else if (!positive(i) && !positive(j)) {
      s = -sign_of(neg(i), neg(j));
    } else {
      // m_{x,y} = m_{y,w} = m_{w,x} with w = -(x+y); use the same-sign pair.
      const size_t wi = neg(*k);
      s = (positive(j) == positive(wi)) ? sign_of(j, wi) : sign_of(wi, i);
    }
    known[i][j] = true;
    w.sign_[i][j] = static_cast<std::int8_t>(s);
    return s;
  };

  w.m_.assign(total, std::vector<Surd>(total));
  w.m_value_.assign(total, std::vector<double>(total, 0.0));
  for (size_t i = 0; i < total; ++i) {
    for (size_t j = 0; j < total; ++j) {
      const int s = sign_of(i, j);
      if (s == 0) continue;
      Surd mag = Surd::sqrt(w.nsq_[i][j]);
      w.m_[i][j] = s > 0 ? mag : -mag;
      w.m_value_[i][j] = s * std::sqrt(w.nsq_[i][j].get_d());
    }
  }
  return w;
}

}  // namespace flagkit
