#include "flagkit/triples.hpp"

#include <algorithm>
#include <stdexcept>

namespace flagkit {

TripleMode parse_triple_mode(const std::string& s) {
  if (s == "multiset") return TripleMode::Multiset;
  if (s == "distinct") return TripleMode::Distinct;
  throw std::invalid_argument("triple mode must be 'multiset' or 'distinct', got '" + s + "'");
}

std::string to_string(TripleMode m) { return m == TripleMode::Multiset ? "multiset" : "distinct"; }

bool TRootTriple::contains(const TRoot& t) const {
  return std::find(members.begin(), members.end(), t) != members.end();
}

namespace {

std::optional<std::array<Root, 3>> lift(const FlagManifold& f, const std::array<TRoot, 3>& t) {
  const auto fa = f.fibre(t[0]), fb = f.fibre(t[1]), fc = f.fibre(t[2]);
  for (const Root& a : fa)
    for (const Root& b : fb) {
      const Root c = -(a + b);
      if (std::find(fc.begin(), fc.end(), c) != fc.end()) return std::array<Root, 3>{a, b, c};
    }
  return std::nullopt;
}

}  // namespace

std::vector<TRootTriple> zero_sum_triples(const FlagManifold& f, TripleMode mode) {
  const auto rt = f.t_roots();
  const size_t n = rt.size();
  std::vector<TRootTriple> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      for (size_t k = j; k < n; ++k) {
        if (mode == TripleMode::Distinct && (i == j || j == k)) continue;
        if (!(rt[i] + rt[j] + rt[k]).is_zero()) continue;
        TRootTriple t{{rt[i], rt[j], rt[k]}, std::nullopt};
        t.witness = lift(f, t.members);
        out.push_back(std::move(t));
      }
  return out;
}

int triple_count(const FlagManifold& f, const TRoot& delta, TripleMode mode) {
  if (!f.t_root_module(delta)) throw std::invalid_argument("not a T-root: (" + delta.to_string() + ")");
  int count = 0;
  for (const auto& t : zero_sum_triples(f, mode))
    if (t.contains(delta)) ++count;
  return count;
}

IsolationReport verify_no_isolated_troot(const FlagManifold& f) {
  IsolationReport r;
  r.applicable = f.module_count() > 1;
  const auto triples = zero_sum_triples(f, TripleMode::Multiset);
  for (const TRoot& t : f.t_roots()) {
    const bool found = std::any_of(triples.begin(), triples.end(), [&](const TRootTriple& x) { return x.contains(t); });
    if (!found) r.isolated.push_back(t);
  }
  r.holds = r.applicable && r.isolated.empty();
  return r;
}

// ---------------------------------------------------------------------------
// CTensor

namespace {
std::array<size_t, 3> sorted_key(size_t i, size_t j, size_t k) {
  std::array<size_t, 3> key{i, j, k};
  std::sort(key.begin(), key.end());
  return key;
}
const Rational kZero{0};
}  // namespace

const Rational& CTensor::operator()(size_t i, size_t j, size_t k) const {
  if (i >= n_ || j >= n_ || k >= n_) throw std::out_of_range("C tensor index out of range");
  auto it = entries_.find(sorted_key(i, j, k));
  return it == entries_.end() ? kZero : it->second;
}

void CTensor::add(size_t i, size_t j, size_t k, const Rational& v) {
  if (sgn(v) == 0) return;
  entries_[sorted_key(i, j, k)] += v;
}

CTensor c_tensor(const FlagManifold& f, const WeylBasisData& w) {
  const RootSystem& rs = f.root_system();
  const auto& pos = f.m_positive();
  std::vector<size_t> module(pos.size());
  for (size_t a = 0; a < pos.size(); ++a) module[a] = *f.module_of(pos[a]);

  // Each triple of positive complementary roots with alpha + beta = gamma
  // contributes 2 N^2_{alpha,beta} per assignment to modules.
  CTensor c(f.module_count());
  for (size_t a = 0; a < pos.size(); ++a)
    for (size_t b = a + 1; b < pos.size(); ++b) {
      const Root s = pos[a] + pos[b];
      if (!rs.is_root(s) || !f.is_m_root(s)) continue;
      const size_t g = std::find(pos.begin(), pos.end(), s) - pos.begin();
      // C_{ij}^k sums over alpha in m_i, beta in m_j, gamma in m_k, so a triple
      // with two roots in one module is met by two assignments.
      const size_t i = module[a], j = module[b], k = module[g];
      const int assignments = (i == j && j == k) ? 6 : (i == j || j == k || i == k) ? 2 : 1;
      c.add(i, j, k, Rational(2 * assignments) * w.n_squared(pos[a], pos[b]));
    }
  return c;
}

bool signed_zero_sum(const FlagManifold& f, size_t i, size_t j, size_t k) {
  const auto& m = f.modules();
  const TRoot &x = m.at(i).t_root, &y = m.at(j).t_root, &z = m.at(k).t_root;
  for (int sy : {1, -1})
    for (int sz : {1, -1})
      if ((x + Rational(sy) * y + Rational(sz) * z).is_zero()) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Shapes

std::string to_string(RtShape::Kind k) {
  switch (k) {
    case RtShape::Kind::Double: return "{z,2z}";
    case RtShape::Kind::SumClosed: return "{d,z,d+z}";
    case RtShape::Kind::Quadruple: return "{d,2d,4d}";
    case RtShape::Kind::Unrecognized: break;
  }
  return "unrecognized";
}

RtShape rt_shape(const FlagManifold& f) {
  const auto t = f.positive_t_roots();
  if (t.size() != 2 && t.size() != 3)
    throw std::invalid_argument("shape is defined for 2 or 3 isotropy modules, flag has " + std::to_string(t.size()));
  RtShape s;
  if (t.size() == 2) {
    if (t[1] == Rational(2) * t[0] || t[0] == Rational(2) * t[1]) s.kind = RtShape::Kind::Double;
  } else {
    for (int p = 0; p < 3; ++p) {
      const TRoot& sum = t[p];
      const TRoot &u = t[(p + 1) % 3], &v = t[(p + 2) % 3];
      if (u + v == sum) s.kind = RtShape::Kind::SumClosed;
    }
    std::vector<TRoot> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    const bool mult2 = sorted[1] == Rational(2) * sorted[0];
    if (s.kind == RtShape::Kind::SumClosed) {
      s.collinear = mult2 && sorted[2] == Rational(3) * sorted[0];
    } else if (mult2 && sorted[2] == Rational(4) * sorted[0]) {
      s.kind = RtShape::Kind::Quadruple;
    }
  }
  s.description = to_string(s.kind);
  if (s.collinear) s.description += " with z=2d";
  return s;
}

}  // namespace flagkit
