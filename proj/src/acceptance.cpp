#include "flagkit/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <sstream>

#include "flagkit/einstein.hpp"
#include "flagkit/equigeodesics.hpp"
#include "flagkit/sampling.hpp"
#include "flagkit/triples.hpp"

namespace flagkit {

namespace {

class Tally {
 public:
  void operator()(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  bool passed() const { return failures_ == 0 && checks_ > 0; }
  std::string detail(const std::string& summary) const {
    std::ostringstream s;
    if (passed())
      s << summary << " (" << checks_ << " checks)";
    else
      s << failures_ << " of " << checks_ << " checks failed; first: " << first_;
    return s.str();
  }

 private:
  int checks_ = 0, failures_ = 0;
  std::string first_;
};

std::vector<std::vector<int>> proper_subsets(int rank) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << rank) - 1; ++mask) {
    std::vector<int> s;
    for (int i = 0; i < rank; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

RootSystem system_of(const char* name) { return build_root_system(LieType::parse(name)); }

std::string join(const std::vector<Rational>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

bool all_equal(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [&](const Rational& x) { return x == v.front(); });
}

// G2/T roots a1, a2, a1+a2, a1+2a2, a1+3a2, 2a1+3a2.
const Root kA1{1, 0}, kA2{0, 1}, kA12{1, 1}, kA122{1, 2}, kA1222{1, 3}, kA11222{2, 3};

struct TableRow {
  std::vector<int> lambda;
  std::vector<Root> positive;
};

std::vector<TableRow> ke_table() {
  return {
      {{3, 1, 4, 5, 6, 9}, {kA2, kA1222, kA122, kA11222, kA12, kA1}},
      {{6, 5, 1, 4, 9, 3}, {-kA12, -kA1, kA2, kA1222, kA122, kA11222}},
      {{3, 4, 1, 5, 9, 6}, {-kA1, kA2, kA1222, kA122, kA11222, kA12}},
      {{6, 1, 5, 4, 3, 9}, {kA1222, kA122, kA11222, kA12, kA1, -kA2}},
      {{9, 4, 5, 1, 3, 6}, {kA122, kA11222, kA12, kA1, -kA2, -kA1222}},
      {{9, 5, 4, 1, 6, 3}, {kA11222, kA12, kA1, -kA2, -kA1222, -kA122}},
  };
}

ComplexStructure structure_from_positive(const FlagManifold& f, const std::vector<Root>& positive) {
  ComplexStructure j;
  for (const auto& m : f.modules())
    j.signs.push_back(std::find(positive.begin(), positive.end(), m.roots.front()) != positive.end() ? 1 : -1);
  return j;
}

// The G2/T Einstein system as printed: r_k = 1/(2x_k) plus terms
// sign/den * x_num / (x_d1 x_d2).
struct Term {
  int sign, num, den, d1, d2;
};

std::vector<LaurentPolynomial> printed_g2_system() {
  const std::vector<std::vector<Term>> rows{
      {{1, 0, 16, 2, 1}, {1, 0, 16, 5, 4}, {-1, 1, 16, 0, 2}, {-1, 2, 16, 0, 1}, {-1, 4, 16, 0, 5}, {-1, 5, 16, 0, 4}},
      {{1, 1, 16, 2, 0}, {1, 1, 16, 4, 3}, {1, 1, 12, 3, 2}, {-1, 2, 12, 1, 3}, {-1, 3, 12, 1, 2},
       {-1, 0, 16, 1, 2}, {-1, 2, 16, 1, 0}, {-1, 3, 16, 1, 4}, {-1, 4, 16, 1, 3}},
      {{1, 2, 16, 0, 1}, {1, 2, 16, 5, 3}, {1, 2, 12, 3, 1}, {-1, 1, 12, 2, 3}, {-1, 3, 12, 2, 1},
       {-1, 1, 16, 2, 0}, {-1, 0, 16, 2, 1}, {-1, 3, 16, 2, 5}, {-1, 5, 16, 2, 3}},
      {{1, 3, 16, 4, 1}, {1, 3, 16, 5, 2}, {1, 3, 12, 2, 1}, {-1, 1, 12, 3, 2}, {-1, 2, 12, 3, 1},
       {-1, 1, 16, 3, 4}, {-1, 4, 16, 3, 1}, {-1, 2, 16, 3, 5}, {-1, 5, 16, 3, 2}},
      {{-1, 1, 16, 4, 3}, {-1, 3, 16, 4, 1}, {-1, 0, 16, 4, 5}, {-1, 5, 16, 4, 0}, {1, 4, 16, 3, 1}, {1, 4, 16, 5, 0}},
      {{-1, 4, 16, 5, 0}, {-1, 0, 16, 5, 4}, {-1, 3, 16, 5, 2}, {-1, 2, 16, 5, 3}, {1, 5, 16, 0, 4}, {1, 5, 16, 2, 3}},
  };
  std::vector<LaurentPolynomial> out;
  for (size_t k = 0; k < rows.size(); ++k) {
    LaurentPolynomial p(6);
    LaurentPolynomial::Exponents e(6, 0);
    e[k] = -1;
    p.add_term(Rational(1, 2), e);
    for (const Term& t : rows[k]) {
      LaurentPolynomial::Exponents x(6, 0);
      x[t.num] += 1;
      x[t.d1] -= 1;
      x[t.d2] -= 1;
      p.add_term(Rational(t.sign) / t.den, x);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------

CriterionResult ke_table_check() {
  Tally t;
  RootSystem rs = system_of("G2");
  FlagManifold f = build_flag(rs, {});
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : ke_table()) {
    const ComplexStructure j = structure_from_positive(f, row.positive);
    std::vector<Rational> expected;
    for (int x : row.lambda) expected.push_back(Rational(x));
    const auto got = kahler_einstein_metric(f, j).scaled.lambdas;
    t(got == expected, "J " + j.to_string() + " gave " + join(got) + ", expected " + join(expected));
    rows.push_back(expected);
  }
  // every integrable structure lands on one of the six rows, each row twice
  std::vector<int> hits(rows.size(), 0);
  for (const auto& j : enumerate_iacs(f)) {
    if (!is_integrable(f, j)) continue;
    const auto got = kahler_einstein_metric(f, j).scaled.lambdas;
    auto it = std::find(rows.begin(), rows.end(), got);
    t(it != rows.end(), "J " + j.to_string() + " gave an unlisted metric " + join(got));
    if (it != rows.end()) ++hits[it - rows.begin()];
  }
  for (int h : hits) t(h == 2, "a table row is reached by " + std::to_string(h) + " structures");
  return {1, "KE table reproduction", t.passed(), t.detail("six rows exact, each from a conjugate pair")};
}

CriterionResult einstein_exact_check() {
  Tally t;
  RootSystem rs = system_of("G2");
  FlagManifold f = build_flag(rs, {});
  WeylBasisData w = assign_signs(rs);
  for (const auto& row : ke_table()) {
    const auto ke = kahler_einstein_metric(f, structure_from_positive(f, row.positive));
    std::vector<Rational> r;
    for (const auto& [a, v] : ricci_components_fullflag(rs, w, ke.scaled)) r.push_back(v);
    t(all_equal(r), "Ricci components " + join(r) + " at " + join(ke.scaled.lambdas));
  }
  const auto raw = kahler_einstein_metric(f, ComplexStructure{{1, 1, 1, 1, 1, 1}}).raw.lambdas;
  const std::vector<Rational> expected{Rational(3, 2), Rational(1, 2), Rational(2), Rational(5, 2), Rational(3),
                                       Rational(9, 2)};
  t(raw == expected, "canonical raw metric " + join(raw));
  return {2, "Einstein verification", t.passed(), t.detail("equal Ricci components; raw (3/2,1/2,2,5/2,3,9/2)")};
}

CriterionResult coefficient_check() {
  Tally t;
  RootSystem rs = system_of("G2");
  FlagManifold f = build_flag(rs, {});
  const auto mine = ricci_polynomials(f, c_tensor(f, assign_signs(rs)));
  const auto printed = printed_g2_system();
  for (size_t k = 0; k < 6; ++k) t(mine[k].terms() == printed[k].terms(), "equation " + std::to_string(k) + " differs");
  // long roots a1, a1+3a2, 2a1+3a2; short roots a2, a1+a2, a1+2a2
  auto only = [](const LaurentPolynomial::Exponents& e, std::initializer_list<int> vars) {
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0 && std::find(vars.begin(), vars.end(), static_cast<int>(i)) == vars.end()) return false;
    return true;
  };
  int longs = 0, shorts = 0;
  for (const auto& p : mine)
    for (const auto& [e, c] : p.terms()) {
      const int degree = std::count_if(e.begin(), e.end(), [](int x) { return x != 0; });
      if (degree < 2) continue;
      if (only(e, {0, 4, 5})) {
        ++longs;
        t(abs(c) == Rational(1, 16), "long triple coefficient " + c.get_str());
      }
      if (only(e, {1, 2, 3})) {
        ++shorts;
        t(abs(c) == Rational(1, 12), "short triple coefficient " + c.get_str());
      }
    }
  t(longs == 9 && shorts == 9, "triple term counts " + std::to_string(longs) + ", " + std::to_string(shorts));
  return {3, "Coefficient cross-check", t.passed(), t.detail("all six equations equal term by term; 1/16 and 1/12")};
}

CriterionResult pair_oracle_check(std::mt19937& rng) {
  Tally t;
  for (const char* type : {"A2", "A3", "B2", "G2"}) {
    RootSystem rs = system_of(type);
    FlagManifold f = build_flag(rs, {});
    WeylBasisData w = assign_signs(rs);
    const auto& pos = rs.positive_roots();
    for (size_t i = 0; i < pos.size(); ++i)
      for (size_t j = i + 1; j < pos.size(); ++j) {
        const bool oracle = !rs.is_root(pos[i] + pos[j]) && !rs.is_root(pos[i] - pos[j]);
        for (int k = 0; k < 100; ++k) {
          const auto v = random_exact_vector(rng, {pos[i], pos[j]});
          t(is_equigeodesic(f, w, v).is_equigeodesic == oracle,
            std::string(type) + " roots " + pos[i].to_string() + ", " + pos[j].to_string());
        }
      }
  }
  return {4, "Pair criterion oracle equivalence", t.passed(), t.detail("100% agreement on A2, A3, B2, G2")};
}

CriterionResult two_summand_check(std::mt19937& rng) {
  Tally t;
  RootSystem rs = system_of("G2");
  FlagManifold f = build_flag(rs, {1});
  WeylBasisData w = assign_signs(rs);
  const auto& pos = f.m_positive();
  for (int mask = 1; mask < (1 << pos.size()); ++mask) {
    std::vector<Root> support;
    std::vector<size_t> modules;
    for (size_t i = 0; i < pos.size(); ++i)
      if (mask & (1 << i)) {
        support.push_back(pos[i]);
        modules.push_back(*f.module_of(pos[i]));
      }
    const bool single = std::all_of(modules.begin(), modules.end(), [&](size_t m) { return m == modules.front(); });
    for (int k = 0; k < 5; ++k)
      t(is_equigeodesic(f, w, random_exact_vector(rng, support)).is_equigeodesic == single,
        "support mask " + std::to_string(mask));
  }
  return {5, "G2 two-summand classification", t.passed(), t.detail("equigeodesic exactly on single-summand supports")};
}

CriterionResult three_summand_check(std::mt19937& rng) {
  Tally t;
  RootSystem rs = system_of("G2");
  FlagManifold f = build_flag(rs, {0});
  WeylBasisData w = assign_signs(rs);
  const std::vector<std::pair<std::vector<Root>, std::string>> families{
      {{kA2, kA12}, "a"}, {{kA122}, "b"}, {{kA1222, kA11222}, "c"}, {{kA12, kA1222}, "d"}};
  for (const auto& [support, family] : families)
    for (int k = 0; k < 20; ++k) {
      const auto v = random_exact_vector(rng, support);
      const auto verdict = classify_g2_three_summand(f, w, v);
      t(verdict.is_equigeodesic && verdict.family == family && is_equigeodesic(f, w, v).is_equigeodesic,
        "family " + family);
    }
  const std::vector<std::pair<size_t, std::vector<Root>>> violations{
      {0, {kA12, kA122}}, {1, {kA122, kA1222}}, {2, {kA2, kA122}}, {3, {kA122, kA11222}},
      {4, {kA2, kA1222}}, {5, {kA2, kA122}},  {6, {kA12, kA122}}};
  for (const auto& [row, support] : violations)
    for (int k = 0; k < 10; ++k) {
      const auto v = random_exact_vector(rng, support);
      const bool violated = !g2_three_summand_system(f, w, v, ConstantMode::True)[row].is_zero();
      t(violated && !is_equigeodesic(f, w, v).is_equigeodesic && !classify_g2_three_summand(f, w, v).is_equigeodesic,
        "equation " + std::to_string(row) + " violation");
    }
  const auto [w1, w2] = g2_family_e_weights(w, ConstantMode::True);
  for (int k = 0; k < 20; ++k) {
    const Surd a1(random_gaussian_rational(rng)), a2(random_gaussian_rational(rng)), s(random_gaussian_rational(rng));
    TangentVector v;
    v.set(kA2, a1);
    v.set(kA12, a2);
    v.set(kA1222, w2 * (-a2.conj()) * s);
    v.set(kA11222, -(w1 * (-a1.conj()) * s));
    bool zero = true;
    for (size_t m = 0; m < f.module_count(); ++m) zero = zero && bracket_m(f, w, v, module_component(f, v, m)).is_zero();
    t(zero && classify_g2_three_summand(f, w, v).family == "e", "family e residual");
  }
  return {6, "G2 three-summand classification", t.passed(), t.detail("families a-e hold, single violations fail")};
}

CriterionResult isolation_sweep_check() {
  Tally t;
  int flags = 0, shapes = 0;
  for (const char* type : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2"}) {
    RootSystem rs = system_of(type);
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      const size_t n = f.module_count();
      if (n > 1) {
        ++flags;
        const auto r = verify_no_isolated_troot(f);
        t(r.applicable && r.holds, f.name() + " has an isolated T-root");
      }
      if (n == 2) {
        ++shapes;
        t(rt_shape(f).kind == RtShape::Kind::Double, f.name() + " is not {z,2z}");
      } else if (n == 3) {
        ++shapes;
        const auto k = rt_shape(f).kind;
        t(k == RtShape::Kind::SumClosed || k == RtShape::Kind::Quadruple, f.name() + " has an unexpected shape");
      }
    }
  }
  return {7, "No isolated T-root sweep", t.passed(),
          t.detail(std::to_string(flags) + " flags without isolated T-roots, " + std::to_string(shapes) + " shapes")};
}

CriterionResult dimensions_check() {
  Tally t;
  RootSystem rs = system_of("G2");
  t(build_flag(rs, {1}).dims() == std::vector<int>{8, 2}, "parabolic {a2}");
  t(build_flag(rs, {0}).dims() == std::vector<int>{4, 2, 4}, "parabolic {a1}");
  t(build_flag(rs, {}).dims() == std::vector<int>(6, 2), "full flag");
  return {8, "Dimensions", t.passed(), t.detail("(8,2), (4,2,4), six of dimension 2")};
}

CriterionResult normal_metric_check() {
  Tally t;
  RootSystem rs = system_of("G2");
  WeylBasisData w = assign_signs(rs);
  std::string values;
  for (int p : {1, 0}) {
    FlagManifold f = build_flag(rs, {p});
    NumericMetric normal;
    normal.lambdas.assign(f.module_count(), 1.0);
    const auto fit = best_einstein_residual(f, c_tensor(f, w), volume_normalized(f, normal));
    t(fit.max_residual > 1e-3, f.name() + " residual " + std::to_string(fit.max_residual));
    values += (values.empty() ? "" : ", ") + f.name() + " " + std::to_string(fit.max_residual);
  }
  return {9, "Non-Einstein normal metric", t.passed(), t.detail("least max residual over xi: " + values)};
}

CriterionResult solver_check(const AcceptanceOptions& opts) {
  Tally t;
  RootSystem rs = system_of("G2");
  WeylBasisData w = assign_signs(rs);
  FlagManifold full = build_flag(rs, {});
  const NumericMetric row1 = volume_normalized(full, NumericMetric{{3, 1, 4, 5, 6, 9}});
  const auto sols = solve_einstein(full, c_tensor(full, w), random_starts(opts.starts, 6, opts.seed), opts.tol);
  const bool found = std::any_of(sols.begin(), sols.end(), [&](const EinsteinSolution& s) {
    for (size_t i = 0; i < 6; ++i)
      if (std::abs(s.metric.lambdas[i] - row1.lambdas[i]) > 1e-8) return false;
    return s.residual <= opts.tol;
  });
  t(found, "KE row 1 not recovered");
  size_t partial = 0;
  for (int p : {1, 0}) {
    FlagManifold f = build_flag(rs, {p});
    const auto ps = solve_einstein(f, c_tensor(f, w), random_starts(opts.starts, f.module_count(), opts.seed), opts.tol);
    t(!ps.empty(), f.name() + " has no solutions");
    partial += ps.size();
    for (const auto& s : ps) {
      const auto& l = s.metric.lambdas;
      t(std::abs(l[0] - l[1]) >= 1e-6, f.name() + " solution with l1 = l2");
      if (l.size() == 3) t(std::abs(l[0] - l[2]) >= 1e-6, f.name() + " solution with l1 = l3");
      t(s.residual <= opts.tol, f.name() + " residual above tolerance");
    }
  }
  return {10, "Solver", t.passed(),
          t.detail(std::to_string(sols.size()) + " G2/T classes incl. KE row 1; " + std::to_string(partial) +
                   " partial-flag solutions separated")};
}

std::vector<LieElement> full_basis(const WeylBasisData& w) {
  std::vector<LieElement> out;
  for (int i = 0; i < w.root_system().rank(); ++i) out.push_back(w.basis_cartan(i));
  for (const Root& r : w.root_system().roots()) out.push_back(w.basis_root(r));
  return out;
}

CriterionResult property_check(std::mt19937& rng) {
  Tally t;
  for (const char* type : {"A1", "A2", "A3", "B2", "G2"}) {
    WeylBasisData w = assign_signs(system_of(type));
    const auto basis = full_basis(w);
    bool ok = true;
    for (size_t i = 0; i < basis.size() && ok; ++i)
      for (size_t j = i + 1; j < basis.size() && ok; ++j) {
        const LieElement xy = w.bracket(basis[i], basis[j]);
        for (size_t k = j + 1; k < basis.size() && ok; ++k)
          ok = (w.bracket(xy, basis[k]) + w.bracket(w.bracket(basis[j], basis[k]), basis[i]) +
                w.bracket(w.bracket(basis[k], basis[i]), basis[j]))
                   .is_zero();
      }
    t(ok, std::string("Jacobi fails on ") + type);
  }

  for (const char* type : {"A2", "A3", "B2", "G2"}) {
    RootSystem rs = system_of(type);
    WeylBasisData w = assign_signs(rs);
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      CTensor c = c_tensor(f, w);
      const auto s = scalar_curvature_polynomial(f, c);
      const double h = 1e-6;
      for (int k = 0; k < 20; ++k) {
        const NumericMetric m = random_metric(rng, f.module_count());
        for (size_t l = 0; l < m.size(); ++l) {
          auto up = m.lambdas, down = m.lambdas;
          up[l] += h;
          down[l] -= h;
          const double fd = (s.evaluate(up) - s.evaluate(down)) / (2 * h);
          const double g = s.derivative(l).evaluate(m.lambdas);
          t(std::abs(fd - g) <= 1e-6 * std::abs(g), f.name() + " gradient mismatch");
        }
      }
      for (int k = 0; k < 5; ++k) {
        const ExactMetric m = random_exact_metric(rng, f.module_count());
        const Rational scale = Rational(k + 2) / 3;
        ExactMetric scaled = m;
        for (auto& l : scaled.lambdas) l *= scale;
        const auto r = ricci_components(f, c, m), rt = ricci_components(f, c, scaled);
        for (size_t i = 0; i < r.size(); ++i) t(rt[i] == r[i] / scale, f.name() + " homothety");
      }
      for (const auto& j : enumerate_iacs(f)) {
        const bool ok = is_integrable(f, j);
        t(ok == is_integrable(f, j.conjugate()), f.name() + " conjugation changes integrability");
        if (ok)
          t(kahler_einstein_metric(f, j).scaled.lambdas == kahler_einstein_metric(f, j.conjugate()).scaled.lambdas,
            f.name() + " conjugate KE metrics differ");
      }
    }
  }
  return {11, "Property suites", t.passed(), t.detail("Jacobi, gradient, homothety, conjugation")};
}

CriterionResult guarded(int id, const std::string& title, const std::function<CriterionResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {id, title, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(opts.seed));
  return {
      guarded(1, "KE table reproduction", ke_table_check),
      guarded(2, "Einstein verification", einstein_exact_check),
      guarded(3, "Coefficient cross-check", coefficient_check),
      guarded(4, "Pair criterion oracle equivalence", [&] { return pair_oracle_check(rng); }),
      guarded(5, "G2 two-summand classification", [&] { return two_summand_check(rng); }),
      guarded(6, "G2 three-summand classification", [&] { return three_summand_check(rng); }),
      guarded(7, "No isolated T-root sweep", isolation_sweep_check),
      guarded(8, "Dimensions", dimensions_check),
      guarded(9, "Non-Einstein normal metric", normal_metric_check),
      guarded(10, "Solver", [&] { return solver_check(opts); }),
      guarded(11, "Property suites", [&] { return property_check(rng); }),
  };
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.title << ": " << r.detail;
  return s.str();
}

}  // namespace flagkit
