#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "flagkit/einstein.hpp"
#include "flagkit/sampling.hpp"

using namespace flagkit;

namespace {

FlagManifold flag_of(const char* type, std::vector<int> parabolic) {
  return build_flag(build_root_system(LieType::parse(type)), parabolic);
}

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

ExactMetric exact(std::initializer_list<int> v) {
  ExactMetric m;
  for (int x : v) m.lambdas.push_back(Rational(x));
  return m;
}

bool all_equal(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [&](const Rational& x) { return x == v.front(); });
}

// G2/T, variables in the order a1, a2, a1+a2, a1+2a2, a1+3a2, 2a1+3a2.
// Each call adds coef * x_num / (x_d1 x_d2).
struct Printed {
  LaurentPolynomial p{6};
  Printed(int k) {
    LaurentPolynomial::Exponents e(6, 0);
    e[k] = -1;
    p.add_term(Rational(1, 2), e);
  }
  Printed& add(int sign, int num, int den, int d1, int d2) {
    LaurentPolynomial::Exponents e(6, 0);
    e[num] += 1;
    e[d1] -= 1;
    e[d2] -= 1;
    p.add_term(Rational(sign) / den, e);
    return *this;
  }
  Printed& t(int num, int den, int d1, int d2) { return add(1, num, den, d1, d2); }
  Printed& neg(int num, int den, int d1, int d2) { return add(-1, num, den, d1, d2); }
};

std::vector<LaurentPolynomial> printed_g2_system() {
  std::vector<LaurentPolynomial> out;
  out.push_back(Printed(0).t(0, 16, 2, 1).t(0, 16, 5, 4).neg(1, 16, 0, 2).neg(2, 16, 0, 1).neg(4, 16, 0, 5).neg(5, 16, 0, 4).p);
  out.push_back(Printed(1)
                    .t(1, 16, 2, 0).t(1, 16, 4, 3).t(1, 12, 3, 2)
                    .neg(2, 12, 1, 3).neg(3, 12, 1, 2)
                    .neg(0, 16, 1, 2).neg(2, 16, 1, 0).neg(3, 16, 1, 4).neg(4, 16, 1, 3)
                    .p);
  out.push_back(Printed(2)
                    .t(2, 16, 0, 1).t(2, 16, 5, 3).t(2, 12, 3, 1)
                    .neg(1, 12, 2, 3).neg(3, 12, 2, 1)
                    .neg(1, 16, 2, 0).neg(0, 16, 2, 1).neg(3, 16, 2, 5).neg(5, 16, 2, 3)
                    .p);
  out.push_back(Printed(3)
                    .t(3, 16, 4, 1).t(3, 16, 5, 2).t(3, 12, 2, 1)
                    .neg(1, 12, 3, 2).neg(2, 12, 3, 1)
                    .neg(1, 16, 3, 4).neg(4, 16, 3, 1).neg(2, 16, 3, 5).neg(5, 16, 3, 2)
                    .p);
  out.push_back(Printed(4).neg(1, 16, 4, 3).neg(3, 16, 4, 1).neg(0, 16, 4, 5).neg(5, 16, 4, 0).t(4, 16, 3, 1).t(4, 16, 5, 0).p);
  out.push_back(Printed(5).neg(4, 16, 5, 0).neg(0, 16, 5, 4).neg(3, 16, 5, 2).neg(2, 16, 5, 3).t(5, 16, 0, 4).t(5, 16, 2, 3).p);
  return out;
}

struct TableRow {
  std::vector<int> lambda;
  std::vector<Root> positive;
};

// Rows of the G2/T Kahler-Einstein table with their choice of positive roots.
std::vector<TableRow> ke_table() {
  const Root a1{1, 0}, a2{0, 1}, a12{1, 1}, a122{1, 2}, a1222{1, 3}, a11222{2, 3};
  return {
      {{3, 1, 4, 5, 6, 9}, {a2, a1222, a122, a11222, a12, a1}},
      {{6, 5, 1, 4, 9, 3}, {-a12, -a1, a2, a1222, a122, a11222}},
      {{3, 4, 1, 5, 9, 6}, {-a1, a2, a1222, a122, a11222, a12}},
      {{6, 1, 5, 4, 3, 9}, {a1222, a122, a11222, a12, a1, -a2}},
      {{9, 4, 5, 1, 3, 6}, {a122, a11222, a12, a1, -a2, -a1222}},
      {{9, 5, 4, 1, 6, 3}, {a11222, a12, a1, -a2, -a1222, -a122}},
  };
}

ComplexStructure structure_from_positive(const FlagManifold& f, const std::vector<Root>& positive) {
  ComplexStructure j;
  for (const auto& m : f.modules()) {
    const Root& a = m.roots.front();
    j.signs.push_back(std::find(positive.begin(), positive.end(), a) != positive.end() ? 1 : -1);
  }
  return j;
}

// (delta_J, alpha) straight from the Gram matrix, with no weights involved.
Rational gram_pairing(const FlagManifold& f, const ComplexStructure& j, const Root& a) {
  const RootSystem& rs = f.root_system();
  std::vector<Rational> delta(rs.rank(), Rational(0));
  for (const Root& b : j_positive_roots(f, j))
    for (int i = 0; i < rs.rank(); ++i) delta[i] += Rational(b[i]) / 2;
  const auto g = rs.unit_short_gram();
  Rational s(0);
  for (int i = 0; i < rs.rank(); ++i)
    for (int k = 0; k < rs.rank(); ++k) s += delta[i] * g[i][k] * a[k];
  return s;
}

}  // namespace

TEST_CASE("Laurent polynomial basics") {
  LaurentPolynomial p(2);
  p.add_term(Rational(3), {2, -1});
  p.add_term(Rational(1), {0, 0});
  p.add_term(Rational(-1), {0, 0});
  CHECK(p.terms().size() == 1);
  CHECK(p.evaluate(std::vector<Rational>{Rational(2), Rational(3)}) == 4);
  auto d = p.derivative(1);
  CHECK(d.evaluate(std::vector<Rational>{Rational(2), Rational(3)}) == Rational(-4) / 3);
  CHECK(p.evaluate(std::vector<double>{2.0, 3.0}) == doctest::Approx(4.0));
  CHECK_THROWS_AS(p.evaluate(std::vector<Rational>{Rational(1), Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(p.add_term(Rational(1), {1}), std::invalid_argument);
}

TEST_CASE("G2/T Ricci components match the printed system term by term") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  FlagManifold f = build_flag(rs, {});
  WeylBasisData w = assign_signs(rs);
  const auto mine = ricci_polynomials(f, c_tensor(f, w));
  const auto printed = printed_g2_system();
  REQUIRE(mine.size() == 6);
  for (size_t k = 0; k < 6; ++k) {
    CAPTURE(k);
    CHECK(mine[k].terms() == printed[k].terms());
  }
  // the coefficients themselves
  LaurentPolynomial::Exponents long_triple{1, -1, -1, 0, 0, 0};
  CHECK(mine[0].terms().at(long_triple) == Rational(1, 16));
  LaurentPolynomial::Exponents short_triple{0, 1, -1, -1, 0, 0};
  CHECK(mine[1].terms().at(short_triple) == Rational(1, 12));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    ExactMetric m = random_exact_metric(rng, 6);
    const auto r = ricci_components_fullflag(rs, w, m);
    size_t k = 0;
    for (const auto& [root, value] : r) {
      CHECK(root == f.modules()[k].roots.front());
      CHECK(value == printed[k].evaluate(m.lambdas));
      ++k;
    }
  }
}

TEST_CASE("scalar curvature") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  WeylBasisData w = assign_signs(rs);
  FlagManifold two = build_flag(rs, {1});
  CTensor c2 = c_tensor(two, w);
  Rational total(0);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j)
      for (size_t k = 0; k < 2; ++k) total += c2(i, j, k);
  CHECK(scalar_curvature(two, c2, exact({1, 1})) == 5 - total / 4);

  FlagManifold one = flag_of("B3", {1, 2});
  CTensor c1 = c_tensor(one, assign_signs(one.root_system()));
  const int d = one.dims()[0];
  CHECK(scalar_curvature(one, c1, exact({3})) == Rational(d) / 6);

  CHECK_THROWS_AS(scalar_curvature(two, c2, exact({1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(scalar_curvature(two, c2, exact({1})), std::invalid_argument);
}

TEST_CASE("curvature identities on random metrics") {
  std::mt19937 rng(5);
  for (const char* type : {"A3", "B3", "C3", "G2"}) {
    RootSystem rs = build_root_system(LieType::parse(type));
    WeylBasisData w = assign_signs(rs);
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      CAPTURE(f.name());
      CTensor c = c_tensor(f, w);
      const auto s = scalar_curvature_polynomial(f, c);
      const auto dims = f.dims();
      for (int trial = 0; trial < 3; ++trial) {
        ExactMetric m = random_exact_metric(rng, f.module_count());
        const auto r = ricci_components(f, c, m);
        Rational trace(0);
        for (size_t k = 0; k < r.size(); ++k) {
          trace += dims[k] * r[k];
          // dS/dx_k = -D_k r_k / x_k
          CHECK(s.derivative(k).evaluate(m.lambdas) == -dims[k] * r[k] / m.lambdas[k]);
        }
        CHECK(trace == scalar_curvature(f, c, m));
        // homothety
        const Rational t = Rational(7) / 3;
        ExactMetric scaled = m;
        for (auto& l : scaled.lambdas) l *= t;
        const auto rt = ricci_components(f, c, scaled);
        for (size_t k = 0; k < r.size(); ++k) CHECK(rt[k] == r[k] / t);
        CHECK(scalar_curvature(f, c, scaled) == scalar_curvature(f, c, m) / t);
      }
    }
  }
}

TEST_CASE("symbolic gradient agrees with central differences") {
  std::mt19937 rng(17);
  for (const char* type : {"A2", "A3", "B3", "C3", "G2"}) {
    RootSystem rs = build_root_system(LieType::parse(type));
    WeylBasisData w = assign_signs(rs);
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      CAPTURE(f.name());
      CTensor c = c_tensor(f, w);
      const auto s = scalar_curvature_polynomial(f, c);
      const double h = 1e-6;
      for (int trial = 0; trial < 20; ++trial) {
        NumericMetric m = random_metric(rng, f.module_count());
        for (size_t l = 0; l < m.size(); ++l) {
          auto up = m.lambdas, down = m.lambdas;
          up[l] += h;
          down[l] -= h;
          const double fd = (s.evaluate(up) - s.evaluate(down)) / (2 * h);
          const double g = s.derivative(l).evaluate(m.lambdas);
          CHECK(std::abs(fd - g) <= 1e-6 * std::abs(g));
        }
      }
    }
  }
}

TEST_CASE("G2/T normal metric is not Einstein") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  WeylBasisData w = assign_signs(rs);
  std::vector<Rational> r;
  for (const auto& [a, v] : ricci_components_fullflag(rs, w, exact({1, 1, 1, 1, 1, 1}))) r.push_back(v);
  CHECK_FALSE(all_equal(r));
  CHECK_THROWS_AS(ricci_components_fullflag(build_flag(rs, {0}), w, exact({1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(ricci_components_fullflag(rs, w, exact({1, 1})), std::invalid_argument);
}

TEST_CASE("normal metric residual on the G2 partial flags") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  WeylBasisData w = assign_signs(rs);
  for (int p : {0, 1}) {
    FlagManifold f = build_flag(rs, {p});
    CTensor c = c_tensor(f, w);
    NumericMetric normal;
    normal.lambdas.assign(f.module_count(), 1.0);
    NumericMetric m = volume_normalized(f, normal);
    const auto fit = best_einstein_residual(f, c, m);
    CHECK(fit.max_residual > 1e-3);
    // no multiplier does better than the fitted one
    for (double xi = -2; xi <= 2; xi += 0.01) {
      double worst = 0;
      for (double v : einstein_residual(f, c, m, xi)) worst = std::max(worst, std::abs(v));
      CHECK(worst >= fit.max_residual - 1e-12);
    }
  }
}

TEST_CASE("one-summand flags are Einstein") {
  FlagManifold f = flag_of("B3", {1, 2});
  CTensor c = c_tensor(f, assign_signs(f.root_system()));
  for (const auto& v : einstein_residual(f, c, exact({1}), Rational(-1, 2))) CHECK(v == 0);
  auto sols = solve_einstein(f, c, random_starts(3, 1, 1), 1e-10);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].metric.lambdas[0] == 1.0);
  CHECK(sols[0].einstein_constant == doctest::Approx(0.5));
  CHECK(enumerate_iacs(f).size() == 2);
}

TEST_CASE("complex structures on G2/T") {
  FlagManifold f = flag_of("G2", {});
  const auto all = enumerate_iacs(f);
  CHECK(all.size() == 64);
  int integrable = 0;
  for (const auto& j : all) {
    const bool ok = is_integrable(f, j);
    integrable += ok;
    CHECK(ok == is_integrable(f, j.conjugate()));
  }
  CHECK(integrable == 12);
  CHECK(is_integrable(f, ComplexStructure{{1, 1, 1, 1, 1, 1}}));
  CHECK_FALSE(is_integrable(f, ComplexStructure{{1, 1, -1, 1, 1, 1}}));
  CHECK(enumerate_iacs(flag_of("G2", {1})).size() == 4);
  CHECK_THROWS_AS(is_integrable(f, ComplexStructure{{1, 1}}), std::invalid_argument);
}

TEST_CASE("Kahler-Einstein table on G2/T") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  FlagManifold f = build_flag(rs, {});
  WeylBasisData w = assign_signs(rs);
  CTensor c = c_tensor(f, w);

  const auto canonical = kahler_einstein_metric(f, ComplexStructure{{1, 1, 1, 1, 1, 1}});
  const std::vector<Rational> raw{Rational(3, 2), Rational(1, 2), Rational(2), Rational(5, 2), Rational(3),
                                  Rational(9, 2)};
  CHECK(canonical.raw.lambdas == raw);

  std::vector<std::vector<double>> normalized;
  for (const auto& row : ke_table()) {
    const ComplexStructure j = structure_from_positive(f, row.positive);
    CAPTURE(j.to_string());
    REQUIRE(is_integrable(f, j));
    CHECK(j_positive_roots(f, j).size() == 6);
    const auto ke = kahler_einstein_metric(f, j);
    std::vector<Rational> expected;
    for (int x : row.lambda) expected.push_back(Rational(x));
    CHECK(ke.scaled.lambdas == expected);
    CHECK(kahler_einstein_metric(f, j.conjugate()).scaled.lambdas == expected);

    std::vector<Rational> r;
    for (const auto& [a, v] : ricci_components_fullflag(rs, w, ke.scaled)) r.push_back(v);
    CHECK(all_equal(r));
    CHECK(r.front() > 0);
    CHECK(kahler_criterion(f, ke.scaled, j));
    CHECK(kahler_criterion(f, ke.scaled, j.conjugate()));

    auto sorted = row.lambda;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{1, 3, 4, 5, 6, 9});

    NumericMetric m = volume_normalized(f, to_numeric(ke.raw));
    const auto rn = ricci_components(f, c, m);
    for (double v : einstein_residual(f, c, m, -rn.front())) CHECK(std::abs(v) <= 1e-10);
    normalized.push_back(m.lambdas);
  }
  for (size_t a = 0; a < normalized.size(); ++a)
    for (size_t b = a + 1; b < normalized.size(); ++b) {
      double diff = 0;
      for (size_t i = 0; i < 6; ++i) diff = std::max(diff, std::abs(normalized[a][i] - normalized[b][i]));
      CHECK(diff > 1e-3);
    }

  CHECK(kahler_criterion(f, exact({3, 1, 4, 5, 6, 9}), ComplexStructure{{1, 1, 1, 1, 1, 1}}));
  CHECK_FALSE(kahler_criterion(f, exact({1, 1, 1, 1, 1, 1}), ComplexStructure{{1, 1, 1, 1, 1, 1}}));
  CHECK_THROWS_AS(kahler_einstein_metric(f, ComplexStructure{{1, 1, -1, 1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(kahler_criterion(build_flag(rs, {0}), exact({1, 1, 1}), ComplexStructure{{1, 1, 1}}),
                  std::invalid_argument);
}

TEST_CASE("A2 canonical Kahler-Einstein metric") {
  FlagManifold f = flag_of("A2", {});
  CHECK(kahler_einstein_metric(f, ComplexStructure{{1, 1, 1}}).scaled.lambdas == exact({1, 1, 2}).lambdas);
}

TEST_CASE("Kahler-Einstein metrics on every flag") {
  for (const char* type : {"A3", "B3", "C3", "G2", "A4"}) {
    RootSystem rs = build_root_system(LieType::parse(type));
    WeylBasisData w = assign_signs(rs);
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      if (f.module_count() > 10) continue;
      CAPTURE(f.name());
      CTensor c = c_tensor(f, w);
      int count = 0;
      for (const auto& j : enumerate_iacs(f)) {
        if (!is_integrable(f, j)) continue;
        ++count;
        CAPTURE(j.to_string());
        const auto ke = kahler_einstein_metric(f, j);
        for (size_t k = 0; k < f.module_count(); ++k)
          for (const Root& a : f.modules()[k].roots) CHECK(ke.raw.lambdas[k] == root_sign(f, j, a) * gram_pairing(f, j, a));
        CHECK(all_equal(ricci_components(f, c, ke.raw)));
        CHECK(integer_rescaled(kahler_einstein_metric(f, j.conjugate()).raw).lambdas == ke.scaled.lambdas);
      }
      CHECK(count >= 2);
    }
  }
}

TEST_CASE("dimension obstruction") {
  auto g2b = dimension_obstruction(flag_of("G2", {1}));
  REQUIRE(g2b.size() == 1);
  CHECK(g2b[0].i == 0);
  CHECK(g2b[0].j == 1);
  CHECK(g2b[0].dim_i == 8);
  CHECK(g2b[0].dim_j == 2);
  CHECK(g2b[0].excluded());

  auto g2a = dimension_obstruction(flag_of("G2", {0}), TripleMode::Distinct);
  auto it = std::find_if(g2a.begin(), g2a.end(), [](const DimensionPair& p) { return p.i == 0 && p.j == 1; });
  REQUIRE(it != g2a.end());
  CHECK(it->dim_i == 4);
  CHECK(it->dim_j == 2);
  CHECK(it->excluded());

  for (const auto& p : dimension_obstruction(flag_of("A2", {}))) CHECK_FALSE(p.excluded());
}

TEST_CASE("solver on G2/T") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  FlagManifold f = build_flag(rs, {});
  CTensor c = c_tensor(f, assign_signs(rs));
  const NumericMetric row1 = volume_normalized(f, NumericMetric{{3, 1, 4, 5, 6, 9}});

  auto close = [&](const EinsteinSolution& s) {
    for (size_t i = 0; i < 6; ++i)
      if (std::abs(s.metric.lambdas[i] - row1.lambdas[i]) > 1e-8) return false;
    return true;
  };

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  for (int trial = 0; trial < 10; ++trial) {
    NumericMetric start = row1;
    for (double& l : start.lambdas) l *= jitter(rng);
    auto sols = solve_einstein(f, c, {start}, 1e-10);
    REQUIRE(sols.size() == 1);
    CHECK(close(sols[0]));
    REQUIRE(sols[0].kahler_for.has_value());
  }

  const auto starts = random_starts(200, 6, 1);
  auto sols = solve_einstein(f, c, starts, 1e-10);
  CHECK(std::any_of(sols.begin(), sols.end(), close));
  for (const auto& s : sols) {
    CHECK(s.residual <= 1e-10);
    CHECK(s.einstein_constant > 0);
    double logv = 0;
    for (size_t i = 0; i < 6; ++i) logv += 2 * std::log(s.metric.lambdas[i]);
    CHECK(std::abs(logv) < 1e-12);
  }
  for (size_t a = 0; a < sols.size(); ++a)
    for (size_t b = a + 1; b < sols.size(); ++b) {
      double diff = 0;
      for (size_t i = 0; i < 6; ++i) diff = std::max(diff, std::abs(sols[a].metric.lambdas[i] - sols[b].metric.lambdas[i]));
      CHECK(diff > 1e-8);
    }

  // scheduling does not change the result
  SolveOptions one, many;
  one.threads = 1;
  many.threads = 4;
  auto s1 = solve_einstein(f, c, starts, 1e-10, one);
  auto s4 = solve_einstein(f, c, starts, 1e-10, many);
  REQUIRE(s1.size() == s4.size());
  for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].metric.lambdas == s4[i].metric.lambdas);
  CHECK_THROWS_AS(solve_einstein(f, c, starts, 0.0), std::invalid_argument);
}

TEST_CASE("solver on the G2 partial flags") {
  RootSystem rs = build_root_system(LieType::parse("G2"));
  WeylBasisData w = assign_signs(rs);
  for (int p : {0, 1}) {
    FlagManifold f = build_flag(rs, {p});
    CAPTURE(f.name());
    CTensor c = c_tensor(f, w);
    auto sols = solve_einstein(f, c, random_starts(200, f.module_count(), 2), 1e-10);
    REQUIRE_FALSE(sols.empty());
    bool kahler = false;
    for (const auto& s : sols) {
      const auto& l = s.metric.lambdas;
      CHECK(std::abs(l[0] - l[1]) >= 1e-6);
      if (l.size() == 3) CHECK(std::abs(l[0] - l[2]) >= 1e-6);
      CHECK(s.einstein_constant > 0);
      kahler = kahler || s.kahler_for.has_value();
    }
    CHECK(kahler);
  }
}
