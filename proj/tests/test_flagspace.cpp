#include <doctest.h>

#include "flagkit/flagspace.hpp"

using namespace flagkit;

namespace {

FlagManifold flag_of(const char* type, std::vector<int> parabolic) {
  return build_flag(build_root_system(LieType::parse(type)), parabolic);
}

// Every subset of simple roots other than the full set.
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

}  // namespace

TEST_CASE("G2 flags: K-roots and module dimensions") {
  FlagManifold f2 = flag_of("G2", {1});
  CHECK(f2.k_roots() == std::vector<Root>{{0, 1}, {0, -1}});
  CHECK(f2.dims() == std::vector<int>{8, 2});

  FlagManifold f1 = flag_of("G2", {0});
  CHECK(f1.k_roots() == std::vector<Root>{{1, 0}, {-1, 0}});
  CHECK(f1.dims() == std::vector<int>{4, 2, 4});

  FlagManifold full = flag_of("G2", {});
  CHECK(full.is_full());
  CHECK(full.k_roots().empty());
  CHECK(full.m_roots().size() == 12);
  CHECK(full.dims() == std::vector<int>(6, 2));
}

TEST_CASE("G2 parabolic {alpha2}: kappa") {
  FlagManifold f = flag_of("G2", {1});
  TRoot z = f.kappa(Root{1, 0});
  for (Root r : {Root{1, 1}, Root{1, 2}, Root{1, 3}}) CHECK(f.kappa(r) == z);
  CHECK(f.kappa(Root{2, 3}) == Rational(2) * z);
  CHECK(f.kappa(Root{0, 1}).is_zero());
  CHECK(f.kappa(Root{-1, -2}) == -z);
  CHECK(f.positive_t_roots() == std::vector<TRoot>{z, Rational(2) * z});
  CHECK(f.modules()[0].roots == std::vector<Root>{{1, 0}, {1, 1}, {1, 2}, {1, 3}});
  CHECK_THROWS_AS(f.kappa(Root{2, 1}), std::invalid_argument);
}

TEST_CASE("G2 parabolic {alpha1}: T-roots delta, 2 delta, 3 delta") {
  FlagManifold f = flag_of("G2", {0});
  auto pt = f.positive_t_roots();
  REQUIRE(pt.size() == 3);
  CHECK(pt[1] == Rational(2) * pt[0]);
  CHECK(pt[2] == Rational(3) * pt[0]);
  CHECK(f.modules()[0].roots == std::vector<Root>{{0, 1}, {1, 1}});
  CHECK(f.modules()[1].roots == std::vector<Root>{{1, 2}});
  CHECK(f.modules()[2].roots == std::vector<Root>{{1, 3}, {2, 3}});
  CHECK(f.module_of(Root{-1, -2}) == 1u);
  CHECK_FALSE(f.module_of(Root{1, 0}).has_value());
  CHECK(f.fibre(-pt[0]) == std::vector<Root>{{0, -1}, {-1, -1}});
}

TEST_CASE("kappa projection is orthogonal to K and agrees with kappa") {
  for (const char* type : {"G2", "B3", "C3", "A4"}) {
    RootSystem rs = build_root_system(LieType::parse(type));
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      for (const Root& a : rs.roots()) {
        auto p = f.kappa_projection(a);
        for (int k : par) CHECK(rs.killing_inner(p, rs.simple_root(k).to_rational()) == 0);
        // Equal kappa images exactly when equal projections.
        for (const Root& b : rs.roots()) CHECK((f.kappa(a) == f.kappa(b)) == (p == f.kappa_projection(b)));
      }
    }
  }
}

TEST_CASE("flag invariants on a sweep") {
  for (const char* type : {"A1", "A3", "B2", "B3", "C3", "D4", "G2", "F4"}) {
    RootSystem rs = build_root_system(LieType::parse(type));
    for (const auto& par : proper_subsets(rs.rank())) {
      FlagManifold f = build_flag(rs, par);
      CAPTURE(f.name());
      CHECK(f.k_roots().size() + f.m_roots().size() == rs.roots().size());
      for (const Root& a : f.k_roots()) {
        CHECK(f.is_k_root(-a));
        CHECK(f.kappa(a).is_zero());
        for (const Root& b : f.k_roots())
          if (rs.is_root(a + b)) CHECK(f.is_k_root(a + b));
      }
      size_t covered = 0;
      int dim_sum = 0;
      for (const auto& m : f.modules()) {
        CHECK(m.t_root.is_positive());
        CHECK(m.dim() % 2 == 0);
        covered += m.roots.size();
        dim_sum += m.dim();
      }
      CHECK(covered == f.m_positive().size());
      CHECK(dim_sum == 2 * static_cast<int>(f.m_positive().size()));
      for (size_t i = 1; i < f.modules().size(); ++i) CHECK(f.modules()[i - 1].t_root < f.modules()[i].t_root);
      for (const Root& a : f.m_roots()) {
        CHECK(f.kappa(-a) == -f.kappa(a));
        for (const Root& b : f.m_roots())
          if (rs.is_root(a + b)) CHECK(f.kappa(a + b) == f.kappa(a) + f.kappa(b));
      }
    }
  }
}

TEST_CASE("full flags have injective kappa") {
  for (const char* type : {"A3", "B3", "G2"}) {
    FlagManifold f = flag_of(type, {});
    CHECK(f.positive_t_roots().size() == f.root_system().positive_roots().size());
  }
}

TEST_CASE("invalid parabolic sets") {
  RootSystem g2 = build_root_system(LieType::parse("G2"));
  CHECK_THROWS_AS(build_flag(g2, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_flag(g2, {2}), std::invalid_argument);
  CHECK_THROWS_AS(build_flag(g2, {0, 0}), std::invalid_argument);
  CHECK(parse_parabolic("") == std::vector<int>{});
  CHECK(parse_parabolic("1, 3") == std::vector<int>{0, 2});
  CHECK_THROWS_AS(parse_parabolic("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_parabolic("a"), std::invalid_argument);
}
