#include "flagkit/einstein.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "flagkit/sampling.hpp"

namespace flagkit {

// ---------------------------------------------------------------------------
// LaurentPolynomial

void LaurentPolynomial::add_term(const Rational& c, const Exponents& e) {
  if (e.size() != n_) throw std::invalid_argument("exponent vector has the wrong length");
  if (sgn(c) == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

LaurentPolynomial LaurentPolynomial::derivative(size_t var) const {
  if (var >= n_) throw std::out_of_range("variable index out of range");
  LaurentPolynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    out.add_term(c * e[var], d);
  }
  return out;
}

namespace {

Rational rational_pow(const Rational& x, int e) {
  Rational base = x;
  if (e < 0) {
    if (sgn(x) == 0) throw std::invalid_argument("negative power of zero");
    base = 1 / x;
    e = -e;
  }
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

double int_pow(double x, int e) {
  if (e < 0) {
    if (x == 0) throw std::invalid_argument("negative power of zero");
    return 1.0 / int_pow(x, -e);
  }
  double out = 1;
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

}  // namespace

Rational LaurentPolynomial::evaluate(const std::vector<Rational>& x) const {
  if (x.size() != n_) throw std::invalid_argument("point has the wrong number of variables");
  Rational s(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (size_t i = 0; i < n_; ++i)
      if (e[i] != 0) t *= rational_pow(x[i], e[i]);
    s += t;
  }
  return s;
}

double LaurentPolynomial::evaluate(const std::vector<double>& x) const {
  if (x.size() != n_) throw std::invalid_argument("point has the wrong number of variables");
  double s = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (size_t i = 0; i < n_; ++i)
      if (e[i] != 0) t *= int_pow(x[i], e[i]);
    s += t;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Curvature

namespace {

LaurentPolynomial::Exponents monomial(size_t n, size_t num, size_t den1, size_t den2) {
  LaurentPolynomial::Exponents e(n, 0);
  ++e[num];
  --e[den1];
  --e[den2];
  return e;
}

void check_tensor(const FlagManifold& f, const CTensor& c) {
  if (c.modules() != f.module_count())
    throw std::invalid_argument("C tensor has " + std::to_string(c.modules()) + " modules, flag has " +
                                std::to_string(f.module_count()));
}

template <class T>
void check_metric(const FlagManifold& f, const InvariantMetric<T>& m) {
  m.validate(f.module_count());
}

template <class T>
T volume(const std::vector<int>& dims, const std::vector<T>& x) {
  T v(1);
  for (size_t i = 0; i < x.size(); ++i)
    for (int d = 0; d < dims[i]; ++d) v *= x[i];
  return v;
}

}  // namespace

LaurentPolynomial scalar_curvature_polynomial(const FlagManifold& f, const CTensor& c) {
  check_tensor(f, c);
  const size_t n = f.module_count();
  const auto dims = f.dims();
  LaurentPolynomial s(n);
  for (size_t i = 0; i < n; ++i) {
    LaurentPolynomial::Exponents e(n, 0);
    e[i] = -1;
    s.add_term(Rational(dims[i]) / 2, e);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        const Rational& v = c(i, j, k);
        if (sgn(v) != 0) s.add_term(-v / 4, monomial(n, k, i, j));
      }
  return s;
}

std::vector<LaurentPolynomial> ricci_polynomials(const FlagManifold& f, const CTensor& c) {
  check_tensor(f, c);
  const size_t n = f.module_count();
  const auto dims = f.dims();
  std::vector<LaurentPolynomial> out;
  for (size_t k = 0; k < n; ++k) {
    LaurentPolynomial r(n);
    LaurentPolynomial::Exponents e(n, 0);
    e[k] = -1;
    r.add_term(Rational(1, 2), e);
    const Rational d(dims[k]);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        const Rational& a = c(i, j, k);
        if (sgn(a) != 0) r.add_term(a / (4 * d), monomial(n, k, i, j));
        const Rational& b = c(k, i, j);
        if (sgn(b) != 0) r.add_term(-b / (2 * d), monomial(n, j, k, i));
      }
    out.push_back(std::move(r));
  }
  return out;
}

Rational scalar_curvature(const FlagManifold& f, const CTensor& c, const ExactMetric& m) {
  check_metric(f, m);
  return scalar_curvature_polynomial(f, c).evaluate(m.lambdas);
}

double scalar_curvature(const FlagManifold& f, const CTensor& c, const NumericMetric& m) {
  check_metric(f, m);
  return scalar_curvature_polynomial(f, c).evaluate(m.lambdas);
}

namespace {

template <class T>
std::vector<T> ricci_impl(const FlagManifold& f, const CTensor& c, const InvariantMetric<T>& m) {
  check_metric(f, m);
  std::vector<T> out;
  for (const auto& p : ricci_polynomials(f, c)) out.push_back(p.evaluate(m.lambdas));
  return out;
}

template <class T>
std::vector<T> residual_impl(const FlagManifold& f, const CTensor& c, const InvariantMetric<T>& m, const T& xi) {
  check_metric(f, m);
  const auto s = scalar_curvature_polynomial(f, c);
  const auto dims = f.dims();
  const T v = volume(dims, m.lambdas);
  std::vector<T> out;
  for (size_t l = 0; l < m.size(); ++l) {
    const T grad = s.derivative(l).evaluate(m.lambdas);
    out.push_back(grad - xi * T(dims[l]) * v / m.lambdas[l]);
  }
  out.push_back(v - T(1));
  return out;
}

}  // namespace

std::vector<Rational> ricci_components(const FlagManifold& f, const CTensor& c, const ExactMetric& m) {
  return ricci_impl(f, c, m);
}

std::vector<double> ricci_components(const FlagManifold& f, const CTensor& c, const NumericMetric& m) {
  return ricci_impl(f, c, m);
}

std::vector<Rational> einstein_residual(const FlagManifold& f, const CTensor& c, const ExactMetric& m,
                                        const Rational& xi) {
  return residual_impl(f, c, m, xi);
}

std::vector<double> einstein_residual(const FlagManifold& f, const CTensor& c, const NumericMetric& m, double xi) {
  return residual_impl(f, c, m, xi);
}

ResidualFit best_einstein_residual(const FlagManifold& f, const CTensor& c, const NumericMetric& m) {
  // Each Lagrange residual is g_l - xi h_l; the max norm is convex and
  // piecewise linear in xi, so its minimum sits at a breakpoint.
  const auto at_zero = einstein_residual(f, c, m, 0.0);
  const auto at_one = einstein_residual(f, c, m, 1.0);
  const size_t n = m.size();
  std::vector<double> g(n), h(n);
  for (size_t l = 0; l < n; ++l) {
    g[l] = at_zero[l];
    h[l] = at_zero[l] - at_one[l];
  }
  const double vol = std::abs(at_zero[n]);
  auto norm = [&](double xi) {
    double r = vol;
    for (size_t l = 0; l < n; ++l) r = std::max(r, std::abs(g[l] - xi * h[l]));
    return r;
  };
  std::vector<double> candidates{0.0};
  for (size_t a = 0; a < n; ++a) {
    if (h[a] != 0) candidates.push_back(g[a] / h[a]);
    for (size_t b = a + 1; b < n; ++b) {
      if (h[a] != h[b]) candidates.push_back((g[a] - g[b]) / (h[a] - h[b]));
      if (h[a] != -h[b]) candidates.push_back((g[a] + g[b]) / (h[a] + h[b]));
    }
  }
  ResidualFit best{0.0, std::numeric_limits<double>::infinity()};
  for (double xi : candidates) {
    const double r = norm(xi);
    if (r < best.max_residual) best = {xi, r};
  }
  return best;
}

NumericMetric volume_normalized(const FlagManifold& f, const NumericMetric& m) {
  check_metric(f, m);
  const auto dims = f.dims();
  double log_v = 0;
  int total = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    log_v += dims[i] * std::log(m.lambdas[i]);
    total += dims[i];
  }
  const double scale = std::exp(-log_v / total);
  NumericMetric out = m;
  for (double& l : out.lambdas) l *= scale;
  return out;
}

RootComponents ricci_components_fullflag(const FlagManifold& f, const WeylBasisData& w, const ExactMetric& m) {
  if (!f.is_full()) throw std::invalid_argument("Ricci components per root need a full flag, got " + f.name());
  const auto r = ricci_components(f, c_tensor(f, w), m);
  RootComponents out;
  for (size_t k = 0; k < f.module_count(); ++k) out.emplace_back(f.modules()[k].roots.front(), r[k]);
  return out;
}

RootComponents ricci_components_fullflag(const RootSystem& rs, const WeylBasisData& w, const ExactMetric& m) {
  return ricci_components_fullflag(build_flag(rs, {}), w, m);
}

// ---------------------------------------------------------------------------
// Complex structures

ComplexStructure ComplexStructure::conjugate() const {
  ComplexStructure out = *this;
  for (int& s : out.signs) s = -s;
  return out;
}

std::string ComplexStructure::to_string() const {
  std::string s;
  for (int e : signs) s += e > 0 ? '+' : '-';
  return s;
}

std::vector<ComplexStructure> enumerate_iacs(const FlagManifold& f) {
  const size_t n = f.module_count();
  if (n > 24) throw std::length_error("too many isotropy modules to enumerate complex structures");
  std::vector<ComplexStructure> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    ComplexStructure j;
    for (size_t k = 0; k < n; ++k) j.signs.push_back((mask >> k) & 1 ? -1 : 1);
    out.push_back(std::move(j));
  }
  return out;
}

namespace {
void check_structure(const FlagManifold& f, const ComplexStructure& j) {
  if (j.signs.size() != f.module_count())
    throw std::invalid_argument("complex structure has " + std::to_string(j.signs.size()) + " signs, flag has " +
                                std::to_string(f.module_count()) + " modules");
  for (int s : j.signs)
    if (s != 1 && s != -1) throw std::invalid_argument("complex structure signs must be +1 or -1");
}
}  // namespace

int root_sign(const FlagManifold& f, const ComplexStructure& j, const Root& a) {
  check_structure(f, j);
  const auto k = f.module_of(a);
  if (!k) throw std::invalid_argument("not a complementary root: " + a.to_string());
  return j.signs[*k] * f.t_sign(a);
}

std::vector<Root> j_positive_roots(const FlagManifold& f, const ComplexStructure& j) {
  std::vector<Root> out;
  for (const Root& a : f.root_system().roots())
    if (f.is_m_root(a) && root_sign(f, j, a) > 0) out.push_back(a);
  return out;
}

bool is_integrable(const FlagManifold& f, const ComplexStructure& j) {
  check_structure(f, j);
  const RootSystem& rs = f.root_system();
  const auto& m = f.m_roots();
  for (const Root& a : m)
    for (const Root& b : m) {
      const Root s = a + b;
      if (s.is_zero() || !rs.is_root(s) || !f.is_m_root(s)) continue;
      const int ea = root_sign(f, j, a);
      if (ea == root_sign(f, j, b) && root_sign(f, j, s) != ea) return false;
    }
  return true;
}

ExactMetric integer_rescaled(const ExactMetric& m) {
  Integer l(1), g(0);
  for (const auto& x : m.lambdas) l = lcm(l, Integer(x.get_den()));
  std::vector<Integer> v;
  for (const auto& x : m.lambdas) {
    Rational y = x * l;
    v.push_back(y.get_num());
    g = gcd(g, v.back());
  }
  ExactMetric out;
  for (const auto& x : v) out.lambdas.push_back(Rational(g == 0 ? x : Integer(x / g)));
  return out;
}

KahlerEinsteinMetric kahler_einstein_metric(const FlagManifold& f, const ComplexStructure& j) {
  check_structure(f, j);
  if (!is_integrable(f, j)) throw std::invalid_argument("complex structure " + j.to_string() + " is not integrable");
  const RootSystem& rs = f.root_system();
  const size_t rank = rs.rank();

  // delta_J over the simple roots, then over the fundamental weights using
  // alpha_j = sum_i a_ij Lambda_i, and (Lambda_i, alpha_k) = delta_ik |alpha_k|^2 / 2.
  std::vector<Rational> delta(rank, Rational(0));
  for (const Root& a : j_positive_roots(f, j))
    for (size_t i = 0; i < rank; ++i) delta[i] += Rational(a.coords()[i]) / 2;
  const auto& cartan = rs.cartan_matrix();
  std::vector<Rational> weight(rank, Rational(0));
  for (size_t i = 0; i < rank; ++i)
    for (size_t k = 0; k < rank; ++k) weight[i] += cartan[i][k] * delta[k];
  const auto gram = rs.unit_short_gram();
  auto pair_with = [&](const Root& a) -> Rational {
    Rational s(0);
    for (size_t i = 0; i < rank; ++i) s += weight[i] * a.coords()[i] * gram[i][i] / 2;
    return s;
  };

  KahlerEinsteinMetric out;
  for (size_t k = 0; k < f.module_count(); ++k) {
    const auto& roots = f.modules()[k].roots;
    auto value = [&](const Root& a) -> Rational { return root_sign(f, j, a) * pair_with(a); };
    const Rational v = value(roots.front());
    for (const Root& a : roots)
      if (value(a) != v) throw std::logic_error("Kahler-Einstein parameter varies inside a module");
    if (sgn(v) <= 0) throw std::logic_error("Kahler-Einstein parameter is not positive");
    out.raw.lambdas.push_back(v);
  }
  out.scaled = integer_rescaled(out.raw);
  return out;
}

bool kahler_criterion(const FlagManifold& f, const ExactMetric& m, const ComplexStructure& j) {
  if (!f.is_full()) throw std::invalid_argument("Kahler criterion needs a full flag, got " + f.name());
  check_metric(f, m);
  const RootSystem& rs = f.root_system();
  const auto pos = j_positive_roots(f, j);
  auto lambda = [&](const Root& a) -> const Rational& { return m.lambdas[*f.module_of(a)]; };
  for (const Root& a : pos)
    for (const Root& b : pos) {
      const Root s = a + b;
      if (!rs.is_root(s)) continue;
      if (lambda(s) != lambda(a) + lambda(b)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Dimension obstruction

std::vector<DimensionPair> dimension_obstruction(const FlagManifold& f, TripleMode mode) {
  const auto triples = zero_sum_triples(f, mode);
  auto count = [&](const TRoot& t) {
    return std::count_if(triples.begin(), triples.end(), [&](const TRootTriple& x) { return x.contains(t); });
  };
  const auto& mods = f.modules();
  const auto dims = f.dims();
  std::vector<DimensionPair> out;
  for (size_t i = 0; i < mods.size(); ++i)
    for (size_t j = i + 1; j < mods.size(); ++j) {
      bool found = false;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          const TRoot di = Rational(si) * mods[i].t_root, dj = Rational(sj) * mods[j].t_root;
          if (!f.t_root_module(-(di + dj))) continue;
          if (count(di) != 1 || count(dj) != 1) continue;
          out.push_back({i, j, di, dj, dims[i], dims[j]});
          found = true;
          break;
        }
        if (found) break;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

struct NewtonSystem {
  size_t n;
  std::vector<int> dims;
  std::vector<LaurentPolynomial> ricci;
  std::vector<std::vector<LaurentPolynomial>> dricci;

  // y holds log x_0 .. log x_{n-2}; x_{n-1} follows from unit volume.
  std::vector<double> metric(const Eigen::VectorXd& y) const {
    std::vector<double> x(n);
    double last = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
      x[i] = std::exp(y[i]);
      last -= dims[i] * y[i];
    }
    x[n - 1] = std::exp(last / dims[n - 1]);
    return x;
  }

  Eigen::VectorXd value(const std::vector<double>& x) const {
    Eigen::VectorXd out(n - 1);
    const double rs = ricci[n - 1].evaluate(x);
    for (size_t i = 0; i + 1 < n; ++i) out[i] = ricci[i].evaluate(x) - rs;
    return out;
  }

  Eigen::MatrixXd jacobian(const std::vector<double>& x) const {
    // dr_i/dy_m = x_m dr_i/dx_m - x_{n-1} (D_m/D_{n-1}) dr_i/dx_{n-1}
    Eigen::MatrixXd g(n, n - 1);
    for (size_t i = 0; i < n; ++i) {
      const double tail = dricci[i][n - 1].evaluate(x) * x[n - 1] / dims[n - 1];
      for (size_t m = 0; m + 1 < n; ++m) g(i, m) = x[m] * dricci[i][m].evaluate(x) - dims[m] * tail;
    }
    Eigen::MatrixXd out(n - 1, n - 1);
    for (size_t i = 0; i + 1 < n; ++i) out.row(i) = g.row(i) - g.row(n - 1);
    return out;
  }
};

std::optional<std::vector<double>> newton(const NewtonSystem& sys, const NumericMetric& start, int max_iter) {
  const size_t n = sys.n;
  double log_v = 0;
  int total = 0;
  for (size_t i = 0; i < n; ++i) {
    log_v += sys.dims[i] * std::log(start.lambdas[i]);
    total += sys.dims[i];
  }
  Eigen::VectorXd y(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) y[i] = std::log(start.lambdas[i]) - log_v / total;

  auto x = sys.metric(y);
  Eigen::VectorXd fy = sys.value(x);
  double norm = fy.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < max_iter && norm > 1e-15; ++it) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.jacobian(x));
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd step = lu.solve(-fy);
    double t = 1;
    bool improved = false;
    for (int h = 0; h < 40; ++h, t /= 2) {
      const Eigen::VectorXd trial = y + t * step;
      if (trial.lpNorm<Eigen::Infinity>() > 50) continue;
      const auto xt = sys.metric(trial);
      const Eigen::VectorXd ft = sys.value(xt);
      const double nt = ft.lpNorm<Eigen::Infinity>();
      if (std::isfinite(nt) && nt < norm) {
        y = trial;
        x = xt;
        fy = ft;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return x;
}

}  // namespace

std::vector<EinsteinSolution> solve_einstein(const FlagManifold& f, const CTensor& c,
                                             const std::vector<NumericMetric>& starts, double tol,
                                             const SolveOptions& opts) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  for (const auto& s : starts) check_metric(f, s);
  check_tensor(f, c);

  NewtonSystem sys{f.module_count(), f.dims(), ricci_polynomials(f, c), {}};
  for (const auto& r : sys.ricci) {
    std::vector<LaurentPolynomial> d;
    for (size_t m = 0; m < sys.n; ++m) d.push_back(r.derivative(m));
    sys.dricci.push_back(std::move(d));
  }

  std::vector<std::optional<EinsteinSolution>> slots(starts.size());
  auto work = [&](size_t idx) {
    std::vector<double> x;
    if (sys.n == 1) {
      x = {1.0};
    } else {
      auto r = newton(sys, starts[idx], opts.max_iterations);
      if (!r) return;
      x = *r;
    }
    EinsteinSolution s;
    s.metric.lambdas = x;
    const auto ricci = ricci_components(f, c, s.metric);
    double weighted = 0;
    int total = 0;
    for (size_t i = 0; i < sys.n; ++i) {
      weighted += sys.dims[i] * ricci[i];
      total += sys.dims[i];
    }
    s.einstein_constant = weighted / total;
    double res = 0;
    for (double v : einstein_residual(f, c, s.metric, -s.einstein_constant)) res = std::max(res, std::abs(v));
    s.residual = res;
    if (res <= tol) slots[idx] = std::move(s);
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(1, starts.size()));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next++; i < starts.size(); i = next++) work(i);
    });
  for (auto& t : pool) t.join();

  std::vector<EinsteinSolution> out;
  for (auto& s : slots) {
    if (!s) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const EinsteinSolution& o) {
      for (size_t i = 0; i < sys.n; ++i)
        if (std::abs(o.metric.lambdas[i] - s->metric.lambdas[i]) > opts.dedupe_tol) return false;
      return true;
    });
    if (!dup) out.push_back(std::move(*s));
  }

  if (!out.empty() && sys.n <= 16) {
    std::vector<std::pair<ComplexStructure, NumericMetric>> ke;
    for (const auto& j : enumerate_iacs(f))
      if (is_integrable(f, j)) ke.emplace_back(j, volume_normalized(f, to_numeric(kahler_einstein_metric(f, j).raw)));
    for (auto& s : out)
      for (const auto& [j, m] : ke) {
        bool match = true;
        for (size_t i = 0; i < sys.n; ++i)
          if (std::abs(m.lambdas[i] - s.metric.lambdas[i]) > 1e-7 * m.lambdas[i]) match = false;
        if (match) {
          s.kahler_for = j;
          break;
        }
      }
  }
  return out;
}

std::vector<NumericMetric> random_starts(size_t count, size_t modules, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<NumericMetric> out;
  for (size_t i = 0; i < count; ++i) out.push_back(random_metric(rng, modules));
  return out;
}

}  // namespace flagkit
