#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <type_traits>

#include "flagkit/acceptance.hpp"
#include "flagkit/einstein.hpp"
#include "flagkit/equigeodesics.hpp"
#include "flagkit/sampling.hpp"
#include "flagkit/triples.hpp"

namespace flagkit::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

void check_format(const std::string& f) {
  if (f != "table" && f != "json" && f != "csv")
    throw std::invalid_argument("format must be table, json or csv, got '" + f + "'");
}

std::string rat(const Rational& q) { return q.get_str(); }

std::string quote_csv(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

json signs_json(const ComplexStructure& j) {
  json a = json::array();
  for (int s : j.signs) a.push_back(s);
  return a;
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
  json inputs = json::object();
  json results = json::object();
  std::string table;
  std::optional<std::string> csv;
  int code = kOk;
};

struct CsvRows {
  std::ostringstream s;
  CsvRows() { s << "index,t_root,dim,lambda,residual\n"; }
  void row(size_t index, const TRoot& t, int dim, const std::string& lambda, const std::string& residual) {
    s << index << ',' << quote_csv(t.to_string()) << ',' << dim << ',' << lambda << ',' << residual << '\n';
  }
};

std::string normalization_note(const RootSystem& rs) {
  Rational shortest;
  bool first = true;
  for (const Root& r : rs.positive_roots()) {
    const Rational n = rs.killing_inner(r, r);
    if (first || n < shortest) shortest = n;
    first = false;
  }
  return "Killing form: shortest roots have squared length " + rat(shortest) +
         "; Kahler-Einstein raw values use squared length 1 (scale " + rat(rs.unit_short_scale()) + ")";
}

struct FlagArgs {
  std::string type;
  std::string parabolic;
};

FlagManifold make_flag(const FlagArgs& a) {
  return build_flag(build_root_system(LieType::parse(a.type)), parse_parabolic(a.parabolic));
}

void echo_flag(Report& r, const FlagArgs& a) {
  r.inputs["type"] = a.type;
  r.inputs["parabolic"] = a.parabolic;
}

// ---------------------------------------------------------------------------
// Commands

Report cmd_roots(const FlagArgs& a) {
  Report r;
  r.inputs["type"] = a.type;
  RootSystem rs = build_root_system(LieType::parse(a.type));
  json roots = json::array();
  std::ostringstream t;
  t << rs.lie_type().name() << ": rank " << rs.rank() << ", " << rs.positive_roots().size() << " positive roots\n";
  t << std::left << std::setw(6) << "index" << std::setw(16) << "root" << std::setw(8) << "height" << "(a,a)\n";
  for (size_t i = 0; i < rs.positive_roots().size(); ++i) {
    const Root& x = rs.positive_roots()[i];
    const Rational n = rs.killing_inner(x, x);
    roots.push_back({{"root", x.to_string()}, {"height", x.height()}, {"norm", rat(n)}});
    t << std::setw(6) << i + 1 << std::setw(16) << x.to_string() << std::setw(8) << x.height() << rat(n) << "\n";
  }
  json cartan = json::array(), gram = json::array();
  for (const auto& row : rs.cartan_matrix()) cartan.push_back(row);
  for (const auto& row : rs.killing_gram()) {
    json g = json::array();
    for (const auto& x : row) g.push_back(rat(x));
    gram.push_back(g);
  }
  r.results = {{"type", rs.lie_type().name()}, {"rank", rs.rank()}, {"cartan", cartan}, {"killing_gram", gram},
               {"positive_roots", roots}};
  r.table = t.str();
  return r;
}

Report cmd_flag(const FlagArgs& a) {
  Report r;
  echo_flag(r, a);
  FlagManifold f = make_flag(a);
  json mods = json::array();
  std::ostringstream t;
  CsvRows csv;
  t << f.name() << ": " << f.module_count() << " isotropy modules, dims (" << join([&] {
    std::vector<std::string> d;
    for (int x : f.dims()) d.push_back(std::to_string(x));
    return d;
  }(), ",") << ")\n";
  for (size_t k = 0; k < f.module_count(); ++k) {
    const auto& m = f.modules()[k];
    std::vector<std::string> roots;
    for (const Root& x : m.roots) roots.push_back(x.to_string());
    mods.push_back({{"index", k + 1}, {"t_root", m.t_root.to_string()}, {"dim", m.dim()}, {"roots", roots}});
    t << "  m" << k + 1 << "  t_root (" << m.t_root.to_string() << ")  dim " << m.dim() << "  roots "
      << join(roots, "; ") << "\n";
    csv.row(k + 1, m.t_root, m.dim(), "", "");
  }
  std::vector<std::string> k_roots;
  for (const Root& x : f.k_roots()) k_roots.push_back(x.to_string());
  r.results = {{"name", f.name()}, {"dims", f.dims()}, {"k_roots", k_roots}, {"modules", mods}};
  r.table = t.str();
  r.csv = csv.s.str();
  return r;
}

std::vector<Root> parse_roots(const RootSystem& rs, const std::string& text) {
  std::vector<Root> out;
  for (const auto& item : split(text, ';')) {
    Root x = Root::parse(item);
    if (x.size() != static_cast<size_t>(rs.rank()) || !rs.is_root(x))
      throw std::invalid_argument("not a root of " + rs.lie_type().name() + ": " + item);
    out.push_back(x);
  }
  return out;
}

Surd parse_coefficient(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty() || parts.size() > 2) throw std::invalid_argument("coefficient must be re or re:im, got '" + text + "'");
  ComplexRational c{parse_rational(parts[0]), parts.size() == 2 ? parse_rational(parts[1]) : Rational(0)};
  return Surd(c);
}

Report cmd_equi_pair(const FlagArgs& a, const std::string& roots_text, const Options& o) {
  Report r;
  echo_flag(r, a);
  r.inputs["roots"] = roots_text;
  FlagManifold f = make_flag(a);
  if (!f.is_full()) throw std::invalid_argument("equi pair needs a full flag (empty --parabolic)");
  const RootSystem& rs = f.root_system();
  const auto roots = parse_roots(rs, roots_text);
  if (roots.size() != 2) throw std::invalid_argument("equi pair needs exactly two roots");
  const bool criterion = is_equigeodesic_pair_fullflag(rs, roots[0], roots[1]);
  WeylBasisData w = assign_signs(rs);
  std::mt19937 rng(static_cast<std::mt19937::result_type>(o.seed));
  const auto verdict = is_equigeodesic(f, w, random_exact_vector(rng, roots));
  r.results = {{"alpha", roots[0].to_string()},
               {"beta", roots[1].to_string()},
               {"sum_is_root", rs.is_root(roots[0] + roots[1])},
               {"difference_is_root", rs.is_root(roots[0] - roots[1])},
               {"equigeodesic", criterion},
               {"bracket_agrees", verdict.is_equigeodesic == criterion}};
  r.table = std::string("u_(") + roots[0].to_string() + ") + u_(" + roots[1].to_string() + "): " +
            (criterion ? "true" : "false") + "\n";
  return r;
}

struct EquiInput {
  std::string roots, coeffs, vector;
  bool unit = false;
};

Root parse_complementary(const FlagManifold& f, const std::string& text) {
  const RootSystem& rs = f.root_system();
  Root x = Root::parse(text);
  if (x.size() != static_cast<size_t>(rs.rank()) || !rs.is_root(x))
    throw std::invalid_argument("not a root of " + rs.lie_type().name() + ": " + text);
  return x;
}

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  throw std::invalid_argument("exact vector entries must be integers or \"p/q\" strings");
}

// A vector given as {"root": [re, im], ...}; the numeric path is used when any entry is a float.
bool json_vector_is_numeric(const json& v) {
  if (!v.is_object()) throw std::invalid_argument("--vector must be a JSON object");
  bool numeric = false;
  for (const auto& [key, c] : v.items()) {
    if (!c.is_array() || c.size() != 2) throw std::invalid_argument("entry " + key + " must be [re, im]");
    for (const auto& x : c) numeric = numeric || x.is_number_float();
  }
  return numeric;
}

template <class S>
void fill_verdict(Report& r, const FlagManifold& f, const BasicTangentVector<S>& v, bool unit) {
  WeylBasisData w = assign_signs(f.root_system());
  const ConstantMode mode = unit ? ConstantMode::Unit : ConstantMode::True;
  const bool g2_three =
      f.root_system().lie_type() == LieType{Family::G, 2} && f.parabolic() == std::vector<int>{0};
  const auto verdict =
      g2_three ? classify_g2_three_summand(f, w, v, mode) : is_equigeodesic(f, w, v, kDefaultZeroTol, mode);
  json coeffs = json::object();
  for (const auto& [x, c] : v.positive_coeffs()) {
    if constexpr (std::is_same_v<S, Surd>)
      coeffs[x.to_string()] = c.to_string();
    else
      coeffs[x.to_string()] = {c.real(), c.imag()};
  }
  r.results = {{"coefficients", coeffs}, {"equigeodesic", verdict.is_equigeodesic}, {"family", verdict.family}};
  std::ostringstream t;
  t << "equigeodesic: " << (verdict.is_equigeodesic ? "true" : "false");
  if (!verdict.family.empty()) t << "  family " << verdict.family;
  t << "\n";
  if (verdict.witness) {
    r.results["witness"] = {{"module", verdict.witness->module + 1},
                            {"root", verdict.witness->root.to_string()},
                            {"value", verdict.witness->value}};
    t << "witness: [X, X_m" << verdict.witness->module + 1 << "]_m has coefficient " << verdict.witness->value
      << " on E_(" << verdict.witness->root.to_string() << ")\n";
  } else {
    r.results["witness"] = nullptr;
  }
  r.table = t.str();
}

Report cmd_equi_check(const FlagArgs& a, const EquiInput& in, const Options& o) {
  Report r;
  echo_flag(r, a);
  FlagManifold f = make_flag(a);
  r.inputs["constants"] = in.unit ? "unit" : "true";
  if (!in.vector.empty()) {
    if (!in.roots.empty() || !in.coeffs.empty()) throw std::invalid_argument("--vector excludes --roots and --coeffs");
    r.inputs["vector"] = in.vector;
    json v;
    try {
      v = json::parse(in.vector);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("--vector is not valid JSON: ") + e.what());
    }
    if (json_vector_is_numeric(v)) {
      NumericTangentVector x;
      for (const auto& [key, c] : v.items())
        x.set(parse_complementary(f, key), {c[0].get<double>(), c[1].get<double>()});
      fill_verdict(r, f, x, in.unit);
    } else {
      TangentVector x;
      for (const auto& [key, c] : v.items())
        x.set(parse_complementary(f, key), Surd(ComplexRational{json_rational(c[0]), json_rational(c[1])}));
      fill_verdict(r, f, x, in.unit);
    }
    return r;
  }
  if (in.roots.empty()) throw std::invalid_argument("equi check needs --roots or --vector");
  r.inputs["roots"] = in.roots;
  r.inputs["coeffs"] = in.coeffs;
  const auto roots = parse_roots(f.root_system(), in.roots);
  TangentVector v;
  if (in.coeffs.empty()) {
    std::mt19937 rng(static_cast<std::mt19937::result_type>(o.seed));
    for (const Root& x : roots) v.set(x, Surd(random_gaussian_rational(rng)));
  } else {
    const auto coeffs = split(in.coeffs, ';');
    if (coeffs.size() != roots.size()) throw std::invalid_argument("need one coefficient per root");
    for (size_t i = 0; i < roots.size(); ++i) v.set(roots[i], parse_coefficient(coeffs[i]));
  }
  fill_verdict(r, f, v, in.unit);
  return r;
}

Report cmd_triples(const FlagArgs& a, const std::string& mode_text) {
  Report r;
  echo_flag(r, a);
  r.inputs["mode"] = mode_text;
  const TripleMode mode = parse_triple_mode(mode_text);
  FlagManifold f = make_flag(a);
  std::ostringstream t;
  json triples = json::array();
  const auto ts = zero_sum_triples(f, mode);
  t << f.name() << ": " << ts.size() << " zero-sum triples (" << to_string(mode) << ")\n";
  for (const auto& x : ts) {
    std::vector<std::string> members, witness;
    for (const auto& m : x.members) members.push_back(m.to_string());
    if (x.witness)
      for (const auto& w : *x.witness) witness.push_back(w.to_string());
    triples.push_back({{"members", members}, {"witness", witness}});
    t << "  (" << join(members, ") + (") << ") = 0";
    if (!witness.empty()) t << "   roots " << join(witness, " | ");
    t << "\n";
  }
  json counts = json::array();
  for (const auto& d : f.t_roots()) {
    const int c = triple_count(f, d, mode);
    counts.push_back({{"t_root", d.to_string()}, {"count", c}});
    t << "  T(" << d.to_string() << ") = " << c << "\n";
  }
  const auto iso = verify_no_isolated_troot(f);
  std::vector<std::string> isolated;
  for (const auto& d : iso.isolated) isolated.push_back(d.to_string());
  r.results = {{"mode", to_string(mode)},
               {"triples", triples},
               {"counts", counts},
               {"isolation", {{"applicable", iso.applicable}, {"holds", iso.holds}, {"isolated", isolated}}}};
  t << "no isolated T-root: " << (iso.applicable ? (iso.holds ? "holds" : "fails") : "not applicable") << "\n";
  if (f.module_count() == 2 || f.module_count() == 3) {
    const auto shape = rt_shape(f);
    r.results["shape"] = shape.description;
    t << "shape: " << shape.description << "\n";
  }
  r.table = t.str();
  return r;
}

Report cmd_ctensor(const FlagArgs& a) {
  Report r;
  echo_flag(r, a);
  FlagManifold f = make_flag(a);
  CTensor c = c_tensor(f, assign_signs(f.root_system()));
  json entries = json::array();
  std::ostringstream t;
  t << f.name() << ": nonzero C_{ij}^k with i <= j <= k (modules numbered from 1)\n";
  for (const auto& [key, v] : c.entries()) {
    entries.push_back({{"i", key[0] + 1}, {"j", key[1] + 1}, {"k", key[2] + 1}, {"value", rat(v)}});
    t << "  C(" << key[0] + 1 << "," << key[1] + 1 << "," << key[2] + 1 << ") = " << rat(v) << "\n";
  }
  r.results = {{"modules", f.module_count()}, {"entries", entries}};
  r.table = t.str();
  return r;
}

ExactMetric parse_metric(const FlagManifold& f, const std::string& text) {
  ExactMetric m;
  for (const auto& item : split(text, ',')) m.lambdas.push_back(parse_rational(item));
  m.validate(f.module_count());
  return m;
}

Report cmd_einstein_solve(const FlagArgs& a, const Options& o) {
  Report r;
  echo_flag(r, a);
  r.inputs["starts"] = o.starts;
  r.inputs["seed"] = o.seed;
  r.inputs["tol"] = o.tol;
  if (o.starts <= 0) throw std::invalid_argument("--starts must be positive");
  FlagManifold f = make_flag(a);
  CTensor c = c_tensor(f, assign_signs(f.root_system()));
  SolveOptions so;
  so.threads = o.threads;
  const auto sols = solve_einstein(f, c, random_starts(o.starts, f.module_count(), o.seed), o.tol, so);
  json out = json::array();
  std::ostringstream t;
  CsvRows csv;
  t << f.name() << ": " << sols.size() << " Einstein metrics (unit volume) from " << o.starts << " starts\n";
  for (size_t i = 0; i < sols.size(); ++i) {
    const auto& s = sols[i];
    json lambda = json::object();
    std::ostringstream line;
    line << std::setprecision(12);
    for (size_t k = 0; k < f.module_count(); ++k) {
      lambda[module_key(f, k)] = s.metric.lambdas[k];
      line << (k ? ", " : "") << s.metric.lambdas[k];
      std::ostringstream lv, rv;
      lv << std::setprecision(17) << s.metric.lambdas[k];
      rv << std::setprecision(3) << s.residual;
      csv.row(i + 1, f.modules()[k].t_root, f.dims()[k], lv.str(), rv.str());
    }
    out.push_back({{"lambda", lambda},
                   {"c", s.einstein_constant},
                   {"residual", s.residual},
                   {"kahler_for", s.kahler_for ? signs_json(*s.kahler_for) : json(nullptr)}});
    t << "  " << i + 1 << ": (" << line.str() << ")  c = " << std::setprecision(12) << s.einstein_constant
      << "  residual " << std::setprecision(2) << s.residual;
    if (s.kahler_for) t << "  Kahler for " << s.kahler_for->to_string();
    t << "\n";
  }
  r.results = {{"solutions", out}};
  r.table = t.str();
  r.csv = csv.s.str();
  if (sols.empty()) r.code = kNoConvergence;
  return r;
}

Report cmd_einstein_check(const FlagArgs& a, const std::string& metric_text) {
  Report r;
  echo_flag(r, a);
  r.inputs["metric"] = metric_text;
  FlagManifold f = make_flag(a);
  CTensor c = c_tensor(f, assign_signs(f.root_system()));
  const ExactMetric m = parse_metric(f, metric_text);
  const auto ricci = ricci_components(f, c, m);
  const bool einstein = std::all_of(ricci.begin(), ricci.end(), [&](const Rational& x) { return x == ricci.front(); });
  const auto fit = best_einstein_residual(f, c, volume_normalized(f, to_numeric(m)));
  json comps = json::object();
  std::ostringstream t;
  t << f.name() << " at (" << metric_text << ")\n";
  for (size_t k = 0; k < f.module_count(); ++k) {
    comps[module_key(f, k)] = rat(ricci[k]);
    t << "  r_" << k + 1 << " = " << rat(ricci[k]) << "\n";
  }
  const Rational s = scalar_curvature(f, c, m);
  r.results = {{"ricci", comps},
               {"scalar_curvature", rat(s)},
               {"einstein", einstein},
               {"residual", fit.max_residual},
               {"xi", fit.xi}};
  t << "scalar curvature " << rat(s) << "\neinstein: " << (einstein ? "true" : "false")
    << "\nleast max residual at unit volume: " << fit.max_residual << "\n";
  r.table = t.str();
  return r;
}

Report cmd_einstein_obstruction(const FlagArgs& a, const std::string& mode_text) {
  Report r;
  echo_flag(r, a);
  r.inputs["mode"] = mode_text;
  FlagManifold f = make_flag(a);
  const auto pairs = dimension_obstruction(f, parse_triple_mode(mode_text));
  json out = json::array();
  std::ostringstream t;
  t << f.name() << ": " << pairs.size() << " pairs with T = 1\n";
  for (const auto& p : pairs) {
    out.push_back({{"i", p.i + 1},
                   {"j", p.j + 1},
                   {"delta_i", p.delta_i.to_string()},
                   {"delta_j", p.delta_j.to_string()},
                   {"dim_i", p.dim_i},
                   {"dim_j", p.dim_j},
                   {"excluded", p.excluded()}});
    t << "  (" << p.i + 1 << "," << p.j + 1 << ") dims (" << p.dim_i << "," << p.dim_j << ")"
      << (p.excluded() ? "  lambda_" + std::to_string(p.i + 1) + " = lambda_" + std::to_string(p.j + 1) +
                             " impossible"
                       : "")
      << "\n";
  }
  r.results = {{"mode", mode_text}, {"pairs", out}};
  r.table = t.str();
  return r;
}

Report cmd_ke(const FlagArgs& a, bool all) {
  Report r;
  echo_flag(r, a);
  r.inputs["all_structures"] = all;
  FlagManifold f = make_flag(a);
  CTensor c = c_tensor(f, assign_signs(f.root_system()));
  json out = json::array();
  std::ostringstream t;
  CsvRows csv;
  size_t integrable = 0, index = 0;
  const auto structures = enumerate_iacs(f);
  std::vector<std::string> header;
  for (size_t k = 0; k < f.module_count(); ++k) header.push_back(module_key(f, k));
  t << f.name() << " Kahler-Einstein metrics, parameters ordered (" << join(header, " | ") << ")\n";
  for (const auto& j : structures) {
    if (!is_integrable(f, j)) continue;
    ++integrable;
    if (!all && j.signs.front() < 0) continue;
    const auto ke = kahler_einstein_metric(f, j);
    const auto ricci = ricci_components(f, c, ke.scaled);
    Rational spread(0);
    for (const auto& x : ricci) spread = std::max(spread, Rational(abs(x - ricci.front())));
    json lambda = json::object(), raw = json::object();
    std::vector<std::string> scaled_text;
    ++index;
    for (size_t k = 0; k < f.module_count(); ++k) {
      lambda[module_key(f, k)] = rat(ke.scaled.lambdas[k]);
      raw[module_key(f, k)] = rat(ke.raw.lambdas[k]);
      scaled_text.push_back(rat(ke.scaled.lambdas[k]));
      csv.row(index, f.modules()[k].t_root, f.dims()[k], rat(ke.scaled.lambdas[k]), rat(spread));
    }
    out.push_back({{"lambda", lambda}, {"raw", raw}, {"c", rat(ricci.front())}, {"residual", rat(spread)},
                   {"kahler_for", signs_json(j)}});
    t << "  (" << join(scaled_text, ",") << ")  J " << j.to_string() << "\n";
  }
  r.results = {{"structures", structures.size()}, {"integrable", integrable}, {"metrics", out}};
  t << integrable << " of " << structures.size() << " invariant almost complex structures are integrable\n";
  r.table = t.str();
  r.csv = csv.s.str();
  return r;
}

Report cmd_verify(const Options& o) {
  Report r;
  r.inputs = {{"seed", o.seed}, {"starts", o.starts}, {"tol", o.tol}};
  AcceptanceOptions ao;
  ao.seed = o.seed;
  ao.starts = o.starts;
  ao.tol = o.tol;
  json out = json::array();
  std::ostringstream t;
  bool ok = true;
  for (const auto& c : run_acceptance(ao)) {
    out.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
    t << format_result(c) << "\n";
    ok = ok && c.passed;
  }
  r.results = {{"criteria", out}, {"passed", ok}};
  r.table = t.str();
  if (!ok) r.code = kAcceptanceFailure;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string module_key(const FlagManifold& f, size_t k) { return f.modules().at(k).roots.front().to_string(); }

namespace {
template <class T, class Parse>
InvariantMetric<T> metric_from_json(const FlagManifold& f, const json& lambda, Parse parse) {
  if (!lambda.is_object()) throw std::invalid_argument("lambda must be a JSON object");
  InvariantMetric<T> m;
  for (size_t k = 0; k < f.module_count(); ++k) {
    const auto key = module_key(f, k);
    if (!lambda.contains(key)) throw std::invalid_argument("lambda has no entry for module " + key);
    m.lambdas.push_back(parse(lambda.at(key)));
  }
  if (lambda.size() != f.module_count()) throw std::invalid_argument("lambda has extra entries");
  m.validate(f.module_count());
  return m;
}
}  // namespace

ExactMetric exact_metric_from_json(const FlagManifold& f, const json& lambda) {
  return metric_from_json<Rational>(f, lambda, [](const json& v) {
    if (!v.is_string()) throw std::invalid_argument("exact metric entries must be \"p/q\" strings");
    return parse_rational(v.get<std::string>());
  });
}

NumericMetric numeric_metric_from_json(const FlagManifold& f, const json& lambda) {
  return metric_from_json<double>(f, lambda, [](const json& v) {
    if (!v.is_number()) throw std::invalid_argument("numeric metric entries must be numbers");
    return v.get<double>();
  });
}

Options load_config(const std::string& path, Options base, std::vector<std::string>& warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    if (seen.count(key))
      warnings.push_back(where + "'" + key + "' repeats line " + std::to_string(seen[key]) + "; the last value wins");
    seen[key] = lineno;
    try {
      size_t used = 0;
      if (key == "seed") {
        if (value[0] == '-') throw std::invalid_argument("negative");
        base.seed = std::stoull(value, &used);
      } else if (key == "tol") {
        base.tol = std::stod(value, &used);
        if (!(base.tol > 0)) throw std::invalid_argument("nonpositive");
      } else if (key == "starts") {
        base.starts = std::stoi(value, &used);
        if (base.starts <= 0) throw std::invalid_argument("nonpositive");
      } else if (key == "threads") {
        if (value[0] == '-') throw std::invalid_argument("negative");
        base.threads = static_cast<unsigned>(std::stoul(value, &used));
      } else if (key == "format") {
        check_format(value);
        base.format = value;
        used = value.size();
      } else {
        throw ConfigError(where + "unknown key '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(where + "invalid value '" + value + "' for '" + key + "'");
    }
  }
  return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations on generalized flag manifolds", "flagkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format, config;
  std::uint64_t seed = 0;
  double tol = 0;
  int starts = 0;
  unsigned threads = 0;
  bool timing = false;
  auto* o_format = app.add_option("--format", format, "table, json or csv");
  app.add_option("--config", config, "key=value defaults file");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_tol = app.add_option("--tol", tol, "solver tolerance");
  auto* o_starts = app.add_option("--starts", starts, "solver multistarts");
  auto* o_threads = app.add_option("--threads", threads, "solver threads, 0 for all cores");
  app.add_flag("--timing", timing, "report wall time");

  FlagArgs fa;
  auto add_type = [&](CLI::App* s, bool with_parabolic) {
    s->add_option("--type", fa.type, "Lie type such as G2 or A3")->required();
    if (with_parabolic)
      s->add_option("--parabolic", fa.parabolic, "1-based simple roots spanning K; empty for the full flag");
  };

  auto* roots = app.add_subcommand("roots", "positive roots, Cartan matrix and Killing Gram matrix");
  add_type(roots, false);
  auto* flag = app.add_subcommand("flag", "isotropy decomposition");
  add_type(flag, true);

  auto* equi = app.add_subcommand("equi", "equigeodesic vectors");
  equi->require_subcommand(1);
  std::string roots_text;
  EquiInput equi_in;
  auto* pair = equi->add_subcommand("pair", "criterion for u_alpha + u_beta on a full flag");
  add_type(pair, true);
  pair->add_option("--roots", roots_text, "two roots, e.g. \"0,1;2,3\"")->required();
  auto* check = equi->add_subcommand("check", "decide whether a vector is equigeodesic");
  add_type(check, true);
  check->add_option("--roots", equi_in.roots, "support roots separated by ';'");
  check->add_option("--coeffs", equi_in.coeffs, "one coefficient per root, re or re:im; random when omitted");
  check->add_option("--vector", equi_in.vector, "JSON object {\"root\": [re, im], ...}");
  check->add_flag("--unit-constants", equi_in.unit, "replace every structure constant by its sign");

  std::string mode = "multiset";
  auto* triples = app.add_subcommand("triples", "zero-sum T-root triples");
  add_type(triples, true);
  triples->add_option("--mode", mode, "multiset or distinct");
  auto* ctensor = app.add_subcommand("ctensor", "structure tensor C_{ij}^k");
  add_type(ctensor, true);

  auto* einstein = app.add_subcommand("einstein", "Einstein metrics");
  einstein->require_subcommand(1);
  auto* solve = einstein->add_subcommand("solve", "multistart Newton solve on the unit-volume slice");
  add_type(solve, true);
  std::string metric_text;
  auto* echeck = einstein->add_subcommand("check", "exact Ricci components of one metric");
  add_type(echeck, true);
  echeck->add_option("--metric", metric_text, "comma-separated rationals, one per module")->required();
  auto* obstruction = einstein->add_subcommand("obstruction", "pairs with lambda_i = lambda_j excluded");
  add_type(obstruction, true);
  obstruction->add_option("--mode", mode, "multiset or distinct");

  bool all_structures = false;
  auto* ke = app.add_subcommand("ke", "Kahler-Einstein metric of each integrable complex structure");
  add_type(ke, true);
  ke->add_flag("--all-structures", all_structures, "include conjugate structures");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    Options o;
    if (!config.empty()) {
      std::vector<std::string> warnings;
      o = load_config(config, o, warnings);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
    }
    if (o_format->count()) o.format = format;
    if (o_seed->count()) o.seed = seed;
    if (o_tol->count()) o.tol = tol;
    if (o_starts->count()) o.starts = starts;
    if (o_threads->count()) o.threads = threads;
    check_format(o.format);
    if (!(o.tol > 0)) throw std::invalid_argument("--tol must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    std::string command;
    if (*roots) {
      command = "roots";
      r = cmd_roots(fa);
    } else if (*flag) {
      command = "flag";
      r = cmd_flag(fa);
    } else if (*pair) {
      command = "equi pair";
      r = cmd_equi_pair(fa, roots_text, o);
    } else if (*check) {
      command = "equi check";
      r = cmd_equi_check(fa, equi_in, o);
    } else if (*triples) {
      command = "triples";
      r = cmd_triples(fa, mode);
    } else if (*ctensor) {
      command = "ctensor";
      r = cmd_ctensor(fa);
    } else if (*solve) {
      command = "einstein solve";
      r = cmd_einstein_solve(fa, o);
    } else if (*echeck) {
      command = "einstein check";
      r = cmd_einstein_check(fa, metric_text);
    } else if (*obstruction) {
      command = "einstein obstruction";
      r = cmd_einstein_obstruction(fa, mode);
    } else if (*ke) {
      command = "ke";
      r = cmd_ke(fa, all_structures);
    } else if (*verify) {
      command = "verify";
      r = cmd_verify(o);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (o.format == "json") {
      json report = {{"tool", "flagkit"}, {"version", kVersion}, {"command", command}, {"inputs", r.inputs}};
      if (!fa.type.empty()) report["normalization"] = normalization_note(build_root_system(LieType::parse(fa.type)));
      report["results"] = r.results;
      if (timing) report["timing_ms"] = ms;
      out << report.dump(2) << "\n";
    } else if (o.format == "csv") {
      if (!r.csv) throw std::invalid_argument("csv output is available for flag, einstein solve and ke");
      out << *r.csv;
    } else {
      out << r.table;
      if (timing) out << "time: " << std::fixed << std::setprecision(1) << ms << " ms\n";
    }
    if (r.code == kNoConvergence) err << "no Einstein metric found from " << o.starts << " starts\n";
    return r.code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace flagkit::cli
