#include "revholder/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

namespace revholder {
namespace {

constexpr double kPi = std::numbers::pi;

using json = nlohmann::ordered_json;

std::string str_of(const ExtendedRational& x) { return x.str(); }

ReportRow make_row(std::string suite, std::string key, double measured, double predicted, double tolerance,
                   bool pass, std::string detail = {}) {
  return {std::move(suite), std::move(key), measured, predicted, tolerance, pass ? "pass" : "fail", std::move(detail)};
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Box-Muller on raw generator bits, so the stream does not depend on the
// standard library's distributions.
double gaussian(std::mt19937_64& gen) {
  double u1;
  do {
    u1 = uniform01(gen);
  } while (u1 <= 0.0);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::vector<double> sample(const SphereFunction& f, int d, std::span<const double> points) {
  std::vector<double> out(points.size() / d);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(points.subspan(i * d, d));
  return out;
}

std::vector<double> sample(const AppliedOperator& op, int d, std::span<const double> points) {
  std::vector<double> out(points.size() / d);
  op.evaluate(points, out);
  return out;
}

BoundedFunction harmonic_function(const HarmonicCombination& y) {
  auto shared = std::make_shared<const HarmonicCombination>(y);
  return {[shared](std::span<const double> x) { return (*shared)(x); }, y.degree()};
}

std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

double max_over_min(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Samples sum_k coeffs[k] P_k^{(a,a)}(t) at the given abscissae.
std::vector<double> zonal_series(const DimensionParams& dims, const std::vector<double>& coeffs,
                                 std::span<const double> t) {
  const double a = dims.zonal_alpha();
  const JacobiRecurrence rec(a, a, std::max(static_cast<int>(coeffs.size()) - 1, 1));
  std::vector<double> out(t.size());
  kernels::jacobi_series(rec, coeffs, t, out);
  return out;
}

bool selected(const ExperimentConfig& cfg, const std::string& name) {
  for (const auto& s : cfg.suites)
    if (s == "all" || s == name) return true;
  return false;
}

std::vector<int> reproduction_degrees(int d) {
  if (d <= 4) return {2, 4, 8, 16, 24};
  return {2, 4, 8, 12};
}

int operator_max_degree(int d) {
  // Largest rule requested by the operator suite: expansion checks at input
  // degree 24 with T_n, n <= 19, and reproduction at n = 24.
  if (d <= 4) return std::max(24 + 19 + 2 * (d - 2), 24 + 24 + 2 * (d - 2));
  return 12 + 12 + 2 * (d - 2);
}

}  // namespace

SlopeFit fit_slope(std::span<const double> n_grid, std::span<const double> values) {
  if (n_grid.size() != values.size()) throw DomainError("fit_slope: grid and values differ in length");
  if (n_grid.size() < 4) throw DegenerateGridError("fit_slope: need at least 4 points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0.0)) throw DegenerateGridError("fit_slope: degrees must be positive");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw DegenerateGridError("fit_slope: grid must be strictly increasing");
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw DomainError("fit_slope: values must be positive and finite");
  }
  const std::size_t m = n_grid.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(n_grid[i]);
    y[i] = std::log(values[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateGridError("fit_slope: zero spread in log n");
  SlopeFit fit;
  fit.n_grid.assign(n_grid.begin(), n_grid.end());
  fit.values.assign(values.begin(), values.end());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < m; ++i)
    fit.max_residual = std::max(fit.max_residual, std::fabs(y[i] - (fit.intercept + fit.slope * x[i])));
  return fit;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"quadrature", "kernels", "operators", "rates", "ratios", "exponents"};
  return names;
}

std::vector<std::pair<ExtendedRational, ExtendedRational>> default_ratio_pairs(int d) {
  const auto inf = ExtendedRational::infinity();
  using P = std::pair<ExtendedRational, ExtendedRational>;
  if (d == 3) return {P{1, 2}, P{2, 4}, P{2, inf}, P{1, inf}, P{5, inf}};
  return {P{1, 2}, P{1, inf}, P{4, inf}};
}

// ---- configuration ----

namespace {

ExtendedRational exponent_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return ExtendedRational::from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return ExtendedRational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": exponent must be a number or a string");
}

// json's get<> silently truncates 2.5 to 2 and wraps -1 into uint64.
template <typename T>
void check_integral(const json& v, const std::string& where) {
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    if (std::is_unsigned_v<T> && !v.is_number_unsigned()) throw ConfigError(where + ": expected a nonnegative integer");
  }
}

template <typename T>
std::vector<T> list_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  for (const auto& e : v) check_integral<T>(e, where);
  try {
    return v.get<std::vector<T>>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong element type");
  }
}

template <typename T>
T scalar_of(const json& v, const std::string& where) {
  check_integral<T>(v, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong type");
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j,
             {"dims", "family_p", "ratio_pairs", "n_grid", "band_grid", "seeds", "budget", "max_degree", "tolerances",
              "suites", "output"},
             "config");
  ExperimentConfig c;
  if (j.contains("dims")) c.dims = list_of<int>(j["dims"], "dims");
  if (j.contains("family_p")) c.family_p = list_of<double>(j["family_p"], "family_p");
  if (j.contains("n_grid")) c.n_grid = list_of<int>(j["n_grid"], "n_grid");
  if (j.contains("band_grid")) c.band_grid = list_of<int>(j["band_grid"], "band_grid");
  if (j.contains("seeds")) c.seeds = list_of<std::uint64_t>(j["seeds"], "seeds");
  if (j.contains("suites")) c.suites = list_of<std::string>(j["suites"], "suites");
  if (j.contains("max_degree")) c.max_degree = scalar_of<int>(j["max_degree"], "max_degree");
  if (j.contains("ratio_pairs")) {
    const json& rp = j["ratio_pairs"];
    check_keys(rp, {"3", "4", "5", "6"}, "ratio_pairs");
    for (auto it = rp.begin(); it != rp.end(); ++it) {
      const int d = std::stoi(it.key());
      auto& pairs = c.ratio_pairs[d];
      if (!it.value().is_array()) throw ConfigError("ratio_pairs: expected an array of [p, q]");
      for (const auto& pq : it.value()) {
        if (!pq.is_array() || pq.size() != 2) throw ConfigError("ratio_pairs: each entry must be [p, q]");
        pairs.emplace_back(exponent_from_json(pq[0], "ratio_pairs"), exponent_from_json(pq[1], "ratio_pairs"));
      }
    }
  }
  if (j.contains("budget")) {
    const json& b = j["budget"];
    check_keys(b, {"piece_nodes", "sup_samples", "product_degree", "node_cap", "sup_tolerance"}, "budget");
    if (b.contains("piece_nodes")) c.budget.piece_nodes = scalar_of<int>(b["piece_nodes"], "budget.piece_nodes");
    if (b.contains("sup_samples")) c.budget.sup_samples = scalar_of<int>(b["sup_samples"], "budget.sup_samples");
    if (b.contains("product_degree")) c.budget.product_degree = scalar_of<int>(b["product_degree"], "budget.product_degree");
    if (b.contains("node_cap")) c.budget.node_cap = scalar_of<std::size_t>(b["node_cap"], "budget.node_cap");
    if (b.contains("sup_tolerance")) c.budget.sup_tolerance = scalar_of<double>(b["sup_tolerance"], "budget.sup_tolerance");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, {"slope", "identity", "band", "audit"}, "tolerances");
    if (t.contains("slope")) c.slope_tolerance = scalar_of<double>(t["slope"], "tolerances.slope");
    if (t.contains("identity")) c.identity_tolerance = scalar_of<double>(t["identity"], "tolerances.identity");
    if (t.contains("band")) c.band_limit = scalar_of<double>(t["band"], "tolerances.band");
    if (t.contains("audit")) c.audit_tolerance = scalar_of<double>(t["audit"], "tolerances.audit");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"csv", "json"}, "output");
    if (o.contains("csv")) c.csv_path = scalar_of<std::string>(o["csv"], "output.csv");
    if (o.contains("json")) c.json_path = scalar_of<std::string>(o["json"], "output.json");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
  for (int d : dims)
    if (d < 3 || d > 6) throw ConfigError("config: dimensions must lie in 3..6");
  for (double p : family_p)
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("config: family_p entries must be finite and > 0");
  for (const auto& [d, pairs] : ratio_pairs) {
    for (const auto& [p, q] : pairs)
      if (p.is_infinite() || !(p > ExtendedRational(0)) || !(p < q)) throw ConfigError("config: ratio pairs need 0 < p < q");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("config: n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("config: n_grid must be strictly increasing");
  }
  if (n_grid.size() < 4) throw ConfigError("config: n_grid needs at least 4 degrees");
  if (band_grid.size() < 2) throw ConfigError("config: band_grid needs at least 2 degrees");
  for (int n : band_grid)
    if (n < 1) throw ConfigError("config: band_grid entries must be >= 1");
  if (seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (!(slope_tolerance > 0) || !(identity_tolerance > 0) || !(band_limit > 0) || !(audit_tolerance > 0))
    throw ConfigError("config: tolerances must be > 0");
  if (budget.piece_nodes < 2 || budget.sup_samples < 16 || budget.product_degree < 1 || budget.node_cap < 1 ||
      !(budget.sup_tolerance > 0))
    throw ConfigError("config: invalid budget");
  if (max_degree < 1) throw ConfigError("config: max_degree must be >= 1");
  const auto& names = suite_names();
  for (const auto& s : suites)
    if (s != "all" && std::find(names.begin(), names.end(), s) == names.end())
      throw ConfigError("config: unknown suite '" + s + "'");
}

void ExperimentConfig::check_budget() const {
  auto over = [&](int n, const char* what) {
    if (n > max_degree)
      throw BudgetError(std::string("budget: ") + what + " degree " + std::to_string(n) + " exceeds max_degree " +
                        std::to_string(max_degree));
  };
  if (selected(*this, "rates") || selected(*this, "ratios")) over(n_grid.back(), "n_grid");
  if (selected(*this, "kernels") || selected(*this, "operators"))
    for (int n : band_grid) over(n + 2 * 4, "band_grid");
  if (selected(*this, "operators")) {
    for (int d : dims) {
      const std::size_t size = sphere_product_size(DimensionParams(d), operator_max_degree(d));
      if (size > budget.node_cap)
        throw BudgetError("budget: operator checks in d=" + std::to_string(d) + " need " + std::to_string(size) +
                          " sphere nodes, above the cap " + std::to_string(budget.node_cap));
    }
  }
}

// ---- reports ----

bool Report::passed() const {
  return std::none_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.failed(); });
}

void Report::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.suite, a.key) < std::tie(b.suite, b.key);
  });
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string Report::to_csv() const {
  Report sorted = *this;
  sorted.sort();
  std::ostringstream out;
  out << "suite,key,measured,predicted,tolerance,status,detail\n";
  for (const auto& r : sorted.rows)
    out << csv_field(r.suite) << ',' << csv_field(r.key) << ',' << format_number(r.measured) << ','
        << format_number(r.predicted) << ',' << format_number(r.tolerance) << ',' << r.status << ','
        << csv_field(r.detail) << '\n';
  return out.str();
}

std::string Report::to_json() const {
  Report sorted = *this;
  sorted.sort();
  json rows = json::array();
  for (const auto& r : sorted.rows) {
    json row;
    row["suite"] = r.suite;
    row["key"] = r.key;
    row["measured"] = json_number(r.measured);
    row["predicted"] = json_number(r.predicted);
    row["tolerance"] = json_number(r.tolerance);
    row["status"] = r.status;
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
  }
  json doc;
  doc["passed"] = passed();
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

// ---- helpers ----

std::vector<double> sphere_test_points(int d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(count * d);
  for (std::size_t i = 0; i < count; ++i) {
    double norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double g = gaussian(gen);
      out[i * d + k] = g;
      norm2 += g * g;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (int k = 0; k < d; ++k) out[i * d + k] *= inv;
  }
  return out;
}

BoundedFunction random_polynomial(int d, int degree, std::uint64_t seed) {
  if (degree < 0) throw DomainError("random_polynomial: negative degree");
  std::mt19937_64 gen(seed);
  auto factors = std::make_shared<std::vector<double>>();  // a_1..a_d, b per factor
  for (int j = 0; j < degree; ++j) {
    for (int k = 0; k < d; ++k) factors->push_back(2.0 * uniform01(gen) - 1.0);
    factors->push_back(0.5 + uniform01(gen));
  }
  return {[factors, d, degree](std::span<const double> x) {
            double v = 1.0;
            for (int j = 0; j < degree; ++j) {
              const double* f = factors->data() + static_cast<std::size_t>(j) * (d + 1);
              double s = f[d];
              for (int k = 0; k < d; ++k) s += f[k] * x[k];
              v *= s;
            }
            return v;
          },
          degree};
}

double relative_difference(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw DomainError("relative_difference: size mismatch");
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    diff = std::max(diff, std::fabs(f[i] - g[i]));
    scale = std::max(scale, std::fabs(g[i]));
  }
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

// ---- checks ----

std::vector<ReportRow> check_quadrature(const ExperimentConfig& cfg, int d) {
  const DimensionParams dims(d);
  std::vector<ReportRow> rows;
  const std::string ds = "d=" + std::to_string(d);
  for (int degree : {4, 16, 32}) {
    const QuadratureRule rule = sphere_product_rule(dims, degree, cfg.budget.node_cap);
    const MomentAudit audit = moment_audit(rule, cfg.audit_tolerance);
    rows.push_back(make_row("quadrature", "sphere-audit " + ds + " degree=" + std::to_string(degree),
                            audit.max_relative_error, 0.0, cfg.audit_tolerance, audit.passed,
                            "moments=" + std::to_string(audit.moments_checked)));
    const double area_err = std::fabs(rule.total_measure() - sphere_area(d)) / sphere_area(d);
    rows.push_back(make_row("quadrature", "sphere-area " + ds + " degree=" + std::to_string(degree), area_err, 0.0,
                            1e-12, area_err <= 1e-12, "area=" + format_number(rule.total_measure())));
  }
  const double a = dims.zonal_alpha();
  for (int nodes : {8, 64, 256}) {
    const QuadratureRule rule = gauss_jacobi(nodes, a + nodes / 8, a);
    const MomentAudit audit = moment_audit(rule, cfg.audit_tolerance);
    rows.push_back(make_row("quadrature", "jacobi-audit " + ds + " nodes=" + std::to_string(nodes),
                            audit.max_relative_error, 0.0, cfg.audit_tolerance, audit.passed,
                            "alpha=" + format_number(rule.alpha) + " beta=" + format_number(rule.beta)));
  }
  return rows;
}

std::vector<ReportRow> check_kernel_band(const ExperimentConfig& cfg, int d) {
  const DimensionParams dims(d);
  const std::size_t m = 20001;
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = std::cos(kPi * static_cast<double>(i) / (m - 1));
  t.front() = 1.0;
  t.back() = -1.0;
  std::vector<double> k;
  for (int n : cfg.band_grid) {
    const auto v = zonal_series(dims, phi_kernel_coefficients(dims, n), t);
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::fabs(x));
    k.push_back(sup / std::pow(n, dims.lambda()));
  }
  const double ratio = max_over_min(k);
  return {make_row("kernels", "phi-band d=" + std::to_string(d), ratio, 1.0, cfg.band_limit, ratio <= cfg.band_limit,
                   "K_n=" + join_numbers(k))};
}

std::vector<ReportRow> check_difference_band(const ExperimentConfig& cfg, int d) {
  const DimensionParams dims(d);
  const int ell = d - 2;
  const std::size_t m = 10001;
  std::vector<double> theta(m - 1), t(m - 1);
  for (std::size_t i = 1; i < m; ++i) {
    theta[i - 1] = 0.5 * kPi * static_cast<double>(i) / (m - 1);
    t[i - 1] = std::cos(theta[i - 1]);
  }
  std::vector<double> k;
  for (int n : cfg.band_grid) {
    const auto v = zonal_series(dims, delta2_coefficients(dims, ell, n), t);
    double sup = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      sup = std::max(sup, std::fabs(v[i]) * std::pow(theta[i], -ell) * std::pow(1.0 + n * theta[i], dims.lambda()));
    k.push_back(sup);
  }
  const double ratio = *std::max_element(k.begin(), k.end()) / median(k);
  return {make_row("kernels", "difference-band d=" + std::to_string(d), ratio, 1.0, cfg.band_limit,
                   ratio <= cfg.band_limit, "M_n=" + join_numbers(k))};
}

std::vector<ReportRow> check_reproduction(const ExperimentConfig& cfg, int d, const std::vector<int>& degrees) {
  const DimensionParams dims(d);
  const auto points = sphere_test_points(d, 200, 20261018 + d);
  std::vector<ReportRow> rows;
  for (int n : degrees) {
    for (std::uint64_t seed : cfg.seeds) {
      const HarmonicCombination y = random_harmonic(dims, n, seed);
      const BoundedFunction f = harmonic_function(y);
      const AppliedOperator tn = t_operator(dims, n, f, cfg.budget.node_cap);
      const double err = relative_difference(sample(tn, d, points), sample(f.f, d, points));
      rows.push_back(make_row("operators",
                              "reproduction d=" + std::to_string(d) + " n=" + std::to_string(n) +
                                  " seed=" + std::to_string(seed),
                              err, 0.0, cfg.identity_tolerance, err <= cfg.identity_tolerance,
                              "nodes=" + std::to_string(tn.rule().size())));
    }
  }
  return rows;
}

std::vector<ReportRow> check_expansion(const ExperimentConfig& cfg, int d, int polynomials, int max_degree) {
  const DimensionParams dims(d);
  const auto points = sphere_test_points(d, 60, 7 + d);
  std::vector<ReportRow> rows;
  for (int i = 0; i < polynomials; ++i) {
    const int n = 1 + 2 * i;
    const BoundedFunction f = random_polynomial(d, max_degree, 1000 + i);
    const auto lhs = sample(t_operator(dims, n, f, cfg.budget.node_cap), d, points);
    std::vector<double> rhs(lhs.size(), 0.0);
    for (int j = 0; j <= d - 2; ++j) {
      const double c = (j % 2 ? -1.0 : 1.0) * binomial(d - 2, j) *
                       std::exp(log_c_n_constant(dims, n) - log_c_n_constant(dims, n + 2 * j));
      const auto pj = sample(project(dims, n + 2 * j, f, cfg.budget.node_cap), d, points);
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += c * pj[k];
    }
    const double err = relative_difference(lhs, rhs);
    rows.push_back(make_row("operators",
                            "expansion d=" + std::to_string(d) + " n=" + std::to_string(n) + " poly=" + std::to_string(i),
                            err, 0.0, cfg.identity_tolerance, err <= cfg.identity_tolerance,
                            "degree=" + std::to_string(max_degree)));
  }
  return rows;
}

std::vector<ReportRow> check_projection_identities(const ExperimentConfig& cfg, int d) {
  const DimensionParams dims(d);
  const auto points = sphere_test_points(d, 60, 11 + d);
  const std::string ds = "d=" + std::to_string(d);
  const double tol = cfg.identity_tolerance;
  std::vector<ReportRow> rows;
  const BoundedFunction f = random_polynomial(d, 12, 99);
  for (int k : {3, 6}) {
    const AppliedOperator pk = project(dims, k, f, cfg.budget.node_cap);
    const auto base = sample(pk, d, points);
    const auto twice = sample(project(dims, k, pk.as_function(), cfg.budget.node_cap), d, points);
    const double idem = relative_difference(twice, base);
    rows.push_back(make_row("operators", "idempotence " + ds + " k=" + std::to_string(k), idem, 0.0, tol, idem <= tol));
    double worst = 0.0;
    for (int m : {k - 1, k + 1, k + 2}) {
      const auto other = sample(project(dims, m, pk.as_function(), cfg.budget.node_cap), d, points);
      double mx = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < other.size(); ++i) {
        mx = std::max(mx, std::fabs(other[i]));
        scale = std::max(scale, std::fabs(base[i]));
      }
      worst = std::max(worst, mx / scale);
    }
    rows.push_back(make_row("operators", "annihilation " + ds + " k=" + std::to_string(k), worst, 0.0, tol, worst <= tol));
  }
  // Zonal g_k is reproduced by proj_k and annihilated by proj_m, m != k.
  for (int k : {5, 12}) {
    const HarmonicSpec g = HarmonicSpec::zonal(dims, k, SpherePoint::normalized(std::vector<double>(d, 1.0)));
    const BoundedFunction gf{[g](std::span<const double> x) { return evaluate(g, x).real(); }, k};
    const auto gv = sample(gf.f, d, points);
    const double err = relative_difference(sample(project(dims, k, gf, cfg.budget.node_cap), d, points), gv);
    rows.push_back(make_row("operators", "zonal-reproduction " + ds + " k=" + std::to_string(k), err, 0.0, tol, err <= tol));
  }
  return rows;
}

std::vector<ReportRow> check_growth_band(const ExperimentConfig& cfg, int d, const std::vector<int>& degrees) {
  const DimensionParams dims(d);
  const double a = dims.zonal_alpha();
  std::vector<double> s = chebyshev_abscissae(129);
  std::vector<double> k;
  for (int n : degrees) {
    const ZonalOperator op(dims, OperatorKind::TOperator, n);
    // Test inputs +-Phi_n; by linearity both give the same constant.
    auto g = [&op](double t) { return op.kernel(t); };
    const auto tg = zonal_convolve(op, g, op.kernel_degree(), s);
    double sup = 0.0;
    for (double v : tg) sup = std::max(sup, std::fabs(v));
    const QuadratureRule rule = gauss_jacobi(4 * (op.kernel_degree() + 16), a, a);
    std::vector<double> vals(rule.size());
    op.kernel(rule.nodes, vals);
    for (double& v : vals) v = std::fabs(v);
    const double l1 = sphere_area(d - 1) * integrate_values(rule, vals);
    k.push_back(sup / (std::pow(n, dims.lambda()) * l1));
  }
  const double ratio = max_over_min(k);
  return {make_row("operators", "growth-band d=" + std::to_string(d), ratio, 1.0, cfg.band_limit,
                   ratio <= cfg.band_limit, "K_n=" + join_numbers(k))};
}

namespace {

HarmonicSpec family_member(const DimensionParams& dims, Family family, int n) {
  if (family == Family::Power) return HarmonicSpec::power(dims, n);
  if (family == Family::Zonal) return HarmonicSpec::zonal(dims, n);
  throw DomainError("family rates apply to the power and zonal families");
}

Witness witness_of(Family f) { return f == Family::Power ? Witness::Power : Witness::Zonal; }

}  // namespace

ReportRow verify_family_rate(const ExperimentConfig& cfg, int d, Family family, const ExtendedRational& p) {
  const DimensionParams dims(d);
  const FamilySlope pred = family_slope(witness_of(family), d, p);
  const std::string key = std::string("family d=") + std::to_string(d) + " " + to_string(family) + " p=" + str_of(p);
  if (pred.critical) {
    ReportRow row{"rates", key, std::numeric_limits<double>::quiet_NaN(), pred.slope.to_double(), cfg.slope_tolerance,
                  "refused-log-critical", "critical exponent carries a log factor"};
    return row;
  }
  std::vector<double> ns, values;
  for (int n : cfg.n_grid) {
    ns.push_back(n);
    values.push_back(lp_norm(family_member(dims, family, n), p.to_double(), cfg.budget).value);
  }
  const SlopeFit fit = fit_slope(ns, values);
  const double err = std::fabs(fit.slope - pred.slope.to_double());
  return make_row("rates", key, fit.slope, pred.slope.to_double(), cfg.slope_tolerance, err <= cfg.slope_tolerance,
                  "max_residual=" + format_number(fit.max_residual));
}

std::vector<ReportRow> check_zonal_rates(const ExperimentConfig& cfg, int d) {
  const Rational lam(d - 2, 2);
  const Rational critical = Rational(2) + Rational(1) / lam;
  return {verify_family_rate(cfg, d, Family::Zonal, ExtendedRational(Rational(2) * critical)),
          verify_family_rate(cfg, d, Family::Zonal, ExtendedRational(2))};
}

ReportRow verify_ratio_lower_bounds(const ExperimentConfig& cfg, int d, const ExtendedRational& p,
                                    const ExtendedRational& q) {
  const DimensionParams dims(d);
  const RegimeResult r = classify(d, p, q);
  const std::string key = "ratio d=" + std::to_string(d) + " p=" + str_of(p) + " q=" + str_of(q);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (r.regime == Regime::Open)
    return {"ratios", key, nan, nan, cfg.slope_tolerance, "refused-open",
            "open region; nikolskii bound " + format_number(r.nikolskii.to_double())};
  const Family family = r.witness == Witness::Power ? Family::Power : Family::Zonal;
  if (family == Family::Zonal &&
      (family_slope(Witness::Zonal, d, p).critical || family_slope(Witness::Zonal, d, q).critical))
    return {"ratios", key, nan, r.exponent_value(), cfg.slope_tolerance, "refused-log-critical",
            std::string("regime ") + to_string(r.regime) + "; zonal witness at its critical exponent"};
  std::vector<double> ns, values;
  for (int n : cfg.n_grid) {
    const HarmonicSpec spec = family_member(dims, family, n);
    ns.push_back(n);
    values.push_back(lp_norm(spec, q.to_double(), cfg.budget).value / lp_norm(spec, p.to_double(), cfg.budget).value);
  }
  const SlopeFit fit = fit_slope(ns, values);
  const double err = std::fabs(fit.slope - r.exponent_value());
  return make_row("ratios", key, fit.slope, r.exponent_value(), cfg.slope_tolerance, err <= cfg.slope_tolerance,
                  std::string("regime ") + to_string(r.regime) + " witness " + to_string(r.witness) +
                      " max_residual=" + format_number(fit.max_residual));
}

std::vector<ReportRow> check_exponent_table(int d) {
  const std::string ds = "d=" + std::to_string(d);
  const auto grid = default_exponent_grid(d);
  const Rational lam(d - 2, 2);
  const ExtendedRational p_hi(Rational(2) + Rational(1) / lam), q_hi(Rational(2) + Rational(2) / lam);
  std::size_t points = 0, partition_bad = 0, continuity_bad = 0, domination_bad = 0, witness_bad = 0, mono_bad = 0;
  double continuity_err = 0.0;
  std::map<std::pair<ExtendedRational, ExtendedRational>, RegimeResult> results;
  for (const auto& p : grid) {
    if (p.is_infinite()) continue;
    for (const auto& q : grid) {
      if (!(p < q)) continue;
      ++points;
      const RegimeResult r = classify(d, p, q);
      results.emplace(std::make_pair(p, q), r);
      if (r.regime == Regime::Open) {
        const bool inside = d >= 4 && ExtendedRational(2) < p && p <= p_hi && q < q_hi;
        if (!inside) ++partition_bad;
        continue;
      }
      const auto cells = admissible_regimes(d, p, q);
      if (std::find(cells.begin(), cells.end(), r.regime) == cells.end()) ++partition_bad;
      for (Regime other : cells) {
        if (other == Regime::Open) continue;
        const double e = std::fabs((regime_formula(other, d, p, q) - *r.exponent).to_double());
        continuity_err = std::max(continuity_err, e);
        if (e > 1e-12) ++continuity_bad;
      }
      if (*r.exponent > r.nikolskii) ++domination_bad;
      const FamilySlope sp = family_slope(r.witness, d, p), sq = family_slope(r.witness, d, q);
      if (!sp.critical && !sq.critical && sq.slope - sp.slope != *r.exponent) ++witness_bad;
    }
  }
  // Within a regime: nonincreasing in p at fixed q, nondecreasing in q at fixed p.
  for (const auto& [pq, r] : results) {
    if (!r.exponent) continue;
    for (const auto& [pq2, r2] : results) {
      if (r2.regime != r.regime || !r2.exponent) continue;
      if (pq2.second == pq.second && pq.first < pq2.first && *r2.exponent > *r.exponent) ++mono_bad;
      if (pq2.first == pq.first && pq.second < pq2.second && *r2.exponent < *r.exponent) ++mono_bad;
    }
  }
  std::vector<ReportRow> rows;
  const std::string n = " points=" + std::to_string(points);
  rows.push_back(make_row("exponents", "partition " + ds, static_cast<double>(partition_bad), 0.0, 0.0,
                          partition_bad == 0 && points >= 400, "violations" + n));
  rows.push_back(make_row("exponents", "continuity " + ds, continuity_err, 0.0, 1e-12, continuity_bad == 0,
                          "violations=" + std::to_string(continuity_bad)));
  rows.push_back(make_row("exponents", "domination " + ds, static_cast<double>(domination_bad), 0.0, 0.0,
                          domination_bad == 0, "violations" + n));
  rows.push_back(make_row("exponents", "monotonicity " + ds, static_cast<double>(mono_bad), 0.0, 0.0, mono_bad == 0,
                          "violations" + n));
  rows.push_back(make_row("exponents", "witness " + ds, static_cast<double>(witness_bad), 0.0, 0.0, witness_bad == 0,
                          "violations" + n));
  if (d == 3) {
    const RegimeResult r = classify(3, ExtendedRational(1), ExtendedRational(2));
    const double gap = (r.nikolskii - *r.exponent).to_double();
    rows.push_back(make_row("exponents", "gap d=3 p=1 q=2", gap, 0.75, 1e-12, std::fabs(gap - 0.75) <= 1e-12,
                            "exponent=" + r.exponent->str() + " nikolskii=" + r.nikolskii.str()));
  }
  return rows;
}

std::vector<ReportRow> check_restriction_sweep(int d, int grid) {
  if (grid < 2) throw DomainError("restriction sweep: grid must be >= 2");
  const Rational ip0(d + 1, 2 * d);
  const Rational slope(d + 1, d - 1);
  std::size_t bad = 0, outside = 0;
  Rational worst = Rational(-1000);
  for (int i = 0; i < grid; ++i) {
    const Rational ip = ip0 + (Rational(1) - ip0) * Rational(i, grid - 1);
    const Rational iq_min = slope * (Rational(1) - ip);
    for (int j = 0; j < grid; ++j) {
      const Rational iq = iq_min + Rational(2 * j, grid - 1);
      const ExtendedRational p(Rational(1) / ip);
      const ExtendedRational q = iq.is_zero() ? ExtendedRational::infinity() : ExtendedRational(Rational(1) / iq);
      if (!in_restriction_range(d, p, q)) ++outside;
      const RestrictionResult r = restriction_exponent(d, p, q);
      if (!r.bounded) ++bad;
      worst = std::max(worst, r.exponent);
    }
  }
  const ExtendedRational pb(Rational(2 * d, d + 1));
  const ExtendedRational qb(Rational(d - 1, d + 1) * pb.conjugate().value());
  const double boundary = restriction_exponent(d, pb, qb).exponent.to_double();
  const std::string ds = "d=" + std::to_string(d);
  return {make_row("exponents", "restriction-sweep " + ds, worst.to_double(), 0.0, 0.0, bad == 0 && outside == 0,
                   "points=" + std::to_string(grid * grid) + " unbounded=" + std::to_string(bad)),
          make_row("exponents", "restriction-boundary " + ds, boundary, 0.0, 1e-12, std::fabs(boundary) <= 1e-12,
                   "p=" + pb.str() + " q=" + qb.str())};
}

std::vector<ReportRow> check_pitt(int d) {
  const double expected = std::pow(2.0 * kPi, 0.5 * d);
  const double value = pitt_constant(d, 0, 2.0, RatioSource::Empirical, 1.0).value;
  const double err = std::fabs(value - expected) / expected;
  return {make_row("exponents", "pitt d=" + std::to_string(d) + " k=0 p=2", value, expected, 1e-12, err <= 1e-12)};
}

Report run_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  cfg.check_budget();
  Report report;
  auto add = [&report](std::vector<ReportRow> rows) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  };
  for (int d : cfg.dims) {
    if (selected(cfg, "quadrature")) add(check_quadrature(cfg, d));
    if (selected(cfg, "kernels")) {
      add(check_kernel_band(cfg, d));
      add(check_difference_band(cfg, d));
    }
    if (selected(cfg, "operators")) {
      add(check_reproduction(cfg, d, reproduction_degrees(d)));
      if (d <= 4) add(check_expansion(cfg, d, 10, 24));
      add(check_projection_identities(cfg, d));
      std::vector<int> growth;
      for (int n : cfg.band_grid)
        if (n <= 256) growth.push_back(n);
      if (growth.size() >= 2) add(check_growth_band(cfg, d, growth));
    }
    if (selected(cfg, "rates")) {
      for (double p : cfg.family_p)
        report.rows.push_back(verify_family_rate(cfg, d, Family::Power, ExtendedRational::from_double(p)));
      add(check_zonal_rates(cfg, d));
    }
    if (selected(cfg, "ratios")) {
      auto it = cfg.ratio_pairs.find(d);
      const auto pairs = it != cfg.ratio_pairs.end() ? it->second : default_ratio_pairs(d);
      for (const auto& [p, q] : pairs) report.rows.push_back(verify_ratio_lower_bounds(cfg, d, p, q));
    }
    if (selected(cfg, "exponents")) {
      add(check_exponent_table(d));
      add(check_restriction_sweep(d));
      add(check_pitt(d));
    }
  }
  report.sort();
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  };
  if (!cfg.csv_path.empty()) write(cfg.csv_path, report.to_csv());
  if (!cfg.json_path.empty()) write(cfg.json_path, report.to_json());
  return report;
}

}  // namespace revholder
