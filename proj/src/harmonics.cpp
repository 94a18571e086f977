#include "revholder/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

namespace revholder {
namespace {

constexpr double kPi = std::numbers::pi;

void check_tuple(const DimensionParams& dims, const std::vector<int>& tuple) {
  if (static_cast<int>(tuple.size()) != dims.d() - 1)
    throw DomainError("basis tuple must have d-1 = " + std::to_string(dims.d() - 1) + " entries");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0) throw DomainError("basis tuple entries must be nonnegative");
    if (i > 0 && tuple[i] > tuple[i - 1]) throw DomainError("basis tuple must be nonincreasing");
  }
}

// Weight exponent (d-3-k)/2 of polar level k.
double level_weight(int d, int k) { return 0.5 * (d - 3 - k); }

// log of int_{-1}^{1} (1-t^2)^a [P_k^{(a,a)}(t)]^2 dt.
double log_jacobi_norm2(int k, double a) {
  return (2.0 * a + 1.0) * std::log(2.0) - std::log(2.0 * k + 2.0 * a + 1.0) +
         2.0 * std::lgamma(k + a + 1.0) - std::lgamma(k + 2.0 * a + 1.0) - std::lgamma(k + 1.0);
}

// Polar coordinates (t_k, s_k), k = 0..d-3, and the azimuth of a point.
struct Angles {
  std::vector<double> t;
  std::vector<double> s;
  double phi = 0.0;
};

Angles angles_of(int d, std::span<const double> x) {
  if (static_cast<int>(x.size()) != d) throw DomainError("point dimension does not match d");
  std::vector<double> cum(d + 1, 0.0);
  for (int i = 0; i < d; ++i) cum[i + 1] = cum[i] + x[i] * x[i];
  Angles a;
  a.t.resize(d - 2);
  a.s.resize(d - 2);
  for (int k = 0; k < d - 2; ++k) {
    const double rk = std::sqrt(cum[d - k]);
    const double rnext = std::sqrt(cum[d - k - 1]);
    if (rk > 1e-300) {
      a.t[k] = std::clamp(x[d - 1 - k] / rk, -1.0, 1.0);
      a.s[k] = std::min(rnext / rk, 1.0);
    } else {
      a.t[k] = 1.0;
      a.s[k] = 0.0;
    }
  }
  a.phi = std::atan2(x[1], x[0]);
  return a;
}

double int_pow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Complex basis element at a point, unnormalized.
std::complex<double> basis_value(int d, const std::vector<int>& tuple, int sign, std::span<const double> x) {
  const Angles ang = angles_of(d, x);
  double mag = 1.0;
  for (int k = 0; k <= d - 3; ++k) {
    const int mk = tuple[k];
    const int mnext = tuple[k + 1];
    const double a = mnext + level_weight(d, k);
    mag *= int_pow(ang.s[k], mnext) * jacobi_eval({mk - mnext, a, a}, ang.t[k]);
  }
  const double arg = sign * tuple[d - 2] * ang.phi;
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

void enumerate_tuples(int d, int n, std::vector<std::vector<int>>& out) {
  std::vector<int> tuple(d - 1, 0);
  tuple[0] = n;
  std::function<void(int)> rec = [&](int level) {
    if (level == d - 1) {
      out.push_back(tuple);
      return;
    }
    for (int m = 0; m <= tuple[level - 1]; ++m) {
      tuple[level] = m;
      rec(level + 1);
    }
  };
  if (d - 1 == 1) {
    out.push_back(tuple);
    return;
  }
  rec(1);
}

// |x|^p for finite p, with 0^p = 0.
double abs_pow(double v, double p) {
  const double a = std::fabs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

bool is_even_integer(double p) {
  return p > 0 && std::floor(p) == p && std::fmod(p, 2.0) == 0.0 && p < 1e6;
}

// Golden-section search for the maximum of g on [lo, hi].
struct Peak {
  double x;
  double value;
  double slack;
};

Peak golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double gc = g(c), ge = g(e);
  for (int iter = 0; iter < 200 && (b - a) > 1e-14 * std::max(1.0, std::fabs(a)); ++iter) {
    if (gc >= ge) {
      b = e;
      e = c;
      ge = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = e;
      gc = ge;
      e = a + inv_phi * (b - a);
      ge = g(e);
    }
  }
  const double ga = g(a), gb = g(b);
  const double best = std::max({ga, gb, gc, ge});
  const double worst = std::min({ga, gb, gc, ge});
  double x = a;
  if (gb == best) x = b;
  if (gc == best) x = c;
  if (ge == best) x = e;
  const double slack = best > 0 ? (best - worst) / best : 0.0;
  if (!std::isfinite(best)) throw NonFiniteError("sup refinement: non-finite profile value");
  return {x, best, slack};
}

}  // namespace

const char* to_string(Family family) {
  switch (family) {
    case Family::Basis: return "basis";
    case Family::Power: return "power";
    case Family::Zonal: return "zonal";
  }
  return "unknown";
}

const char* to_string(NormMethod method) {
  switch (method) {
    case NormMethod::ClosedForm: return "closed-form";
    case NormMethod::Factorized1D: return "factorized-1d";
    case NormMethod::ProductQuadrature: return "product-quadrature";
    case NormMethod::SupSampling: return "sup-sampling";
  }
  return "unknown";
}

HarmonicSpec::HarmonicSpec(DimensionParams dims, Family family, int degree, std::vector<int> tuple, int sign,
                           SpherePoint pole)
    : dims_(dims), family_(family), degree_(degree), tuple_(std::move(tuple)), sign_(sign), pole_(std::move(pole)) {}

HarmonicSpec HarmonicSpec::basis(const DimensionParams& dims, std::vector<int> tuple, int sign) {
  check_tuple(dims, tuple);
  if (sign != 1 && sign != -1) throw DomainError("basis sign must be +1 or -1");
  const int n = tuple[0];
  return HarmonicSpec(dims, Family::Basis, n, std::move(tuple), sign, SpherePoint::axis(dims.d(), dims.d() - 1));
}

HarmonicSpec HarmonicSpec::power(const DimensionParams& dims, int n) {
  if (n < 0) throw DomainError("power family: negative degree");
  return HarmonicSpec(dims, Family::Power, n, {}, 1, SpherePoint::axis(dims.d(), dims.d() - 1));
}

HarmonicSpec HarmonicSpec::zonal(const DimensionParams& dims, int n, std::optional<SpherePoint> pole) {
  if (n < 0) throw DomainError("zonal family: negative degree");
  SpherePoint e = pole ? *pole : SpherePoint::axis(dims.d(), dims.d() - 1);
  if (e.dim() != dims.d()) throw DomainError("zonal family: pole dimension does not match d");
  return HarmonicSpec(dims, Family::Zonal, n, {}, 1, std::move(e));
}

HarmonicSpec HarmonicSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("harmonic spec '" + text + "': expected <family>:<params>");
  const std::string family = text.substr(0, colon);
  std::map<std::string, std::vector<std::string>> params;
  std::string current;
  std::stringstream ss(text.substr(colon + 1));
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      current = token.substr(0, eq);
      if (params.count(current)) throw ConfigError("harmonic spec '" + text + "': duplicate key " + current);
      params[current].push_back(token.substr(eq + 1));
    } else {
      if (current.empty()) throw ConfigError("harmonic spec '" + text + "': value without key");
      params[current].push_back(token);
    }
  }
  auto single_int = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || it->second.size() != 1)
      throw ConfigError("harmonic spec '" + text + "': expected a single value for " + key);
    try {
      std::size_t used = 0;
      int v = std::stoi(it->second[0], &used);
      if (used != it->second[0].size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("harmonic spec '" + text + "': bad integer for " + key);
    }
  };
  try {
    const DimensionParams dims(single_int("d"));
    if (family == "zonal" || family == "power") {
      for (const auto& [key, vals] : params)
        if (key != "d" && key != "n" && !(family == "zonal" && key == "pole"))
          throw ConfigError("harmonic spec '" + text + "': unknown key " + key);
      const int n = single_int("n");
      if (family == "power") return power(dims, n);
      std::optional<SpherePoint> pole;
      if (auto it = params.find("pole"); it != params.end()) {
        std::vector<double> v;
        for (const auto& s : it->second) v.push_back(std::stod(s));
        if (static_cast<int>(v.size()) != dims.d()) throw ConfigError("harmonic spec '" + text + "': pole needs d coordinates");
        pole = SpherePoint::normalized(std::move(v));
      }
      return zonal(dims, n, pole);
    }
    if (family == "basis") {
      for (const auto& [key, vals] : params)
        if (key != "d" && key != "m" && key != "sign")
          throw ConfigError("harmonic spec '" + text + "': unknown key " + key);
      auto it = params.find("m");
      if (it == params.end()) throw ConfigError("harmonic spec '" + text + "': missing m");
      std::vector<int> tuple;
      for (const auto& s : it->second) tuple.push_back(std::stoi(s));
      int sign = 1;
      if (auto sit = params.find("sign"); sit != params.end()) {
        const std::string& sv = sit->second.at(0);
        if (sv == "+" || sv == "+1" || sv == "1") sign = 1;
        else if (sv == "-" || sv == "-1") sign = -1;
        else throw ConfigError("harmonic spec '" + text + "': sign must be + or -");
      }
      return basis(dims, std::move(tuple), sign);
    }
  } catch (const DomainError& e) {
    throw ConfigError("harmonic spec '" + text + "': " + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("harmonic spec '" + text + "': malformed number");
  }
  throw ConfigError("harmonic spec '" + text + "': unknown family '" + family + "'");
}

std::string HarmonicSpec::to_string() const {
  std::ostringstream out;
  out << revholder::to_string(family_) << ":d=" << dims_.d();
  switch (family_) {
    case Family::Power: out << ",n=" << degree_; break;
    case Family::Zonal: {
      out << ",n=" << degree_;
      if (pole_.coords()[dims_.d() - 1] != 1.0) {
        out << ",pole=";
        out.precision(17);
        for (int i = 0; i < dims_.d(); ++i) out << (i ? "," : "") << pole_[i];
      }
      break;
    }
    case Family::Basis: {
      out << ",m=";
      for (std::size_t i = 0; i < tuple_.size(); ++i) out << (i ? "," : "") << tuple_[i];
      out << ",sign=" << (sign_ > 0 ? "+" : "-");
      break;
    }
  }
  return out.str();
}

std::complex<double> evaluate(const HarmonicSpec& spec, std::span<const double> x) {
  const int d = spec.dims().d();
  if (static_cast<int>(x.size()) != d) throw DomainError("evaluate: point dimension does not match d");
  switch (spec.family()) {
    case Family::Zonal: {
      const double a = spec.dims().zonal_alpha();
      const double t = std::clamp(spec.pole().dot(x), -1.0, 1.0);
      return jacobi_eval({spec.degree(), a, a}, t);
    }
    case Family::Power: {
      std::complex<double> z(x[0], x[1]), r(1.0, 0.0);
      for (int i = 0; i < spec.degree(); ++i) r *= z;
      return r;
    }
    case Family::Basis: return basis_value(d, spec.tuple(), spec.sign(), x);
  }
  return 0.0;
}

std::int64_t dimension_of_harmonic_space(const DimensionParams& dims, int n) {
  if (n < 0) throw DomainError("dimension_of_harmonic_space: negative degree");
  auto choose = [](std::int64_t top, std::int64_t k) -> std::int64_t {
    if (top < k || k < 0) return 0;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (top - k + i) / i;
    return r;
  };
  const int d = dims.d();
  return choose(n + d - 1, d - 1) - choose(n + d - 3, d - 1);
}

std::vector<RealBasisFunction> real_basis(const DimensionParams& dims, int n) {
  if (n < 0) throw DomainError("real_basis: negative degree");
  const int d = dims.d();
  std::vector<std::vector<int>> tuples;
  enumerate_tuples(d, n, tuples);
  std::vector<RealBasisFunction> out;
  for (const auto& tuple : tuples) {
    double log_norm2 = 0.0;
    for (int k = 0; k <= d - 3; ++k) {
      const double a = tuple[k + 1] + level_weight(d, k);
      log_norm2 += log_jacobi_norm2(tuple[k] - tuple[k + 1], a);
    }
    const int m_last = tuple[d - 2];
    const double azimuth = m_last == 0 ? 2.0 * kPi : kPi;
    const double normalization = std::exp(-0.5 * (log_norm2 + std::log(azimuth)));
    out.push_back({tuple, false, normalization});
    if (m_last > 0) out.push_back({tuple, true, normalization});
  }
  return out;
}

BasisTable::BasisTable(const DimensionParams& dims, int n) : dims_(dims), n_(n), functions_(real_basis(dims, n)) {}

void BasisTable::evaluate(std::span<const double> x, std::span<double> out) const {
  const int d = dims_.d();
  const int n = n_;
  if (out.size() != functions_.size()) throw DomainError("BasisTable::evaluate: output size mismatch");
  const Angles ang = angles_of(d, x);
  const std::size_t stride = static_cast<std::size_t>(n + 1);
  // level[k][m_k * stride + m_{k+1}] = s^{m_{k+1}} P_{m_k - m_{k+1}}^{(a,a)}(t), a = m_{k+1} + w_k.
  std::vector<std::vector<double>> level(d - 2, std::vector<double>(stride * stride, 0.0));
  for (int k = 0; k <= d - 3; ++k) {
    const double t = ang.t[k];
    const double s = ang.s[k];
    const double w = level_weight(d, k);
    double s_pow = 1.0;
    for (int j = 0; j <= n; ++j) {
      const double a = j + w;
      const double ab = 2.0 * a;
      // P_0..P_{n-j} of index (a,a) by the same recurrence as jacobi_eval.
      double prev = 0.0, cur = 1.0;
      level[k][static_cast<std::size_t>(j) * stride + j] = s_pow;
      for (int deg = 0; deg < n - j; ++deg) {
        double next;
        if (deg == 0) {
          next = 0.5 * (ab + 2.0) * t;
        } else {
          const double sdeg = 2.0 * deg + ab;
          const double denom = 2.0 * (deg + 1) * (deg + ab + 1.0) * sdeg;
          next = ((sdeg + 1.0) * (sdeg + 2.0) * sdeg * t * cur - 2.0 * (deg + a) * (deg + a) * (sdeg + 2.0) * prev) / denom;
        }
        prev = cur;
        cur = next;
        level[k][static_cast<std::size_t>(j + deg + 1) * stride + j] = s_pow * cur;
      }
      s_pow *= s;
    }
  }
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    const auto& fn = functions_[f];
    double v = fn.normalization;
    for (int k = 0; k <= d - 3; ++k) v *= level[k][static_cast<std::size_t>(fn.tuple[k]) * stride + fn.tuple[k + 1]];
    const double arg = fn.tuple[d - 2] * ang.phi;
    v *= fn.imaginary ? std::sin(arg) : std::cos(arg);
    out[f] = v;
  }
}

HarmonicCombination::HarmonicCombination(const DimensionParams& dims, int n, std::vector<double> coefficients)
    : table_(dims, n), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != table_.functions().size())
    throw DomainError("HarmonicCombination: expected " + std::to_string(table_.functions().size()) + " coefficients");
}

double HarmonicCombination::operator()(std::span<const double> x) const {
  std::vector<double> vals(coefficients_.size());
  table_.evaluate(x, vals);
  double s = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) s += coefficients_[i] * vals[i];
  return s;
}

std::vector<double> HarmonicCombination::evaluate_on(const QuadratureRule& rule) const {
  if (rule.point_dim != dims().d()) throw DomainError("evaluate_on: rule dimension mismatch");
  std::vector<double> out(rule.size());
  std::vector<double> vals(coefficients_.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    table_.evaluate(rule.point(i), vals);
    double s = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j) s += coefficients_[j] * vals[j];
    out[i] = s;
  }
  return out;
}

HarmonicCombination random_harmonic(const DimensionParams& dims, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::size_t count = real_basis(dims, n).size();
  std::vector<double> coeffs(count);
  for (double& c : coeffs) {
    // 53 random bits mapped to [-1, 1); independent of the library's distributions.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    c = 2.0 * u - 1.0;
  }
  return HarmonicCombination(dims, n, std::move(coeffs));
}

double factor_abs_power_integral(int k, int m, double w, double p, int piece_nodes) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("factor integral: p must be finite and > 0");
  if (k < 0 || m < 0) throw DomainError("factor integral: negative index");
  const double a = m + w;
  const double end_exp = 0.5 * m * p + w;

  std::vector<double> breaks{-1.0};
  if (k > 0) {
    const QuadratureRule roots = gauss_jacobi(k, a, a);
    breaks.insert(breaks.end(), roots.nodes.begin(), roots.nodes.end());
  }
  breaks.push_back(1.0);
  const std::size_t pieces = breaks.size() - 1;

  std::map<std::pair<double, double>, QuadratureRule> rules;
  auto rule_for = [&](double ea, double eb) -> const QuadratureRule& {
    auto key = std::make_pair(ea, eb);
    auto it = rules.find(key);
    if (it == rules.end()) it = rules.emplace(key, gauss_jacobi(piece_nodes, eb, ea)).first;
    return it->second;
  };

  // Nodes of all pieces, evaluated in one batch.
  std::vector<double> t_all, base_all;
  std::vector<std::size_t> offsets{0};
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double ea = i == 0 ? end_exp : p;
    const double eb = i + 1 == pieces ? end_exp : p;
    const QuadratureRule& r = rule_for(ea, eb);
    for (double s : r.nodes) t_all.push_back(lo + 0.5 * (hi - lo) * (1.0 + s));
    offsets.push_back(t_all.size());
  }
  const JacobiRecurrence rec(a, a, std::max(k, 1));
  std::vector<double> coeffs(k + 1, 0.0);
  coeffs[k] = 1.0;
  std::vector<double> pk(t_all.size());
  kernels::jacobi_series(rec, coeffs, t_all, pk);

  double total = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double ea = i == 0 ? end_exp : p;
    const double eb = i + 1 == pieces ? end_exp : p;
    const QuadratureRule& r = rule_for(ea, eb);
    const double half = 0.5 * (hi - lo);
    std::vector<double> g(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double t = t_all[offsets[i] + j];
      const double v = pk[offsets[i] + j];
      if (v == 0.0) {
        g[j] = 0.0;
        continue;
      }
      const double lm = std::log1p(-t);  // log(1 - t)
      const double lp = std::log1p(t);   // log(1 + t)
      double log_g = p * std::log(std::fabs(v)) + end_exp * (lm + lp);
      log_g -= ea * (i == 0 ? lp : std::log(t - lo));
      log_g -= eb * (i + 1 == pieces ? lm : std::log(hi - t));
      g[j] = std::exp(log_g);
    }
    const double piece = std::exp((1.0 + ea + eb) * std::log(half)) * kernels::weighted_sum(r.weights, g);
    const double s = total + piece;
    comp += std::fabs(total) >= std::fabs(piece) ? (total - s) + piece : (piece - s) + total;
    total = s;
  }
  return total + comp;
}

double factor_sup(int k, int m, double w, int samples, double* slack) {
  if (k < 0 || m < 0) throw DomainError("factor sup: negative index");
  if (samples < 16) samples = 16;
  const double a = m + w;
  auto profile = [&](double t) {
    t = std::clamp(t, -1.0, 1.0);
    return int_pow(std::sqrt((1.0 - t) * (1.0 + t)), m) * std::fabs(jacobi_eval({k, a, a}, t));
  };
  // Sample uniformly in theta; refine the largest local maxima.
  const int count = std::max(samples, 32 * (k + m + 1)) | 1;
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = -std::cos(kPi * i / (count - 1));
  t.front() = -1.0;
  t.back() = 1.0;
  t[count / 2] = 0.0;
  std::vector<double> vals(count);
  for (int i = 0; i < count; ++i) vals[i] = profile(t[i]);

  std::vector<int> peaks;
  for (int i = 0; i < count; ++i) {
    const bool left = i == 0 || vals[i] >= vals[i - 1];
    const bool right = i + 1 == count || vals[i] >= vals[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int x, int y) { return vals[x] > vals[y] || (vals[x] == vals[y] && x < y); });
  if (peaks.size() > 4) peaks.resize(4);

  double best = 0.0;
  double best_slack = 0.0;
  for (int i : peaks) {
    const double lo = t[std::max(i - 1, 0)];
    const double hi = t[std::min(i + 1, count - 1)];
    const Peak pk = golden_max(profile, lo, hi);
    const double v = std::max(pk.value, vals[i]);
    if (v > best) {
      best = v;
      best_slack = pk.slack;
    }
  }
  if (slack) *slack = best_slack;
  return best;
}

namespace {

double factorized_integral(const HarmonicSpec& spec, double p, int piece_nodes) {
  const int d = spec.dims().d();
  switch (spec.family()) {
    case Family::Zonal:
      return sphere_area(d - 1) * factor_abs_power_integral(spec.degree(), 0, spec.dims().zonal_alpha(), p, piece_nodes);
    case Family::Power:
    case Family::Basis: {
      const std::vector<int> tuple = spec.family() == Family::Basis ? spec.tuple() : std::vector<int>(d - 1, spec.degree());
      double prod = 2.0 * kPi;
      for (int k = 0; k <= d - 3; ++k)
        prod *= factor_abs_power_integral(tuple[k] - tuple[k + 1], tuple[k + 1], level_weight(d, k), p, piece_nodes);
      return prod;
    }
  }
  return 0.0;
}

double closed_form_integral(const HarmonicSpec& spec, double p) {
  const int d = spec.dims().d();
  const int n = spec.degree();
  switch (spec.family()) {
    case Family::Power: {
      // pi |S^{d-3}| B(np/2 + 1, lambda)
      const double a = 0.5 * n * p + 1.0;
      const double lam = spec.dims().lambda();
      const double log_beta = std::lgamma(a) + std::lgamma(lam) - std::lgamma(a + lam);
      return kPi * sphere_area(d - 2) * std::exp(log_beta);
    }
    case Family::Zonal:
      if (p != 2.0) break;
      return sphere_area(d - 1) * std::exp(log_jacobi_norm2(n, spec.dims().zonal_alpha()));
    case Family::Basis: {
      if (p != 2.0) break;
      double log_norm2 = 0.0;
      const auto& tuple = spec.tuple();
      for (int k = 0; k <= d - 3; ++k)
        log_norm2 += log_jacobi_norm2(tuple[k] - tuple[k + 1], tuple[k + 1] + level_weight(d, k));
      return 2.0 * kPi * std::exp(log_norm2);
    }
  }
  throw DomainError(std::string("lp_norm: no closed form for the ") + to_string(spec.family()) + " family at this p");
}

// Zeros of each polar factor of |Y| when they are aligned with the product
// coordinates (basis and power elements, zonal elements about e_d).
std::optional<std::vector<std::vector<double>>> polar_breaks(const HarmonicSpec& spec) {
  const int d = spec.dims().d();
  std::vector<std::vector<double>> breaks(d - 2);
  auto roots = [](int k, double a) {
    return k > 0 ? gauss_jacobi(k, a, a).nodes : std::vector<double>{};
  };
  if (spec.family() == Family::Zonal) {
    const auto pole = spec.pole().coords();
    for (int i = 0; i < d - 1; ++i)
      if (pole[i] != 0.0) return std::nullopt;
    if (pole[d - 1] != 1.0) return std::nullopt;
    breaks[0] = roots(spec.degree(), spec.dims().zonal_alpha());
    return breaks;
  }
  const std::vector<int> tuple = spec.family() == Family::Basis ? spec.tuple() : std::vector<int>(d - 1, spec.degree());
  for (int k = 0; k <= d - 3; ++k) breaks[k] = roots(tuple[k] - tuple[k + 1], tuple[k + 1] + level_weight(d, k));
  return breaks;
}

// Exact product rule when |Y|^p is a polynomial (even integer p); otherwise a
// composite rule cut at the factor zeros if they are known, else the plain
// product rule of budget.product_degree.
NormResult product_norm(const std::function<double(std::span<const double>)>& abs_value, const DimensionParams& dims,
                        double p, int degree, const std::optional<std::vector<std::vector<double>>>& breaks,
                        const NormBudget& budget) {
  NormResult r;
  r.p = p;
  r.method = NormMethod::ProductQuadrature;
  QuadratureRule rule;
  if (is_even_integer(p)) {
    rule = sphere_product_rule(dims, static_cast<int>(p) * degree, budget.node_cap);
  } else if (breaks) {
    rule = sphere_composite_rule(dims, *breaks, budget.piece_nodes, 2 * degree + 2, budget.node_cap);
  } else {
    rule = sphere_product_rule(dims, budget.product_degree, budget.node_cap);
  }
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) values[i] = abs_pow(abs_value(rule.point(i)), p);
  const double integral = integrate_values(rule, values);
  r.value = std::pow(integral, 1.0 / p);
  return r;
}

NormResult sampled_sup(const std::function<double(std::span<const double>)>& abs_value, const DimensionParams& dims,
                       int degree, const NormBudget& budget) {
  // Product grid at two resolutions; the difference is the reported slack.
  auto grid_max = [&](int deg) {
    const QuadratureRule rule = sphere_product_rule(dims, deg, budget.node_cap);
    double m = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) m = std::max(m, abs_value(rule.point(i)));
    return m;
  };
  const int fine = std::max(8 * (degree + 1), 16);
  const double coarse_max = grid_max(fine / 2);
  const double fine_max = grid_max(fine);
  NormResult r;
  r.p = std::numeric_limits<double>::infinity();
  r.method = NormMethod::SupSampling;
  r.value = std::max(coarse_max, fine_max);
  r.slack = r.value > 0 ? std::fabs(fine_max - coarse_max) / r.value : 0.0;
  return r;
}

}  // namespace

NormResult lp_norm(const HarmonicSpec& spec, double p, const NormBudget& budget, std::optional<NormMethod> route) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be > 0");
  const int d = spec.dims().d();
  const bool infinite = std::isinf(p);

  auto abs_value = [&spec](std::span<const double> x) { return std::abs(evaluate(spec, x)); };

  if (infinite) {
    const NormMethod m = route.value_or(NormMethod::SupSampling);
    if (m == NormMethod::ProductQuadrature) return sampled_sup(abs_value, spec.dims(), spec.degree(), budget);
    if (m != NormMethod::SupSampling) throw DomainError("lp_norm: p = inf requires sup-sampling or product route");
    NormResult r;
    r.p = p;
    r.method = NormMethod::SupSampling;
    double value = 1.0;
    double slack = 0.0;
    if (spec.family() == Family::Zonal) {
      value = factor_sup(spec.degree(), 0, spec.dims().zonal_alpha(), budget.sup_samples, &slack);
    } else {
      const std::vector<int> tuple = spec.family() == Family::Basis ? spec.tuple() : std::vector<int>(d - 1, spec.degree());
      for (int k = 0; k <= d - 3; ++k) {
        double s = 0.0;
        value *= factor_sup(tuple[k] - tuple[k + 1], tuple[k + 1], level_weight(d, k), budget.sup_samples, &s);
        slack = std::max(slack, s);
      }
    }
    if (slack > budget.sup_tolerance)
      throw ConvergenceError("lp_norm: sup refinement did not reach the requested slack");
    r.value = value;
    r.slack = slack;
    return r;
  }

  NormMethod m;
  if (route) {
    m = *route;
  } else {
    m = spec.family() == Family::Power ? NormMethod::ClosedForm : NormMethod::Factorized1D;
  }
  NormResult r;
  r.p = p;
  r.method = m;
  switch (m) {
    case NormMethod::ClosedForm: r.value = std::pow(closed_form_integral(spec, p), 1.0 / p); return r;
    case NormMethod::Factorized1D: r.value = std::pow(factorized_integral(spec, p, budget.piece_nodes), 1.0 / p); return r;
    case NormMethod::ProductQuadrature:
      return product_norm(abs_value, spec.dims(), p, spec.degree(), polar_breaks(spec), budget);
    case NormMethod::SupSampling: throw DomainError("lp_norm: sup-sampling applies only to p = inf");
  }
  return r;
}

NormResult lp_norm(const HarmonicCombination& y, double p, const NormBudget& budget) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be > 0");
  auto abs_value = [&y](std::span<const double> x) { return std::fabs(y(x)); };
  if (std::isinf(p)) return sampled_sup(abs_value, y.dims(), y.degree(), budget);
  return product_norm(abs_value, y.dims(), p, y.degree(), std::nullopt, budget);
}

}  // namespace revholder
