#include "revholder/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "revholder/errors.hpp"

namespace revholder {
namespace {

Rational lambda_of(int d) { return Rational(d - 2, 2); }

// 1/p at which the zonal family turns supercritical: p = 2 + 1/lambda.
Rational zonal_critical_ip(int d) {
  const Rational lam = lambda_of(d);
  return lam / (Rational(2) * lam + Rational(1));
}

void check_dimension(int d) {
  if (d < 3) throw DomainError("dimension d must be >= 3");
}

void check_pair(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_dimension(d);
  if (p.is_infinite()) throw DomainError("p must be finite");
  if (!(p > ExtendedRational(0))) throw DomainError("p must be > 0");
  if (!(p < q)) throw DomainError("p must be < q");
}

struct Cells {
  bool i, ii, iii, iv_high, iv_low;
};

Cells closed_cells(int d, const Rational& ip, const Rational& iq) {
  const Rational lam = lambda_of(d);
  const Rational half(1, 2), one(1);
  const Rational i_line = (one - ip) * lam / (lam + one);  // 1/q = (1/p') lambda/(lambda+1)
  const Rational ipc = zonal_critical_ip(d);
  const Rational q_line = lam / (Rational(2) * lam + Rational(2));  // 1/q at q = 2 + 2/lambda
  Cells c{};
  const bool mid = half <= ip && ip <= one;
  c.i = ip >= one || (mid && iq >= i_line);
  c.ii = (mid && iq <= i_line) || (ipc <= ip && ip <= half && iq <= q_line);
  c.iii = ip <= ipc;
  if (d == 3) {
    const bool band = Rational(1, 4) <= ip && ip <= half;
    const Rational iv_line = (one - ip) / Rational(3);  // q = 3p'
    c.iv_high = band && iq <= iv_line;
    c.iv_low = band && iq >= iv_line;
  }
  return c;
}

Witness witness_of(Regime r) {
  switch (r) {
    case Regime::I:
    case Regime::IVLow: return Witness::Power;
    case Regime::II:
    case Regime::III:
    case Regime::IVHigh: return Witness::Zonal;
    default: return Witness::None;
  }
}

}  // namespace

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::I: return "i";
    case Regime::II: return "ii";
    case Regime::III: return "iii";
    case Regime::IVHigh: return "iv-high";
    case Regime::IVLow: return "iv-low";
    case Regime::Open: return "open";
    case Regime::NikolskiiOnly: return "nikolskii-only";
  }
  return "unknown";
}

const char* to_string(Witness witness) {
  switch (witness) {
    case Witness::Power: return "power";
    case Witness::Zonal: return "zonal";
    case Witness::None: return "none";
  }
  return "unknown";
}

double RegimeResult::exponent_value() const {
  return exponent ? exponent->to_double() : std::numeric_limits<double>::quiet_NaN();
}

Rational regime_formula(Regime regime, int d, const ExtendedRational& p, const ExtendedRational& q) {
  const Rational lam = lambda_of(d);
  const Rational ip = p.reciprocal(), iq = q.reciprocal();
  const Rational two(2), one(1);
  switch (regime) {
    case Regime::I: return lam * (ip - iq);
    case Regime::IVLow: return Rational(1, 2) * (ip - iq);
    case Regime::II: return lam - (two * lam + one) * iq;
    case Regime::IVHigh: return Rational(1, 2) - two * iq;
    case Regime::III: return (two * lam + one) * (ip - iq);
    case Regime::Open:
    case Regime::NikolskiiOnly: break;
  }
  throw DomainError(std::string("no exponent formula for regime ") + to_string(regime));
}

std::vector<Regime> admissible_regimes(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_pair(d, p, q);
  const Cells c = closed_cells(d, p.reciprocal(), q.reciprocal());
  std::vector<Regime> out;
  if (c.i) out.push_back(Regime::I);
  if (c.ii) out.push_back(Regime::II);
  if (c.iii) out.push_back(Regime::III);
  if (c.iv_high) out.push_back(Regime::IVHigh);
  if (c.iv_low) out.push_back(Regime::IVLow);
  // The closure of (iii) reaches the line p = 2 + 1/lambda; above q = 2 + 2/lambda
  // that line is not covered for d >= 4.
  if (d >= 4 && p.reciprocal() == zonal_critical_ip(d) && !c.ii) out.clear();
  if (out.empty()) out.push_back(Regime::Open);
  return out;
}

RegimeResult classify(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_pair(d, p, q);
  const Rational ip = p.reciprocal(), iq = q.reciprocal();
  const Cells c = closed_cells(d, ip, iq);
  RegimeResult r;
  r.d = d;
  r.p = p;
  r.q = q;
  r.nikolskii = Rational(d - 1) * (ip - iq);
  if (d == 3 && (c.iv_low || c.iv_high)) {
    r.regime = c.iv_low ? Regime::IVLow : Regime::IVHigh;
  } else if (c.i) {
    r.regime = Regime::I;
  } else if (c.ii) {
    r.regime = Regime::II;
  } else if (ip < zonal_critical_ip(d)) {
    r.regime = Regime::III;
  } else {
    r.regime = Regime::Open;
  }
  r.witness = witness_of(r.regime);
  if (r.regime != Regime::Open) r.exponent = regime_formula(r.regime, d, p, q);
  return r;
}

RegimeResult classify(int d, double p, double q) {
  return classify(d, ExtendedRational::from_double(p), ExtendedRational::from_double(q));
}

FamilySlope family_slope(Witness family, int d, const ExtendedRational& p) {
  check_dimension(d);
  if (!p.is_infinite() && !(p > ExtendedRational(0))) throw DomainError("p must be > 0");
  const Rational ip = p.reciprocal();
  if (family == Witness::Power) return {-lambda_of(d) * ip, false};
  if (family == Witness::Zonal) {
    const Rational ipc = zonal_critical_ip(d);
    if (ip < ipc) return {Rational(d - 3, 2) - Rational(d - 1) * ip, false};
    return {Rational(-1, 2), ip == ipc};
  }
  throw DomainError("family_slope: no witness family");
}

Rational nikolskii_rate(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_pair(d, p, q);
  return Rational(d - 1) * (p.reciprocal() - q.reciprocal());
}

double nikolskii_rate(int d, double p, double q) {
  if (d < 3) throw DomainError("dimension d must be >= 3");
  if (!(p > 0) || !(p < q)) throw DomainError("nikolskii_rate: need 0 < p < q");
  return (d - 1) * (1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q));
}

Rational sogge_p_lambda(int d) {
  check_dimension(d);
  const Rational lam = lambda_of(d);
  return Rational(1) + lam / (lam + Rational(2));
}

Rational sogge_projection_rate(int d, SoggeCase c, const ExtendedRational& exponent) {
  check_dimension(d);
  const Rational lam = lambda_of(d);
  const Rational half(1, 2), one(1), two(2);
  const ExtendedRational p_lam(sogge_p_lambda(d));
  const ExtendedRational q_lam(two + two / lam);
  const Rational inv = exponent.reciprocal();
  switch (c) {
    case SoggeCase::I:
      if (!(ExtendedRational(1) <= exponent && exponent <= p_lam)) throw DomainError("projection rate (i): need 1 <= p <= p_lambda");
      return (two * lam + one) * (inv - half) - half;
    case SoggeCase::II:
      if (!(p_lam <= exponent && exponent <= ExtendedRational(2))) throw DomainError("projection rate (ii): need p_lambda <= p <= 2");
      return lam * (inv - half);
    case SoggeCase::III:
      if (!(q_lam <= exponent)) throw DomainError("projection rate (iii): need q >= 2 + 2/lambda");
      return (two * lam + one) * (half - inv) - half;
    case SoggeCase::IV:
      if (!(ExtendedRational(2) <= exponent && exponent <= q_lam)) throw DomainError("projection rate (iv): need 2 <= q <= 2 + 2/lambda");
      return lam * (half - inv);
  }
  throw DomainError("projection rate: unknown case");
}

double sogge_low_p_rate(int d, double p) {
  check_dimension(d);
  const double lam = 0.5 * (d - 2);
  const double p_lam = 1.0 + lam / (lam + 2.0);
  if (!(p >= 1.0 && p <= p_lam)) throw DomainError("low-p rate: need 1 <= p <= p_lambda");
  return lam * (1.0 / p - 0.5) + (p_lam - p) / (2.0 * p * (lam + 2.0));
}

RestrictionResult restriction_exponent(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_dimension(d);
  if (p.is_infinite() || p < ExtendedRational(1)) throw DomainError("restriction exponent: need 1 <= p < inf");
  if (!q.is_infinite() && !(q > ExtendedRational(0))) throw DomainError("restriction exponent: need q > 0");
  const Rational ip = p.reciprocal(), iq = q.reciprocal();
  const Rational one(1);
  const Rational e = Rational(d - 1) * (Rational(1, 2) - ip) + (one - ip) + lambda_of(d) * (ip - iq);
  return {e, e <= Rational(0)};
}

bool in_restriction_range(int d, const ExtendedRational& p, const ExtendedRational& q) {
  check_dimension(d);
  if (p.is_infinite() || p < ExtendedRational(1)) return false;
  const Rational ip = p.reciprocal(), iq = q.reciprocal();
  // p <= 2d/(d+1)  <=>  1/p >= (d+1)/(2d);  q <= (d-1)p'/(d+1)  <=>  1/q >= (d+1)(1-1/p)/(d-1).
  return ip >= Rational(d + 1, 2 * d) && iq >= Rational(d + 1, d - 1) * (Rational(1) - ip);
}

PittConstant pitt_constant(int d, int k, double p, RatioSource source, double ratio) {
  check_dimension(d);
  if (k < 0) throw DomainError("pitt constant: k must be >= 0");
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("pitt constant: need 1 <= p <= 2");
  const double a = 2.0 * k + d - 1.0;
  const double inv_pc = 1.0 - 1.0 / p;  // 1/p'
  double log_c = 0.5 * d * std::log(2.0 * std::numbers::pi) + (0.5 - inv_pc) * std::log(2.0);
  log_c += ((a * p + 2.0) / (4.0 * p)) * std::log(p) - std::lgamma((a * p + 2.0) / 4.0) / p;
  if (inv_pc == 0.0) {
    // p' = inf: Gamma((a p'+2)/4)^{1/p'} / p'^{(a p'+2)/(4p')} -> (a/4)^{a/4} e^{-a/4}.
    log_c += 0.25 * a * std::log(0.25 * a) - 0.25 * a;
  } else {
    const double pc = 1.0 / inv_pc;
    log_c += inv_pc * std::lgamma((a * pc + 2.0) / 4.0) - ((a * pc + 2.0) / (4.0 * pc)) * std::log(pc);
  }
  PittConstant out;
  out.gamma_part = std::exp(log_c);
  if (source == RatioSource::Asymptotic) {
    out.ratio = std::pow(static_cast<double>(std::max(k, 1)), (d - 2) * (1.0 / p - 0.5));
    out.order_only = true;
  } else {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("pitt constant: ratio must be positive and finite");
    out.ratio = ratio;
  }
  out.value = out.gamma_part * out.ratio;
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string RateTable::to_csv() const {
  std::ostringstream out;
  out << "d,p,q,regime,exponent,nikolskii,gap,witness\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << r.d << ',' << r.p.str() << ',' << r.q.str() << ',' << to_string(r.regime) << ','
        << format_number(r.exponent_value()) << ',' << format_number(r.nikolskii.to_double()) << ','
        << format_number(row.gap) << ',' << to_string(r.witness) << '\n';
  }
  return out.str();
}

RateTable make_rate_table(int d, const std::vector<ExtendedRational>& ps, const std::vector<ExtendedRational>& qs) {
  check_dimension(d);
  std::set<ExtendedRational> pset(ps.begin(), ps.end()), qset(qs.begin(), qs.end());
  RateTable table;
  for (const auto& p : pset) {
    if (p.is_infinite()) continue;
    for (const auto& q : qset) {
      if (!(p < q)) continue;
      RateRow row;
      row.result = classify(d, p, q);
      row.gap = row.result.exponent ? (row.result.nikolskii - *row.result.exponent).to_double()
                                    : std::numeric_limits<double>::quiet_NaN();
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::vector<ExtendedRational> default_exponent_grid(int d) {
  check_dimension(d);
  const Rational lam = lambda_of(d);
  std::set<ExtendedRational> grid;
  for (const Rational r : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1), Rational(4, 3), Rational(3, 2),
                           Rational(5, 3), Rational(2), Rational(5, 2), Rational(3), Rational(4), Rational(5),
                           Rational(6), Rational(8), Rational(16), Rational(1, 3), Rational(2, 3), Rational(6, 5),
                           Rational(7, 4), Rational(9, 4), Rational(7, 3), Rational(11, 4), Rational(7, 2),
                           Rational(9, 2), Rational(10), Rational(12), Rational(32), Rational(4, 5), Rational(5, 4),
                           Rational(20), Rational(24)})
    grid.insert(ExtendedRational(r));
  grid.insert(ExtendedRational(sogge_p_lambda(d)));
  grid.insert(ExtendedRational(Rational(2) + Rational(1) / lam));
  grid.insert(ExtendedRational(Rational(2) + Rational(2) / lam));
  grid.insert(ExtendedRational(Rational(2) + Rational(1) / (Rational(2) * lam)));
  grid.insert(ExtendedRational::infinity());
  return {grid.begin(), grid.end()};
}

}  // namespace revholder
