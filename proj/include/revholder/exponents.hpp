#pragma once

// Growth exponents of sup ||Y_n||_q / ||Y_n||_p over H_n^d and the reference
// rates around them: Nikolskii, Sogge's projection bounds, the restriction
// exponent and the Pitt constant. Regime boundaries are decided in exact
// rational arithmetic on 1/p and 1/q (1/inf = 0).

#include <optional>
#include <string>
#include <vector>

#include "revholder/rational.hpp"

namespace revholder {

enum class Regime { I, II, III, IVHigh, IVLow, Open, NikolskiiOnly };

const char* to_string(Regime regime);

// Extremal family whose norm ratio attains the exponent.
enum class Witness { Power, Zonal, None };

const char* to_string(Witness witness);

struct RegimeResult {
  int d = 3;
  ExtendedRational p;
  ExtendedRational q;
  Regime regime = Regime::Open;
  // Unset in the open region.
  std::optional<Rational> exponent;
  bool log_correction = false;
  Witness witness = Witness::None;
  // (d-1)(1/p - 1/q), the only proven bound in the open region.
  Rational nikolskii;

  double exponent_value() const;  // NaN when open
};

// Throws DomainError unless d >= 3 and 0 < p < q <= inf.
RegimeResult classify(int d, const ExtendedRational& p, const ExtendedRational& q);
RegimeResult classify(int d, double p, double q);

// Every regime whose closed parameter cell contains (p, q). Open is listed
// only when no other regime applies.
std::vector<Regime> admissible_regimes(int d, const ExtendedRational& p, const ExtendedRational& q);

// The exponent formula of a regime evaluated at (p, q) regardless of whether
// (p, q) lies in it; used for continuity checks across boundaries.
Rational regime_formula(Regime regime, int d, const ExtendedRational& p, const ExtendedRational& q);

// Growth rate of ||g||_p along the witness family, as a function of n:
// power family -lambda/p; zonal family (d-3)/2 - (d-1)/p above the critical
// p = 2(d-1)/(d-2), -1/2 below it. `critical` is set exactly on the critical
// line, where a log factor appears.
struct FamilySlope {
  Rational slope;
  bool critical = false;
};
FamilySlope family_slope(Witness family, int d, const ExtendedRational& p);

Rational nikolskii_rate(int d, const ExtendedRational& p, const ExtendedRational& q);
double nikolskii_rate(int d, double p, double q);

// Cases of the L^p -> L^2 (i, ii) and L^2 -> L^q (iii, iv) projection bounds.
enum class SoggeCase { I, II, III, IV };

// Exponent of the projection bound in the given case; `exponent` is p for
// cases I/II and q for cases III/IV. Throws DomainError outside the case's
// range. Reference rates only; nothing here is certified numerically.
Rational sogge_projection_rate(int d, SoggeCase c, const ExtendedRational& exponent);
// lambda(1/p - 1/2) + (p_lambda - p) / (2p(lambda + 2)) for 1 <= p <= p_lambda.
double sogge_low_p_rate(int d, double p);
// p_lambda = 1 + lambda/(lambda + 2).
Rational sogge_p_lambda(int d);

struct RestrictionResult {
  Rational exponent;
  bool bounded = false;
};

// E = (d-1)(1/2 - 1/p) + 1/p' + lambda(1/p - 1/q), bounded iff E <= 0.
// Requires 1 <= p and q > 0.
RestrictionResult restriction_exponent(int d, const ExtendedRational& p, const ExtendedRational& q);
// True when 1 <= p <= 2d/(d+1) and q <= (d-1)p'/(d+1).
bool in_restriction_range(int d, const ExtendedRational& p, const ExtendedRational& q);

enum class RatioSource { Empirical, Asymptotic };

struct PittConstant {
  double value = 0.0;
  double gamma_part = 0.0;
  double ratio = 1.0;
  // Set when the ratio is the asymptotic k^{(d-2)(1/p-1/2)} with unit constant.
  bool order_only = false;
};

// Best constant of the Pitt inequality for H_k^d-valued radial functions:
// the Gamma part in log domain times the harmonic ratio. `ratio` is used
// for RatioSource::Empirical and ignored otherwise. Throws DomainError for p
// outside [1, 2] or k < 0.
PittConstant pitt_constant(int d, int k, double p, RatioSource source, double ratio = 1.0);

struct RateRow {
  RegimeResult result;
  double gap = 0.0;  // nikolskii - exponent; NaN when open
};

struct RateTable {
  std::vector<RateRow> rows;

  // Columns d,p,q,regime,exponent,nikolskii,gap,witness.
  std::string to_csv() const;
};

// All pairs p < q from the given lists, sorted by (p, q).
RateTable make_rate_table(int d, const std::vector<ExtendedRational>& ps, const std::vector<ExtendedRational>& qs);
// About 30 exponents including inf and the d-dependent breakpoints; all
// pairs p < q give over 400 grid points.
std::vector<ExtendedRational> default_exponent_grid(int d);

std::string format_number(double x);

}  // namespace revholder
