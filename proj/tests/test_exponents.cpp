#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "revholder/errors.hpp"
#include "revholder/experiments.hpp"
#include "revholder/exponents.hpp"

using namespace revholder;
using doctest::Approx;

namespace {

ExtendedRational X(const char* s) { return ExtendedRational::parse(s); }
const ExtendedRational kInf = ExtendedRational::infinity();

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3, 7) == Rational(1, 7));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7, 3).str() == "7/3");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational::approximate(0.125) == Rational(1, 8));
  CHECK(Rational::approximate(1.0 / 3.0) == Rational(1, 3));
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
}

TEST_CASE("extended rationals") {
  CHECK(X("inf").is_infinite());
  CHECK(X("infinity") == kInf);
  CHECK(X("2.5") == ExtendedRational(Rational(5, 2)));
  CHECK(X("16/3").value() == Rational(16, 3));
  CHECK(X("1").conjugate() == kInf);
  CHECK(kInf.conjugate() == X("1"));
  CHECK(X("3").conjugate() == X("3/2"));
  CHECK(kInf.reciprocal() == Rational(0));
  CHECK(X("4") < kInf);
  CHECK(kInf.str() == "inf");
  CHECK(ExtendedRational::from_double(HUGE_VAL) == kInf);
  CHECK(ExtendedRational::from_double(0.75) == X("3/4"));
  CHECK_THROWS_AS(kInf.value(), DomainError);
  for (const char* bad : {"", "abc", "1/0", "2.5.1", "-"}) CHECK_THROWS_AS(X(bad), DomainError);
}

TEST_CASE("classify examples") {
  const RegimeResult a = classify(3, X("2"), kInf);
  CHECK(*a.exponent == Rational(1, 2));
  const RegimeResult b = classify(3, X("2"), X("4"));
  CHECK(b.regime == Regime::IVLow);
  CHECK(*b.exponent == Rational(1, 8));
  CHECK(b.witness == Witness::Power);
  const RegimeResult c = classify(4, X("1"), X("2"));
  CHECK(c.regime == Regime::I);
  CHECK(*c.exponent == Rational(1, 2));
  // Double overload.
  CHECK(classify(4, 1.0, 2.0).exponent_value() == Approx(0.5));
  CHECK(classify(3, 2.0, HUGE_VAL).exponent_value() == Approx(0.5));
}

TEST_CASE("regimes across the parameter plane") {
  // d = 3: p = 1 gives regime i with exponent (1/2)(1 - 1/q).
  CHECK(classify(3, X("1"), X("2")).regime == Regime::I);
  CHECK(*classify(3, X("1"), X("2")).exponent == Rational(1, 4));
  // d = 3, p = 5 lies below 1/p = 1/4: regime iii, exponent (2 lambda + 1)(1/p - 1/q).
  const RegimeResult r3 = classify(3, X("5"), kInf);
  CHECK(r3.regime == Regime::III);
  CHECK(*r3.exponent == Rational(2, 5));
  CHECK(r3.witness == Witness::Zonal);
  // d = 3 band with large q: iv-high, 1/2 - 2/q.
  const RegimeResult r4 = classify(3, X("3"), X("12"));
  CHECK(r4.regime == Regime::IVHigh);
  CHECK(*r4.exponent == Rational(1, 3));
  // d = 4: 1 <= p <= 2 with q large is regime ii, lambda - (2 lambda + 1)/q.
  const RegimeResult r2 = classify(4, X("3/2"), kInf);
  CHECK(r2.regime == Regime::II);
  CHECK(*r2.exponent == Rational(1));
  // d = 4 open region: 2 < p < 3 with q below 2 + 2/lambda = 4.
  const RegimeResult open = classify(4, X("5/2"), X("3"));
  CHECK(open.regime == Regime::Open);
  CHECK_FALSE(open.exponent.has_value());
  CHECK(std::isnan(open.exponent_value()));
  CHECK(open.nikolskii == Rational(1, 5));
  CHECK(open.witness == Witness::None);
  // p < 1 keeps regime i.
  CHECK(classify(5, X("1/2"), X("1")).regime == Regime::I);
  CHECK(*classify(5, X("1/2"), X("1")).exponent == Rational(3, 2));
}

TEST_CASE("boundary cases are closed") {
  // The d = 4 line p = 2 + 1/lambda = 3 with q = inf is regime ii, exponent lambda.
  const RegimeResult r = classify(4, X("3"), kInf);
  CHECK(r.regime == Regime::II);
  CHECK(*r.exponent == Rational(1));
  // The zonal witness sits at its critical exponent there.
  CHECK(family_slope(Witness::Zonal, 4, X("3")).critical);
  // q = 2 + 2/lambda, 2 < p < 3 for d = 4 belongs to ii.
  CHECK(classify(4, X("5/2"), X("4")).regime == Regime::II);
  CHECK(classify(4, X("5/2"), X("4")).log_correction == false);
  // d = 3, p = 4 uses the iv formulas.
  const RegimeResult p4 = classify(3, X("4"), X("8"));
  CHECK((p4.regime == Regime::IVLow || p4.regime == Regime::IVHigh));
  const auto cells = admissible_regimes(3, X("4"), X("8"));
  CHECK(cells.size() >= 2);
  for (Regime c : cells)
    CHECK(regime_formula(c, 3, X("4"), X("8")) == *p4.exponent);
}

TEST_CASE("classify errors") {
  CHECK_THROWS_AS(classify(2, X("1"), X("2")), DomainError);
  CHECK_THROWS_AS(classify(3, X("2"), X("2")), DomainError);
  CHECK_THROWS_AS(classify(3, X("4"), X("2")), DomainError);
  CHECK_THROWS_AS(classify(3, X("0"), X("2")), DomainError);
  CHECK_THROWS_AS(classify(3, kInf, kInf), DomainError);
  CHECK_THROWS_AS(classify(3, -1.0, 2.0), DomainError);
  CHECK_THROWS_AS(classify(3, NAN, 2.0), DomainError);
}

TEST_CASE("exponent table audits") {
  for (int d : {3, 4, 5, 6}) {
    for (const auto& row : check_exponent_table(d)) {
      INFO(row.key << " " << row.detail);
      CHECK(row.status == "pass");
    }
  }
  // The d = 3 gap at (1, 2): sharp 1/4 against Nikolskii 1.
  const RegimeResult r = classify(3, X("1"), X("2"));
  CHECK(r.nikolskii - *r.exponent == Rational(3, 4));
}

TEST_CASE("rate table") {
  const RateTable t = make_rate_table(3, {X("1"), X("2"), kInf}, {X("2"), X("4"), kInf});
  CHECK(t.rows.size() == 5u);
  const std::string csv = t.to_csv();
  CHECK(csv.rfind("d,p,q,regime,exponent,nikolskii,gap,witness\n", 0) == 0);
  CHECK(csv.find("3,1,2,i,0.25,1,0.75,power\n") != std::string::npos);
  CHECK(csv.find("3,2,inf,iv-high,0.5,1,0.5,zonal\n") != std::string::npos);
  const RateTable open = make_rate_table(4, {X("5/2")}, {X("3")});
  CHECK(open.to_csv().find("4,5/2,3,open,,0.2,,none\n") != std::string::npos);
  CHECK(default_exponent_grid(3).size() >= 30u);
  CHECK(default_exponent_grid(4).back() == kInf);
  CHECK(format_number(NAN).empty());
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("family slopes") {
  CHECK(family_slope(Witness::Power, 3, X("2")).slope == Rational(-1, 4));
  CHECK(family_slope(Witness::Zonal, 3, X("8")).slope == Rational(-1, 4));
  CHECK(family_slope(Witness::Zonal, 4, X("2")).slope == Rational(-1, 2));
  CHECK(family_slope(Witness::Zonal, 3, X("4")).critical);
  CHECK_FALSE(family_slope(Witness::Zonal, 3, X("5")).critical);
  CHECK(family_slope(Witness::Zonal, 3, kInf).slope == Rational(0));
  CHECK_THROWS_AS(family_slope(Witness::None, 3, X("2")), DomainError);
}

TEST_CASE("nikolskii rates") {
  CHECK(nikolskii_rate(3, X("1"), X("2")) == Rational(1));
  CHECK(nikolskii_rate(5, X("1"), kInf) == Rational(4));
  CHECK(nikolskii_rate(3, 2.0, 2.0 + 1e-9) == Approx(0.0).scale(1.0));
  CHECK(nikolskii_rate(3, 2.0, 2.0 + 1e-9) >= 0.0);
  CHECK_THROWS_AS(nikolskii_rate(3, X("2"), X("1")), DomainError);
}

TEST_CASE("projection reference rates") {
  CHECK(sogge_projection_rate(3, SoggeCase::IV, X("4")) == Rational(1, 8));
  const Rational pl = sogge_p_lambda(3);
  CHECK(pl == Rational(6, 5));
  CHECK(sogge_projection_rate(3, SoggeCase::I, ExtendedRational(pl)) ==
        sogge_projection_rate(3, SoggeCase::II, ExtendedRational(pl)));
  CHECK(sogge_projection_rate(4, SoggeCase::III, kInf) == Rational(1));
  // III and IV meet at q = 2 + 2/lambda.
  CHECK(sogge_projection_rate(5, SoggeCase::III, X("10/3")) == sogge_projection_rate(5, SoggeCase::IV, X("10/3")));
  CHECK(sogge_low_p_rate(3, 1.2) == Approx(sogge_projection_rate(3, SoggeCase::II, X("6/5")).to_double()));
  CHECK(sogge_low_p_rate(3, 1.0) == Approx(0.29));
  CHECK_THROWS_AS(sogge_projection_rate(3, SoggeCase::I, X("2")), DomainError);
  CHECK_THROWS_AS(sogge_projection_rate(3, SoggeCase::IV, X("7")), DomainError);
  CHECK_THROWS_AS(sogge_low_p_rate(3, 1.5), DomainError);
}

TEST_CASE("restriction exponent") {
  const RestrictionResult a = restriction_exponent(3, X("1"), X("2"));
  CHECK(a.exponent == Rational(-3, 4));
  CHECK(a.bounded);
  const RestrictionResult b = restriction_exponent(3, X("3/2"), X("3/2"));
  CHECK(b.exponent == Rational(0));
  CHECK(b.bounded);
  CHECK(in_restriction_range(3, X("3/2"), X("3/2")));
  CHECK_FALSE(in_restriction_range(3, X("2"), X("1")));
  CHECK_FALSE(restriction_exponent(3, X("2"), kInf).bounded);
  for (int d : {3, 4, 5})
    for (const auto& row : check_restriction_sweep(d, 200)) {
      INFO(row.key << " " << row.detail);
      CHECK(row.status == "pass");
    }
  CHECK_THROWS_AS(restriction_exponent(3, X("1/2"), X("2")), DomainError);
  CHECK_THROWS_AS(restriction_exponent(3, kInf, X("2")), DomainError);
  CHECK_THROWS_AS(check_restriction_sweep(3, 1), DomainError);
}

TEST_CASE("Pitt constant") {
  for (int d : {3, 4, 5, 8}) {
    const PittConstant c = pitt_constant(d, 0, 2.0, RatioSource::Empirical, 1.0);
    CHECK(c.value == Approx(std::pow(2 * std::numbers::pi, 0.5 * d)).epsilon(1e-12));
    CHECK_FALSE(c.order_only);
  }
  const PittConstant p1 = pitt_constant(3, 0, 1.0, RatioSource::Empirical, 1.0);
  CHECK(std::isfinite(p1.gamma_part));
  CHECK(p1.gamma_part > 0.0);
  // Continuity of the p -> 1 limit.
  const PittConstant near1 = pitt_constant(3, 0, 1.0 + 1e-7, RatioSource::Empirical, 1.0);
  CHECK(near1.gamma_part == Approx(p1.gamma_part).epsilon(1e-5));
  for (int k : {1, 5, 40}) {
    const PittConstant a = pitt_constant(4, k, 1.0, RatioSource::Asymptotic);
    CHECK(a.ratio == Approx(double(k)));
    CHECK(a.order_only);
    CHECK(a.value == Approx(a.gamma_part * k));
  }
  CHECK(pitt_constant(4, 3, 1.5, RatioSource::Empirical, 2.5).value ==
        Approx(2.5 * pitt_constant(4, 3, 1.5, RatioSource::Empirical, 1.0).value));
  CHECK_THROWS_AS(pitt_constant(3, 0, 0.5, RatioSource::Asymptotic), DomainError);
  CHECK_THROWS_AS(pitt_constant(3, 0, 2.5, RatioSource::Asymptotic), DomainError);
  CHECK_THROWS_AS(pitt_constant(3, -1, 1.5, RatioSource::Asymptotic), DomainError);
  CHECK_THROWS_AS(pitt_constant(3, 1, 1.5, RatioSource::Empirical, 0.0), DomainError);
  for (const auto& row : check_pitt(4)) CHECK(row.status == "pass");
}

TEST_CASE("names") {
  CHECK(std::string(to_string(Regime::IVHigh)) == "iv-high");
  CHECK(std::string(to_string(Regime::Open)) == "open");
  CHECK(std::string(to_string(Witness::Zonal)) == "zonal");
}
