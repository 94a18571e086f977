#pragma once

// Exact arithmetic for Lebesgue exponents. Regime boundaries such as
// q = (1 + 1/lambda) p' are rational in p, q and d, so comparing them in
// rationals keeps boundary cases exact. ExtendedRational adds +infinity so that
// q = inf and p' = inf (p = 1) are ordinary values with 1/inf = 0.

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

namespace revholder {

class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  // Best approximation with denominator <= max_den (continued fractions).
  static Rational approximate(double x, std::int64_t max_den = 1'000'000);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::string str() const;

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Q union {+inf}. Only nonnegative exponents are needed, so there is no -inf.
class ExtendedRational {
public:
  ExtendedRational() = default;
  ExtendedRational(Rational r) : value_(r) {}
  ExtendedRational(std::int64_t n) : value_(n) {}

  static ExtendedRational infinity() {
    ExtendedRational r;
    r.infinite_ = true;
    return r;
  }
  // Accepts "inf", "infinity", integers, decimals ("2.5") and fractions ("16/3").
  static ExtendedRational parse(std::string_view text);
  // +inf for x == HUGE_VAL, otherwise Rational::approximate.
  static ExtendedRational from_double(double x);

  bool is_infinite() const { return infinite_; }
  // Finite value; throws DomainError when infinite.
  const Rational& value() const;
  double to_double() const;
  // 1/x with 1/inf = 0. Throws DomainError for x = 0.
  Rational reciprocal() const;
  // Hoelder conjugate p' = p/(p-1) for p >= 1, with 1' = inf and inf' = 1.
  ExtendedRational conjugate() const;

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
  friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

  std::string str() const;

private:
  Rational value_;
  bool infinite_ = false;
};

}  // namespace revholder
