#include "revholder/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "revholder/errors.hpp"

namespace revholder {
namespace {

using wide = __int128;

wide gcd_wide(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(wide num, wide den) {
  if (den == 0) throw DomainError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr wide lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || -num > lim || den > lim) throw std::overflow_error("rational: 64-bit overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw DomainError("rational: cannot approximate a non-finite value");
  const bool neg = x < 0;
  double r = std::fabs(x);
  // Convergents h/k of the continued fraction of |x|.
  wide h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    if (a > 9.0e15) break;
    wide ai = static_cast<wide>(a);
    wide h2 = ai * h1 + h0;
    wide k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = r - a;
    if (frac < 1e-15 * std::max(1.0, std::fabs(x))) break;
    r = 1.0 / frac;
  }
  if (k1 == 0) return Rational(0);
  return make_reduced(neg ? -h1 : h1, k1);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(wide(a.num_) * b.den_ + wide(b.num_) * a.den_, wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(wide(a.num_) * b.den_ - wide(b.num_) * a.den_, wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational: division by zero");
  return make_reduced(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  wide lhs = wide(a.num_) * b.den_;
  wide rhs = wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "INF" || s == "oo") return infinity();
  if (s.empty()) throw DomainError("exponent: empty string");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::size_t used = 0;
    long long n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw DomainError("exponent: malformed fraction '" + s + "'");
    std::string rest = s.substr(slash + 1);
    long long d = std::stoll(rest, &used);
    if (used != rest.size()) throw DomainError("exponent: malformed fraction '" + s + "'");
    return Rational(n, d);
  }
  // Decimal: integer part and fractional digits taken exactly.
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  wide num = 0, den = 1;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      if (den > wide(1'000'000'000'000'000LL) || num > wide(1'000'000'000'000'000'000LL))
        throw DomainError("exponent: too many digits in '" + s + "'");
    } else {
      throw DomainError("exponent: cannot parse '" + s + "'");
    }
  }
  if (!seen_digit) throw DomainError("exponent: cannot parse '" + s + "'");
  return ExtendedRational(make_reduced(neg ? -num : num, den));
}

ExtendedRational ExtendedRational::from_double(double x) {
  if (std::isinf(x) && x > 0) return infinity();
  return ExtendedRational(Rational::approximate(x));
}

const Rational& ExtendedRational::value() const {
  if (infinite_) throw DomainError("exponent: infinite value has no finite representation");
  return value_;
}

double ExtendedRational::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

Rational ExtendedRational::reciprocal() const {
  if (infinite_) return Rational(0);
  if (value_.is_zero()) throw DomainError("exponent: reciprocal of zero");
  return Rational(1) / value_;
}

ExtendedRational ExtendedRational::conjugate() const {
  if (infinite_) return ExtendedRational(1);
  if (value_ < Rational(1)) throw DomainError("exponent: conjugate requires p >= 1");
  if (value_ == Rational(1)) return infinity();
  return ExtendedRational(value_ / (value_ - Rational(1)));
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  return a.value_ <=> b.value_;
}

std::string ExtendedRational::str() const { return infinite_ ? std::string("inf") : value_.str(); }

}  // namespace revholder
