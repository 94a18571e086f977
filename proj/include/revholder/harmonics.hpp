#pragma once

// Spherical harmonics on S^{d-1}: the separated-variable basis in
// hyperspherical coordinates, the power family (x_1 + i x_2)^n, the zonal
// family P_n^{((d-3)/2,(d-3)/2)}(x.e), and L^p (quasi-)norms for 0 < p <= inf.
//
// Coordinates: x_d = cos(theta_1); x_{d-1} = sin(theta_1) cos(theta_2); ...;
// x_1 + i x_2 = sin(theta_1)...sin(theta_{d-2}) e^{i phi}. With t_j = cos(theta_j),
// the basis element of the tuple n = m_0 >= m_1 >= ... >= m_{d-2} >= 0 is
//
//   Y(x) = e^{+-i m_{d-2} phi} prod_{k=0}^{d-3} (1 - t_{k+1}^2)^{m_{k+1}/2}
//          P_{m_k - m_{k+1}}^{(a_k, a_k)}(t_{k+1}),   a_k = m_{k+1} + (d-3-k)/2.
//
// Measure is the unnormalized surface measure; nothing is divided by |S^{d-1}|.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revholder/quadrature.hpp"
#include "revholder/special_fn.hpp"

namespace revholder {

enum class Family { Basis, Power, Zonal };

const char* to_string(Family family);

class HarmonicSpec {
public:
  // tuple = (m_0, ..., m_{d-2}), nonincreasing and nonnegative; sign = +1 or -1.
  static HarmonicSpec basis(const DimensionParams& dims, std::vector<int> tuple, int sign = +1);
  static HarmonicSpec power(const DimensionParams& dims, int n);
  // Pole defaults to e_d.
  static HarmonicSpec zonal(const DimensionParams& dims, int n, std::optional<SpherePoint> pole = std::nullopt);

  // Parses `zonal:d=3,n=12`, `power:d=4,n=32`, `basis:d=3,m=5,3,sign=+` and
  // `zonal:d=3,n=4,pole=1,0,0`. Throws ConfigError on malformed input.
  static HarmonicSpec parse(const std::string& text);
  std::string to_string() const;

  const DimensionParams& dims() const { return dims_; }
  Family family() const { return family_; }
  int degree() const { return degree_; }
  const std::vector<int>& tuple() const { return tuple_; }
  int sign() const { return sign_; }
  const SpherePoint& pole() const { return pole_; }

private:
  HarmonicSpec(DimensionParams dims, Family family, int degree, std::vector<int> tuple, int sign,
               SpherePoint pole);

  DimensionParams dims_;
  Family family_;
  int degree_;
  std::vector<int> tuple_;
  int sign_;
  SpherePoint pole_;
};

// Value at a point of S^{d-1}. Where an angle is undefined (some r_k = 0) the
// convention t = 1 is used; the basis functions are continuous there.
std::complex<double> evaluate(const HarmonicSpec& spec, std::span<const double> x);

// dim H_n^d = binom(n+d-1, d-1) - binom(n+d-3, d-1).
std::int64_t dimension_of_harmonic_space(const DimensionParams& dims, int n);

// One real basis function: Re or Im of the tuple's complex basis element
// (sign +), scaled to unit L^2 norm. Im is only used when m_{d-2} > 0.
struct RealBasisFunction {
  std::vector<int> tuple;
  bool imaginary = false;
  double normalization = 1.0;
};

// All real basis functions of H_n^d in a fixed order (tuples in lexicographic
// order, Re before Im). The size equals dimension_of_harmonic_space.
std::vector<RealBasisFunction> real_basis(const DimensionParams& dims, int n);

// Evaluates every real basis function of H_n^d at a point, sharing the
// Jacobi recurrences between tuples.
class BasisTable {
public:
  BasisTable(const DimensionParams& dims, int n);

  const DimensionParams& dims() const { return dims_; }
  int degree() const { return n_; }
  const std::vector<RealBasisFunction>& functions() const { return functions_; }
  // out.size() == functions().size().
  void evaluate(std::span<const double> x, std::span<double> out) const;

private:
  DimensionParams dims_;
  int n_;
  std::vector<RealBasisFunction> functions_;
};

// Real element sum_j coefficients[j] * functions()[j] of H_n^d.
class HarmonicCombination {
public:
  HarmonicCombination(const DimensionParams& dims, int n, std::vector<double> coefficients);

  const DimensionParams& dims() const { return table_.dims(); }
  int degree() const { return table_.degree(); }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const BasisTable& table() const { return table_; }

  double operator()(std::span<const double> x) const;
  // Values at every node of a sphere rule.
  std::vector<double> evaluate_on(const QuadratureRule& rule) const;

private:
  BasisTable table_;
  std::vector<double> coefficients_;
};

// Reproducible pseudo-random element of H_n^d: coefficients uniform in [-1,1]
// from a 64-bit Mersenne twister seeded with `seed`.
HarmonicCombination random_harmonic(const DimensionParams& dims, int n, std::uint64_t seed);

enum class NormMethod { ClosedForm, Factorized1D, ProductQuadrature, SupSampling };

const char* to_string(NormMethod method);

struct NormBudget {
  // Gauss-Jacobi nodes per sub-interval between consecutive zeros.
  int piece_nodes = 20;
  // Dense samples per 1-D profile before refining maxima (p = inf).
  int sup_samples = 4096;
  // Product-rule degree used when |Y|^p is not a polynomial.
  int product_degree = 96;
  std::size_t node_cap = kDefaultSphereNodeCap;
  // Required relative slack of p = inf refinement.
  double sup_tolerance = 1e-6;
};

struct NormResult {
  double p = 2.0;  // +inf for the sup norm
  double value = 0.0;
  NormMethod method = NormMethod::ClosedForm;
  // p = inf only: estimated relative gap between `value` and the true sup.
  double slack = 0.0;
};

// (int |Y|^p dsigma)^{1/p}, or sup |Y| for p = inf. Without `route` the
// cheapest exact route is used: closed form for the power family, per-angle
// 1-D integrals for zonal and basis elements, sampling plus golden-section
// refinement for p = inf. Throws DomainError for p <= 0 or a route that does
// not apply to the family, BudgetError if the product rule is too large.
NormResult lp_norm(const HarmonicSpec& spec, double p, const NormBudget& budget = {},
                   std::optional<NormMethod> route = std::nullopt);

// Product-quadrature norm of a combination (sampled sup for p = inf, slack
// from comparison with a half-resolution grid).
NormResult lp_norm(const HarmonicCombination& y, double p, const NormBudget& budget = {});

// int_{-1}^{1} |(1-t^2)^{m/2} P_k^{(a,a)}(t)|^p (1-t^2)^w dt with a = m + w,
// integrated piecewise between the zeros of P_k.
double factor_abs_power_integral(int k, int m, double w, double p, int piece_nodes = 20);

// sup_{t in [-1,1]} |(1-t^2)^{m/2} P_k^{(a,a)}(t)|, a = m + w, by sampling and
// golden-section refinement. `slack` receives the relative refinement gap.
double factor_sup(int k, int m, double w, int samples, double* slack = nullptr);

}  // namespace revholder
