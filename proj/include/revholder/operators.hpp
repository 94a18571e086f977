#pragma once

// Zonal integral operators on S^{d-1}: the orthogonal projection proj_k onto
// H_k^d and the convolution T_n with Phi_n. Both are applied by a sphere
// product rule whose exactness covers input degree + kernel degree, so inputs
// must declare a polynomial degree bound.
//
// Results are lazy: the input is sampled once on the rule and the integral is
// formed at whatever points are requested.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "revholder/quadrature.hpp"
#include "revholder/special_fn.hpp"

namespace revholder {

using SphereFunction = std::function<double(std::span<const double>)>;

// A function on the sphere that is the restriction of a polynomial of degree
// at most `degree`.
struct BoundedFunction {
  SphereFunction f;
  int degree = 0;
};

enum class OperatorKind { Projection, TOperator };

const char* to_string(OperatorKind kind);

class ZonalOperator {
public:
  // Projection onto H_k^d (index = k) or T_n (index = n).
  ZonalOperator(const DimensionParams& dims, OperatorKind kind, int index);

  const DimensionParams& dims() const { return dims_; }
  OperatorKind kind() const { return kind_; }
  int index() const { return index_; }
  // Polynomial degree of the kernel t -> K(t).
  int kernel_degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  // K(t) = sum_k coefficients()[k] P_k^{(a,a)}(t), a = (d-3)/2.
  const std::vector<double>& coefficients() const { return coefficients_; }
  const JacobiRecurrence& recurrence() const { return *recurrence_; }

  double kernel(double t) const;
  // Batched kernel evaluation through the SIMD kernels.
  void kernel(std::span<const double> t, std::span<double> out) const;

  // Exactness needed for an input of the given degree.
  int required_exactness(int input_degree) const { return input_degree + kernel_degree(); }

private:
  DimensionParams dims_;
  OperatorKind kind_;
  int index_;
  std::vector<double> coefficients_;
  std::shared_ptr<const JacobiRecurrence> recurrence_;
};

// x -> int f(y) K(x.y) dsigma(y), evaluated on demand.
class AppliedOperator {
public:
  AppliedOperator(ZonalOperator op, std::shared_ptr<const QuadratureRule> rule, std::vector<double> weighted_values,
                  int output_degree);

  double operator()(std::span<const double> x) const;
  void evaluate(std::span<const double> points_aos, std::span<double> out) const;
  // Degree bound of the output, usable as the input of another operator.
  int degree() const { return output_degree_; }
  BoundedFunction as_function() const;
  const QuadratureRule& rule() const { return *rule_; }

private:
  ZonalOperator op_;
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<double> weighted_values_;
  int output_degree_;
};

// Applies the operator with a freshly built product rule of exactness
// required_exactness(f.degree). Throws BudgetError when the rule exceeds
// node_cap and DomainError for a negative degree bound.
AppliedOperator apply(const ZonalOperator& op, const BoundedFunction& f,
                      std::size_t node_cap = kDefaultSphereNodeCap);
// As above with a caller-supplied rule; throws ExactnessError if its
// exactness is below required_exactness(f.degree).
AppliedOperator apply(const ZonalOperator& op, const BoundedFunction& f, std::shared_ptr<const QuadratureRule> rule);

AppliedOperator project(const DimensionParams& dims, int k, const BoundedFunction& f,
                        std::size_t node_cap = kDefaultSphereNodeCap);
AppliedOperator t_operator(const DimensionParams& dims, int n, const BoundedFunction& f,
                           std::size_t node_cap = kDefaultSphereNodeCap);

// Funk-Hecke reduction: for zonal input f(y) = h(y.e) the convolution
// int h(y.e) K(x.y) dsigma(y) depends only on s = x.e. Returns its values at
// `s`, using Gauss-Jacobi rules exact for the declared degrees.
std::vector<double> zonal_convolve(const DimensionParams& dims, const std::function<double(double)>& kernel,
                                   int kernel_degree, const std::function<double(double)>& h, int h_degree,
                                   std::span<const double> s);
// Same with the kernel given by its Jacobi coefficients (batched SIMD path).
std::vector<double> zonal_convolve(const ZonalOperator& op, const std::function<double(double)>& h, int h_degree,
                                   std::span<const double> s);

}  // namespace revholder
