#pragma once

// Jacobi polynomials, the normalized ultraspherical functions R_n^lambda, the
// step-2 degree differences built from them, and the Gamma-ratio constants of
// the zonal reproducing kernels on S^{d-1}.
//
// All Gamma-based constants are evaluated as exp(sum of lgamma) so that degrees
// far beyond the native overflow of tgamma (~170) are fine.

#include <cstddef>
#include <span>
#include <vector>

namespace revholder {

// Sphere S^{d-1} in R^d together with lambda = (d-2)/2 and |S^{d-1}|.
class DimensionParams {
public:
  explicit DimensionParams(int d);

  int d() const { return d_; }
  double lambda() const { return lambda_; }
  // Jacobi index lambda - 1/2 = (d-3)/2 of the zonal polynomials.
  double zonal_alpha() const { return 0.5 * (d_ - 3); }
  double sphere_area() const { return sphere_area_; }

  friend bool operator==(const DimensionParams&, const DimensionParams&) = default;

private:
  int d_;
  double lambda_;
  double sphere_area_;
};

// |S^{k-1}| = 2 pi^{k/2} / Gamma(k/2), valid for k >= 1 (|S^0| = 2).
double sphere_area(int k);

struct JacobiParams {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;

  // Throws DomainError unless n >= 0 and alpha, beta > -1.
  void validate() const;
};

// Coefficients of P_{k+1} = (a_k t + b_k) P_k - c_k P_{k-1}, k = 0..max_degree-1.
// Shared by the scalar evaluator and the batched SIMD kernels.
struct JacobiRecurrence {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> a, b, c;

  JacobiRecurrence(double alpha, double beta, int max_degree);
  int max_degree() const { return static_cast<int>(a.size()); }
};

// P_n^{(alpha,beta)}(t) by forward recurrence. Throws DomainError for
// |t| > 1 + 1e-12 or invalid indices.
double jacobi_eval(const JacobiParams& params, double t);

// (P_n(t), P_{n-1}(t)) in one pass; P_{-1} := 0.
struct JacobiPair {
  double value;
  double previous;
};
JacobiPair jacobi_eval_pair(const JacobiParams& params, double t);

// log P_n^{(alpha,beta)}(1) = log binom(n + alpha, n).
double log_jacobi_at_one(int n, double alpha);
double jacobi_at_one(int n, double alpha);

double log_binomial(double top, double k);
double binomial(int top, int k);

// R_n^lambda(t) = P_n^{(lambda-1/2,lambda-1/2)}(t) / P_n^{(lambda-1/2,lambda-1/2)}(1).
double normalized_jacobi(const DimensionParams& dims, int n, double t);

// sum_{j=0}^{ell} (-1)^j binom(ell, j) R_{n+2j}^lambda(t), ell >= 1.
double delta2_diff(const DimensionParams& dims, int ell, int n, double t);

// c_n of the reproducing identity P(x) = c_n int P(y) R_n(x.y) dsigma(y).
double c_n_constant(const DimensionParams& dims, int n);
double log_c_n_constant(const DimensionParams& dims, int n);

// C_{k,d} of proj_k f(x) = C_{k,d} int f(y) P_k^{((d-3)/2,(d-3)/2)}(x.y) dsigma(y).
double proj_constant(const DimensionParams& dims, int k);
double log_proj_constant(const DimensionParams& dims, int k);

// Phi_n(t) = c_n sum_{j=0}^{d-2} (-1)^j binom(d-2, j) R_{n+2j}^lambda(t).
double phi_kernel(const DimensionParams& dims, int n, double t);

// Coefficients w_k (k = 0..deg) with K(t) = sum_k w_k P_k^{(a,a)}(t), a = (d-3)/2,
// for the zonal kernels above. Used by the batched evaluators.
std::vector<double> phi_kernel_coefficients(const DimensionParams& dims, int n);
std::vector<double> projection_kernel_coefficients(const DimensionParams& dims, int k);
std::vector<double> delta2_coefficients(const DimensionParams& dims, int ell, int n);

enum class KernelKind { NormalizedJacobi, Phi, Projection };

const char* to_string(KernelKind kind);

// Zonal kernel sampled as a function of t = cos(theta).
struct KernelProfile {
  DimensionParams dims;
  int degree;
  KernelKind kind;
  std::vector<double> abscissae;  // strictly increasing in [-1, 1]
  std::vector<double> values;

  double max_abs() const;
};

// Chebyshev-Lobatto abscissae -cos(pi i/(m-1)), i = 0..m-1 (m >= 2).
std::vector<double> chebyshev_abscissae(std::size_t m);

KernelProfile make_kernel_profile(const DimensionParams& dims, int degree, KernelKind kind,
                                  std::size_t samples = 2049);

}  // namespace revholder
