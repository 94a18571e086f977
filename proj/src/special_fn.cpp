#include "revholder/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "revholder/errors.hpp"

namespace revholder {
namespace {

constexpr double kDomainSlack = 1e-12;

double checked_t(double t) {
  if (!(std::fabs(t) <= 1.0 + kDomainSlack))
    throw DomainError("jacobi: argument t=" + std::to_string(t) + " outside [-1,1]");
  return std::clamp(t, -1.0, 1.0);
}

void check_degree(int n, const char* what) {
  if (n < 0) throw DomainError(std::string(what) + ": negative degree");
}

}  // namespace

DimensionParams::DimensionParams(int d) : d_(d) {
  if (d < 3) throw DomainError("dimension: d must be >= 3, got " + std::to_string(d));
  lambda_ = 0.5 * (d - 2);
  sphere_area_ = revholder::sphere_area(d);
}

double sphere_area(int k) {
  if (k < 1) throw DomainError("sphere_area: k must be >= 1");
  const double half = 0.5 * k;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

void JacobiParams::validate() const {
  check_degree(n, "jacobi");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("jacobi: indices must exceed -1 (alpha=" + std::to_string(alpha) +
                      ", beta=" + std::to_string(beta) + ")");
}

JacobiRecurrence::JacobiRecurrence(double alpha_, double beta_, int max_degree)
    : alpha(alpha_), beta(beta_) {
  JacobiParams{max_degree, alpha, beta}.validate();
  a.resize(max_degree);
  b.resize(max_degree);
  c.resize(max_degree);
  if (max_degree == 0) return;
  a[0] = 0.5 * (alpha + beta + 2.0);
  b[0] = 0.5 * (alpha - beta);
  c[0] = 0.0;
  const double ab = alpha + beta;
  const double diff2 = alpha * alpha - beta * beta;
  for (int k = 1; k < max_degree; ++k) {
    const double s = 2.0 * k + ab;
    const double denom = 2.0 * (k + 1) * (k + ab + 1.0) * s;
    a[k] = (s + 1.0) * (s + 2.0) * s / denom;
    b[k] = (s + 1.0) * diff2 / denom;
    c[k] = 2.0 * (k + alpha) * (k + beta) * (s + 2.0) / denom;
  }
}

JacobiPair jacobi_eval_pair(const JacobiParams& params, double t) {
  params.validate();
  t = checked_t(t);
  double prev = 0.0;
  double cur = 1.0;
  const double ab = params.alpha + params.beta;
  const double diff2 = params.alpha * params.alpha - params.beta * params.beta;
  for (int k = 0; k < params.n; ++k) {
    double next;
    if (k == 0) {
      next = 0.5 * ((ab + 2.0) * t + (params.alpha - params.beta));
    } else {
      const double s = 2.0 * k + ab;
      const double denom = 2.0 * (k + 1) * (k + ab + 1.0) * s;
      next = ((s + 1.0) * ((s + 2.0) * s * t + diff2) * cur -
              2.0 * (k + params.alpha) * (k + params.beta) * (s + 2.0) * prev) /
             denom;
    }
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double jacobi_eval(const JacobiParams& params, double t) { return jacobi_eval_pair(params, t).value; }

double log_binomial(double top, double k) {
  return std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0);
}

double binomial(int top, int k) {
  if (k < 0 || k > top) return 0.0;
  return std::round(std::exp(log_binomial(top, k)));
}

double log_jacobi_at_one(int n, double alpha) {
  check_degree(n, "jacobi_at_one");
  return std::lgamma(n + alpha + 1.0) - std::lgamma(alpha + 1.0) - std::lgamma(n + 1.0);
}

double jacobi_at_one(int n, double alpha) { return std::exp(log_jacobi_at_one(n, alpha)); }

double normalized_jacobi(const DimensionParams& dims, int n, double t) {
  const double a = dims.zonal_alpha();
  const double p = jacobi_eval({n, a, a}, t);
  return p * std::exp(-log_jacobi_at_one(n, a));
}

double delta2_diff(const DimensionParams& dims, int ell, int n, double t) {
  if (ell < 1) throw DomainError("delta2_diff: ell must be >= 1");
  check_degree(n, "delta2_diff");
  double sum = 0.0;
  for (int j = 0; j <= ell; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(ell, j) * normalized_jacobi(dims, n + 2 * j, t);
  }
  return sum;
}

double log_c_n_constant(const DimensionParams& dims, int n) {
  check_degree(n, "c_n_constant");
  const int d = dims.d();
  const double half_d = 0.5 * d;
  return std::lgamma(half_d) - std::log(2.0) - half_d * std::log(std::numbers::pi) +
         std::log((d + 2.0 * n - 2.0) / (d + n - 2.0)) + std::lgamma(d + n - 1.0) -
         std::lgamma(n + 1.0) - std::lgamma(d - 1.0);
}

double c_n_constant(const DimensionParams& dims, int n) {
  const double v = std::exp(log_c_n_constant(dims, n));
  if (!std::isfinite(v)) throw std::overflow_error("c_n_constant: result exceeds double range");
  return v;
}

double log_proj_constant(const DimensionParams& dims, int k) {
  check_degree(k, "proj_constant");
  const int d = dims.d();
  const double half_d = 0.5 * d;
  const double half_dm1 = 0.5 * (d - 1);
  return std::lgamma(half_d) + std::lgamma(half_dm1) - std::log(2.0) -
         half_d * std::log(std::numbers::pi) - std::lgamma(d - 1.0) + std::log(2.0 * k + d - 2.0) +
         std::lgamma(k + d - 2.0) - std::lgamma(k + half_dm1);
}

double proj_constant(const DimensionParams& dims, int k) {
  const double v = std::exp(log_proj_constant(dims, k));
  if (!std::isfinite(v)) throw std::overflow_error("proj_constant: result exceeds double range");
  return v;
}

double phi_kernel(const DimensionParams& dims, int n, double t) {
  check_degree(n, "phi_kernel");
  return c_n_constant(dims, n) * delta2_diff(dims, dims.d() - 2, n, t);
}

std::vector<double> delta2_coefficients(const DimensionParams& dims, int ell, int n) {
  if (ell < 1) throw DomainError("delta2_coefficients: ell must be >= 1");
  check_degree(n, "delta2_coefficients");
  const double a = dims.zonal_alpha();
  std::vector<double> w(n + 2 * ell + 1, 0.0);
  for (int j = 0; j <= ell; ++j) {
    const int deg = n + 2 * j;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    w[deg] = sign * binomial(ell, j) * std::exp(-log_jacobi_at_one(deg, a));
  }
  return w;
}

std::vector<double> phi_kernel_coefficients(const DimensionParams& dims, int n) {
  auto w = delta2_coefficients(dims, dims.d() - 2, n);
  const double cn = c_n_constant(dims, n);
  for (double& x : w) x *= cn;
  return w;
}

std::vector<double> projection_kernel_coefficients(const DimensionParams& dims, int k) {
  check_degree(k, "projection_kernel_coefficients");
  std::vector<double> w(k + 1, 0.0);
  w[k] = proj_constant(dims, k);
  return w;
}

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::NormalizedJacobi: return "normalized-jacobi";
    case KernelKind::Phi: return "phi-kernel";
    case KernelKind::Projection: return "projection-kernel";
  }
  return "unknown";
}

double KernelProfile::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> chebyshev_abscissae(std::size_t m) {
  if (m < 2) throw DomainError("chebyshev_abscissae: need at least 2 points");
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i)
    t[i] = -std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1));
  t.front() = -1.0;
  t.back() = 1.0;
  // Symmetric pairs are exact negatives of each other.
  for (std::size_t i = 0; i < m / 2; ++i) t[m - 1 - i] = -t[i];
  if (m % 2 == 1) t[m / 2] = 0.0;
  return t;
}

KernelProfile make_kernel_profile(const DimensionParams& dims, int degree, KernelKind kind,
                                  std::size_t samples) {
  KernelProfile profile{dims, degree, kind, chebyshev_abscissae(samples), {}};
  profile.values.reserve(samples);
  const double a = dims.zonal_alpha();
  const double cproj = kind == KernelKind::Projection ? proj_constant(dims, degree) : 0.0;
  for (double t : profile.abscissae) {
    double v = 0.0;
    switch (kind) {
      case KernelKind::NormalizedJacobi: v = normalized_jacobi(dims, degree, t); break;
      case KernelKind::Phi: v = phi_kernel(dims, degree, t); break;
      case KernelKind::Projection: v = cproj * jacobi_eval({degree, a, a}, t); break;
    }
    profile.values.push_back(v);
  }
  return profile;
}

}  // namespace revholder
