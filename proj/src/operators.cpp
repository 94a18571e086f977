#include "revholder/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

namespace revholder {

const char* to_string(OperatorKind kind) {
  return kind == OperatorKind::Projection ? "projection" : "t-operator";
}

ZonalOperator::ZonalOperator(const DimensionParams& dims, OperatorKind kind, int index)
    : dims_(dims), kind_(kind), index_(index) {
  if (index < 0) throw DomainError(std::string(to_string(kind)) + ": negative index");
  coefficients_ = kind == OperatorKind::Projection ? projection_kernel_coefficients(dims, index)
                                                   : phi_kernel_coefficients(dims, index);
  for (double c : coefficients_)
    if (!std::isfinite(c)) throw NonFiniteError(std::string(to_string(kind)) + ": kernel coefficient not finite");
  const double a = dims.zonal_alpha();
  recurrence_ = std::make_shared<const JacobiRecurrence>(a, a, std::max(kernel_degree(), 1));
}

double ZonalOperator::kernel(double t) const {
  double out = 0.0;
  kernel(std::span<const double>(&t, 1), std::span<double>(&out, 1));
  return out;
}

void ZonalOperator::kernel(std::span<const double> t, std::span<double> out) const {
  kernels::jacobi_series(*recurrence_, coefficients_, t, out);
}

AppliedOperator::AppliedOperator(ZonalOperator op, std::shared_ptr<const QuadratureRule> rule,
                                 std::vector<double> weighted_values, int output_degree)
    : op_(std::move(op)), rule_(std::move(rule)), weighted_values_(std::move(weighted_values)),
      output_degree_(output_degree) {}

double AppliedOperator::operator()(std::span<const double> x) const {
  const int d = op_.dims().d();
  if (static_cast<int>(x.size()) != d) throw DomainError("operator evaluation: point dimension does not match d");
  const std::size_t m = rule_->size();
  std::vector<double> t(m), k(m);
  kernels::dot_points(x, rule_->nodes, m, t);
  for (double& v : t) v = std::clamp(v, -1.0, 1.0);
  op_.kernel(t, k);
  return kernels::weighted_sum(weighted_values_, k);
}

void AppliedOperator::evaluate(std::span<const double> points_aos, std::span<double> out) const {
  const std::size_t d = static_cast<std::size_t>(op_.dims().d());
  if (points_aos.size() != d * out.size()) throw DomainError("operator evaluation: points/out size mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(points_aos.subspan(i * d, d));
}

BoundedFunction AppliedOperator::as_function() const {
  auto self = std::make_shared<const AppliedOperator>(*this);
  return {[self](std::span<const double> x) { return (*self)(x); }, output_degree_};
}

namespace {

int output_degree(const ZonalOperator& op, int input_degree) {
  if (op.kind() == OperatorKind::Projection) return op.index();
  return std::min(input_degree, op.kernel_degree());
}

}  // namespace

AppliedOperator apply(const ZonalOperator& op, const BoundedFunction& f, std::shared_ptr<const QuadratureRule> rule) {
  if (f.degree < 0) throw DomainError("operator input: negative degree bound");
  if (!f.f) throw DomainError("operator input: empty function");
  if (!rule) throw DomainError("operator input: null quadrature rule");
  if (rule->kind != RuleKind::SphereProduct || rule->point_dim != op.dims().d())
    throw DomainError("operator input: rule is not a sphere rule for this dimension");
  const int need = op.required_exactness(f.degree);
  if (rule->exactness_degree < need)
    throw ExactnessError(std::string(to_string(op.kind())) + ": rule exactness " +
                         std::to_string(rule->exactness_degree) + " is below the required " + std::to_string(need));
  const std::size_t m = rule->size();
  std::vector<double> wf(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = f.f(rule->point(i));
    if (!std::isfinite(v)) throw NonFiniteError("operator input: non-finite value at node " + std::to_string(i));
    wf[i] = rule->weights[i] * v;
  }
  return AppliedOperator(op, std::move(rule), std::move(wf), output_degree(op, f.degree));
}

AppliedOperator apply(const ZonalOperator& op, const BoundedFunction& f, std::size_t node_cap) {
  if (f.degree < 0) throw DomainError("operator input: negative degree bound");
  auto rule = std::make_shared<const QuadratureRule>(
      sphere_product_rule(op.dims(), op.required_exactness(f.degree), node_cap));
  return apply(op, f, std::move(rule));
}

AppliedOperator project(const DimensionParams& dims, int k, const BoundedFunction& f, std::size_t node_cap) {
  return apply(ZonalOperator(dims, OperatorKind::Projection, k), f, node_cap);
}

AppliedOperator t_operator(const DimensionParams& dims, int n, const BoundedFunction& f, std::size_t node_cap) {
  return apply(ZonalOperator(dims, OperatorKind::TOperator, n), f, node_cap);
}

namespace {

// Inner rule over v in [-1,1] for the sphere S^{d-2} reduced to its first
// coordinate. d = 3 gives the Chebyshev weight (1-v^2)^{-1/2}.
struct FunkHeckeRules {
  QuadratureRule outer;
  QuadratureRule inner;
  double scale;
};

FunkHeckeRules funk_hecke_rules(const DimensionParams& dims, int kernel_degree, int h_degree) {
  if (kernel_degree < 0 || h_degree < 0) throw DomainError("zonal_convolve: negative degree bound");
  const double a_out = dims.zonal_alpha();
  const double a_in = 0.5 * (dims.d() - 4);
  const int n_out = (kernel_degree + h_degree) / 2 + 1;
  const int n_in = kernel_degree / 2 + 1;
  return {gauss_jacobi(n_out, a_out, a_out), gauss_jacobi(n_in, a_in, a_in), sphere_area(dims.d() - 2)};
}

template <typename KernelBatch>
std::vector<double> funk_hecke(const FunkHeckeRules& r, const std::function<double(double)>& h,
                               std::span<const double> s, KernelBatch&& kernel_batch) {
  const std::size_t nu = r.outer.size(), nv = r.inner.size();
  std::vector<double> hw(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    const double v = h(r.outer.nodes[i]);
    if (!std::isfinite(v)) throw NonFiniteError("zonal_convolve: profile not finite at node " + std::to_string(i));
    hw[i] = r.outer.weights[i] * v;
  }
  std::vector<double> args(nu * nv), kv(nu * nv), inner(nu);
  std::vector<double> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(std::fabs(s[k]) <= 1.0 + 1e-12)) throw DomainError("zonal_convolve: |s| > 1");
    const double sk = std::clamp(s[k], -1.0, 1.0);
    const double ck = std::sqrt(std::max(0.0, (1.0 - sk) * (1.0 + sk)));
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = r.outer.nodes[i];
      const double cu = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
      for (std::size_t j = 0; j < nv; ++j)
        args[i * nv + j] = std::clamp(u * sk + cu * ck * r.inner.nodes[j], -1.0, 1.0);
    }
    kernel_batch(args, kv);
    for (std::size_t i = 0; i < nu; ++i)
      inner[i] = kernels::weighted_sum(r.inner.weights, std::span<const double>(kv).subspan(i * nv, nv));
    out[k] = r.scale * kernels::weighted_sum(hw, inner);
  }
  return out;
}

}  // namespace

std::vector<double> zonal_convolve(const DimensionParams& dims, const std::function<double(double)>& kernel,
                                   int kernel_degree, const std::function<double(double)>& h, int h_degree,
                                   std::span<const double> s) {
  const FunkHeckeRules r = funk_hecke_rules(dims, kernel_degree, h_degree);
  return funk_hecke(r, h, s, [&](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = kernel(t[i]);
  });
}

std::vector<double> zonal_convolve(const ZonalOperator& op, const std::function<double(double)>& h, int h_degree,
                                   std::span<const double> s) {
  const FunkHeckeRules r = funk_hecke_rules(op.dims(), op.kernel_degree(), h_degree);
  return funk_hecke(r, h, s, [&](std::span<const double> t, std::span<double> out) { op.kernel(t, out); });
}

}  // namespace revholder
