#pragma once

// Gauss rules for Jacobi weights on [-1,1], uniform rules on the circle, and
// product rules on S^{d-1} (d <= 6) with a certified polynomial exactness
// degree. Every rule audits its own moments when it is built and throws
// ConvergenceError if the audit fails.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revholder/special_fn.hpp"

namespace revholder {

enum class RuleKind { GaussJacobi, GaussUltraspherical, PeriodicUniform, SphereProduct };

const char* to_string(RuleKind kind);

class SpherePoint {
public:
  // Throws DomainError unless | |x| - 1 | <= 1e-12.
  explicit SpherePoint(std::vector<double> coords);
  // Normalizes a nonzero vector onto the sphere.
  static SpherePoint normalized(std::vector<double> v);
  // Unit basis vector e_k (0-based) in R^d.
  static SpherePoint axis(int d, int k);

  int dim() const { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }
  double dot(std::span<const double> other) const;

private:
  std::vector<double> coords_;
};

struct QuadratureRule {
  RuleKind kind = RuleKind::GaussJacobi;
  // Set for GaussUltraspherical and SphereProduct rules.
  std::optional<DimensionParams> dims;
  // Jacobi weight (1-t)^alpha (1+t)^beta of 1-D Gauss rules.
  double alpha = 0.0;
  double beta = 0.0;
  // 1 for interval/circle rules, d for sphere rules.
  int point_dim = 1;
  // Interval/circle rules: abscissae (circle: angles in [0, 2pi)).
  // Sphere rules: structure-of-arrays, coordinate k of node i at k*size() + i.
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
  // Polar-angle node count and azimuth count of sphere rules.
  int polar_nodes = 0;
  int azimuth_nodes = 0;

  std::size_t size() const { return weights.size(); }
  std::span<const double> coordinate(int k) const {
    return std::span<const double>(nodes).subspan(static_cast<std::size_t>(k) * size(), size());
  }
  std::vector<double> point(std::size_t i) const;
  // Measure of the integration domain.
  double total_measure() const;
};

// Gauss rule for int_{-1}^{1} f(t) (1-t)^alpha (1+t)^beta dt, exact through
// degree 2*num_nodes-1. Nodes from the Golub-Welsch eigenvalues, polished by
// Newton on the three-term recurrence; weights from the Christoffel formula.
QuadratureRule gauss_jacobi(int num_nodes, double alpha, double beta);

// Gauss rule for int_{-1}^{1} f(t) (1-t^2)^{(d-3)/2} dt.
QuadratureRule gauss_ultraspherical(const DimensionParams& dims, int num_nodes);

// Equispaced angles 2 pi j / M with weights 2 pi / M; exact for trigonometric
// polynomials of degree <= M-1.
QuadratureRule periodic_uniform(int num_points);

// Default cap on the number of sphere nodes.
inline constexpr std::size_t kDefaultSphereNodeCap = 20'000'000;

// Product rule on S^{d-1}, d in {3,...,6}, exact for spherical polynomials of
// total degree <= max_degree. Throws DomainError for d > 6 and BudgetError if
// the node count would exceed node_cap.
QuadratureRule sphere_product_rule(const DimensionParams& dims, int max_degree,
                                   std::size_t node_cap = kDefaultSphereNodeCap);

// Same construction with explicit resolution: polar_nodes Gauss nodes in each
// polar angle and azimuth_nodes uniform azimuth points. Exactness degree is
// min(2*polar_nodes - 1, azimuth_nodes - 1).
QuadratureRule sphere_product_rule(const DimensionParams& dims, int polar_nodes, int azimuth_nodes,
                                   std::size_t node_cap);

// Resolution rule for integrands that are smooth between known level sets
// t_j = const: polar angle j (1-based) is cut at the given t-values and each
// piece (at most pi/4 long) is integrated by Gauss-Legendre in theta_j with
// piece_nodes nodes. Angles without cuts use a plain Gauss-Jacobi rule with
// 4 * piece_nodes nodes.
// The claimed exactness min(piece_nodes, azimuth_nodes - 1) is certified by
// the moment audit like every other rule.
QuadratureRule sphere_composite_rule(const DimensionParams& dims, const std::vector<std::vector<double>>& polar_breaks,
                                     int piece_nodes, int azimuth_nodes, std::size_t node_cap = kDefaultSphereNodeCap);

// Number of nodes sphere_product_rule(dims, max_degree) would create.
std::size_t sphere_product_size(const DimensionParams& dims, int max_degree);

// sum_i w_i f(x_i) with compensated summation. Throws NonFiniteError naming
// the first node where f is not finite.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);
double integrate(const QuadratureRule& rule,
                 const std::function<double(std::span<const double>)>& f);
// sum_i w_i values[i]; values must be finite.
double integrate_values(const QuadratureRule& rule, std::span<const double> values);

struct MomentAudit {
  int degree = 0;
  std::size_t moments_checked = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

// Checks the rule against exact moments up to its exactness degree.
// Interval rules: u^k with u = (1+t)/2, k = 0..degree (all positive integrands).
// Circle rules: cos(k phi), sin(k phi), k = 0..degree.
// Sphere rules: every monomial of degree <= min(degree, 8) (lowered on very
// large rules to bound the work), plus x_i^a x_j^b for all axis pairs and
// even a + b <= degree. Moments are relative to max(sum w|m|, 1e-5 * area).
MomentAudit moment_audit(const QuadratureRule& rule, double tolerance = 1e-10);

// Text table: a header line, then one record per node with 17 significant
// digits ("t w" for interval rules, "x_1 ... x_d w" for sphere rules).
void save_rule(const QuadratureRule& rule, const std::string& path);
QuadratureRule load_rule(const std::string& path);

}  // namespace revholder
