#include "revholder/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

namespace revholder {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Tridiagonal Jacobi matrix of the monic Jacobi polynomials.
void jacobi_matrix(int n, double alpha, double beta, Eigen::VectorXd& diag, Eigen::VectorXd& sub) {
  diag.resize(n);
  sub.resize(std::max(n - 1, 0));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag[k] = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      const double s = 2.0 * k + ab;
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub[k - 1] = std::sqrt(b2);
  }
}

// Node polish and weights run in extended precision: the weight formula has
// relative sensitivity ~N^2 eps to the node near the endpoints.
using Wide = long double;

struct WidePair {
  Wide value;
  Wide previous;
};

WidePair jacobi_pair_wide(int n, Wide alpha, Wide beta, Wide t) {
  Wide prev = 0, cur = 1;
  const Wide ab = alpha + beta;
  const Wide diff2 = alpha * alpha - beta * beta;
  for (int k = 0; k < n; ++k) {
    Wide next;
    if (k == 0) {
      next = 0.5L * ((ab + 2) * t + (alpha - beta));
    } else {
      const Wide s = 2.0L * k + ab;
      next = ((s + 1) * ((s + 2) * s * t + diff2) * cur - 2 * (k + alpha) * (k + beta) * (s + 2) * prev) /
             (2 * (k + 1) * (k + ab + 1) * s);
    }
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// (1 - x^2) P_N'(x) expressed through P_N and P_{N-1}.
Wide one_minus_x2_derivative(int n, Wide alpha, Wide beta, Wide x, const WidePair& p) {
  const Wide s = 2.0L * n + alpha + beta;
  return (n * ((alpha - beta) - s * x) * p.value + 2 * (n + alpha) * (n + beta) * p.previous) / s;
}

double monomial_sphere_integral(std::span<const int> exps) {
  int total = 0;
  double log_num = 0.0;
  for (int e : exps) {
    if (e % 2 != 0) return 0.0;
    total += e;
    log_num += std::lgamma(0.5 * (e + 1));
  }
  const double d = static_cast<double>(exps.size());
  return 2.0 * std::exp(log_num - std::lgamma(0.5 * (total + d)));
}

void certify(const QuadratureRule& rule, const char* what) {
  for (double w : rule.weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ConvergenceError(std::string(what) + ": non-positive or non-finite weight");
  const MomentAudit audit = moment_audit(rule);
  if (!audit.passed) {
    std::ostringstream msg;
    msg << what << ": moment audit failed (max relative error " << audit.max_relative_error
        << " at exactness degree " << audit.degree << ")";
    throw ConvergenceError(msg.str());
  }
}

// Tensor product of 1-D polar rules (in t_j) and a uniform azimuth.
QuadratureRule assemble_sphere_rule(const DimensionParams& dims, const std::vector<QuadratureRule>& polar,
                                    int azimuth_nodes, std::size_t count) {
  const int d = dims.d();
  const int polar_dims = d - 2;
  const QuadratureRule azimuth = periodic_uniform(azimuth_nodes);

  QuadratureRule rule;
  rule.kind = RuleKind::SphereProduct;
  rule.dims = dims;
  rule.point_dim = d;
  rule.azimuth_nodes = azimuth_nodes;
  rule.nodes.assign(static_cast<std::size_t>(d) * count, 0.0);
  rule.weights.resize(count);

  std::vector<std::size_t> index(polar_dims, 0);
  std::vector<double> x(d);
  std::size_t node = 0;
  for (;;) {
    double r = 1.0;
    double w = 1.0;
    for (int j = 0; j < polar_dims; ++j) {
      const double t = polar[j].nodes[index[j]];
      x[d - 1 - j] = r * t;
      r *= std::sqrt((1.0 - t) * (1.0 + t));
      w *= polar[j].weights[index[j]];
    }
    for (int m = 0; m < azimuth_nodes; ++m) {
      const double phi = azimuth.nodes[m];
      x[0] = r * std::cos(phi);
      x[1] = r * std::sin(phi);
      double norm2 = 0.0;
      for (double c : x) norm2 += c * c;
      const double inv = 1.0 / std::sqrt(norm2);
      for (int k = 0; k < d; ++k) rule.nodes[static_cast<std::size_t>(k) * count + node] = x[k] * inv;
      rule.weights[node] = w * azimuth.weights[m];
      ++node;
    }
    int j = polar_dims - 1;
    while (j >= 0 && ++index[j] == polar[j].size()) index[j--] = 0;
    if (j < 0) break;
  }
  return rule;
}

std::size_t capped_count(const std::vector<std::size_t>& factors, std::size_t node_cap) {
  std::size_t count = 1;
  for (std::size_t f : factors) {
    if (f != 0 && count > node_cap / f + 1) return node_cap + 1;
    count *= f;
  }
  return count;
}

}  // namespace

const char* to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::GaussJacobi: return "gauss-jacobi";
    case RuleKind::GaussUltraspherical: return "gauss-ultraspherical";
    case RuleKind::PeriodicUniform: return "periodic-uniform";
    case RuleKind::SphereProduct: return "sphere-product";
  }
  return "unknown";
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  double norm2 = 0.0;
  for (double c : coords_) norm2 += c * c;
  if (coords_.empty() || !(std::fabs(std::sqrt(norm2) - 1.0) <= 1e-12))
    throw DomainError("SpherePoint: coordinates do not have unit norm");
}

SpherePoint SpherePoint::normalized(std::vector<double> v) {
  double norm2 = 0.0;
  for (double c : v) norm2 += c * c;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("SpherePoint: cannot normalize zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : v) c *= inv;
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::axis(int d, int k) {
  if (k < 0 || k >= d) throw DomainError("SpherePoint::axis: index out of range");
  std::vector<double> v(d, 0.0);
  v[k] = 1.0;
  return SpherePoint(std::move(v));
}

double SpherePoint::dot(std::span<const double> other) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other[i];
  return s;
}

std::vector<double> QuadratureRule::point(std::size_t i) const {
  std::vector<double> p(point_dim);
  if (point_dim == 1) {
    p[0] = nodes[i];
  } else {
    for (int k = 0; k < point_dim; ++k) p[k] = nodes[static_cast<std::size_t>(k) * size() + i];
  }
  return p;
}

double QuadratureRule::total_measure() const {
  switch (kind) {
    case RuleKind::GaussJacobi:
    case RuleKind::GaussUltraspherical:
      return std::exp((alpha + beta + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0));
    case RuleKind::PeriodicUniform: return kTwoPi;
    case RuleKind::SphereProduct: return dims->sphere_area();
  }
  return 0.0;
}

QuadratureRule gauss_jacobi(int num_nodes, double alpha, double beta) {
  if (num_nodes < 1) throw DomainError("gauss_jacobi: num_nodes must be >= 1");
  JacobiParams{num_nodes, alpha, beta}.validate();

  QuadratureRule rule;
  rule.kind = RuleKind::GaussJacobi;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.exactness_degree = 2 * num_nodes - 1;
  rule.nodes.resize(num_nodes);
  rule.weights.resize(num_nodes);

  const double log_mass = (alpha + beta + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0);
  if (num_nodes == 1) {
    rule.nodes[0] = (beta - alpha) / (alpha + beta + 2.0);
    rule.weights[0] = std::exp(log_mass);
    certify(rule, "gauss_jacobi");
    return rule;
  }

  Eigen::VectorXd diag, sub;
  jacobi_matrix(num_nodes, alpha, beta, diag, sub);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("gauss_jacobi: tridiagonal eigensolver failed");
  const Eigen::VectorXd eig = solver.eigenvalues();

  const int n = num_nodes;
  const Wide wa = alpha, wb = beta;
  const Wide log_g = (wa + wb + 1) * std::log(2.0L) + std::lgamma(n + wa + 1) + std::lgamma(n + wb + 1) -
                     std::lgamma(n + wa + wb + 1) - std::lgamma(n + 1.0L);
  for (int i = 0; i < n; ++i) {
    Wide x = std::clamp(eig[i], -1.0, 1.0);
    // Newton on P_N; a step is rejected if it would leave the bracket formed
    // by the neighbouring eigenvalues.
    const Wide lo = i > 0 ? 0.5L * (eig[i - 1] + eig[i]) : -1.0L;
    const Wide hi = i + 1 < n ? 0.5L * (eig[i] + eig[i + 1]) : 1.0L;
    for (int iter = 0; iter < 10; ++iter) {
      const WidePair p = jacobi_pair_wide(n, wa, wb, x);
      const Wide omx2 = (1 - x) * (1 + x);
      const Wide dp = one_minus_x2_derivative(n, wa, wb, x, p) / omx2;
      if (dp == 0 || !std::isfinite(dp)) break;
      const Wide step = p.value / dp;
      const Wide next = x - step;
      if (!(next > lo && next < hi)) break;
      x = next;
      if (std::fabs(step) <= 4 * std::numeric_limits<Wide>::epsilon() * std::max(std::fabs(x), 1e-3L)) break;
    }
    const WidePair p = jacobi_pair_wide(n, wa, wb, x);
    const Wide omx2 = (1 - x) * (1 + x);
    // w = G (1-x^2) / ((1-x^2) P_N'(x))^2 with P_N(x) = 0.
    const Wide q = 2 * (n + wa) * (n + wb) * p.previous / (2.0L * n + wa + wb);
    rule.nodes[i] = static_cast<double>(x);
    rule.weights[i] = static_cast<double>(std::exp(log_g + std::log(omx2) - 2 * std::log(std::fabs(q))));
  }
  if (!std::is_sorted(rule.nodes.begin(), rule.nodes.end()))
    throw ConvergenceError("gauss_jacobi: nodes not strictly increasing");
  for (int i = 1; i < n; ++i)
    if (!(rule.nodes[i] > rule.nodes[i - 1])) throw ConvergenceError("gauss_jacobi: coincident nodes");
  certify(rule, "gauss_jacobi");
  return rule;
}

QuadratureRule gauss_ultraspherical(const DimensionParams& dims, int num_nodes) {
  const double a = dims.zonal_alpha();
  QuadratureRule rule = gauss_jacobi(num_nodes, a, a);
  rule.kind = RuleKind::GaussUltraspherical;
  rule.dims = dims;
  return rule;
}

QuadratureRule periodic_uniform(int num_points) {
  if (num_points < 1) throw DomainError("periodic_uniform: num_points must be >= 1");
  QuadratureRule rule;
  rule.kind = RuleKind::PeriodicUniform;
  rule.exactness_degree = num_points - 1;
  rule.nodes.resize(num_points);
  rule.weights.assign(num_points, kTwoPi / num_points);
  for (int j = 0; j < num_points; ++j) rule.nodes[j] = kTwoPi * j / num_points;
  certify(rule, "periodic_uniform");
  return rule;
}

std::size_t sphere_product_size(const DimensionParams& dims, int max_degree) {
  if (max_degree < 0) throw DomainError("sphere_product_rule: max_degree must be >= 0");
  const std::size_t polar = static_cast<std::size_t>(max_degree / 2 + 1);
  std::size_t count = static_cast<std::size_t>(max_degree + 1);
  for (int j = 0; j < dims.d() - 2; ++j) {
    if (count > std::numeric_limits<std::size_t>::max() / polar) return std::numeric_limits<std::size_t>::max();
    count *= polar;
  }
  return count;
}

QuadratureRule sphere_product_rule(const DimensionParams& dims, int max_degree, std::size_t node_cap) {
  if (max_degree < 0) throw DomainError("sphere_product_rule: max_degree must be >= 0");
  return sphere_product_rule(dims, max_degree / 2 + 1, max_degree + 1, node_cap);
}

QuadratureRule sphere_product_rule(const DimensionParams& dims, int polar_nodes, int azimuth_nodes,
                                   std::size_t node_cap) {
  const int d = dims.d();
  if (d > 6) throw DomainError("sphere_product_rule: dimension d=" + std::to_string(d) + " too large (max 6)");
  if (polar_nodes < 1 || azimuth_nodes < 1) throw DomainError("sphere_product_rule: resolution must be >= 1");
  const int polar_dims = d - 2;
  std::size_t count = static_cast<std::size_t>(azimuth_nodes);
  for (int j = 0; j < polar_dims; ++j) {
    if (count > node_cap / static_cast<std::size_t>(polar_nodes) + 1) {
      count = node_cap + 1;
      break;
    }
    count *= static_cast<std::size_t>(polar_nodes);
  }
  if (count > node_cap)
    throw BudgetError("sphere_product_rule: node count exceeds cap of " + std::to_string(node_cap));

  // Polar angle j (1-based) carries the weight (1-t^2)^{(d-2-j)/2}.
  std::vector<QuadratureRule> polar;
  for (int j = 1; j <= polar_dims; ++j) {
    const double a = 0.5 * (d - 2 - j);
    polar.push_back(gauss_jacobi(polar_nodes, a, a));
  }
  QuadratureRule rule = assemble_sphere_rule(dims, polar, azimuth_nodes, count);
  rule.polar_nodes = polar_nodes;
  rule.exactness_degree = std::min(2 * polar_nodes - 1, azimuth_nodes - 1);
  certify(rule, "sphere_product_rule");
  return rule;
}

QuadratureRule sphere_composite_rule(const DimensionParams& dims, const std::vector<std::vector<double>>& polar_breaks,
                                     int piece_nodes, int azimuth_nodes, std::size_t node_cap) {
  const int d = dims.d();
  if (d > 6) throw DomainError("sphere_composite_rule: dimension d=" + std::to_string(d) + " too large (max 6)");
  if (static_cast<int>(polar_breaks.size()) != d - 2)
    throw DomainError("sphere_composite_rule: need d-2 breakpoint lists");
  if (piece_nodes < 1 || azimuth_nodes < 1) throw DomainError("sphere_composite_rule: resolution must be >= 1");
  const QuadratureRule legendre = gauss_jacobi(piece_nodes, 0.0, 0.0);
  std::vector<QuadratureRule> polar;
  std::vector<std::size_t> sizes{static_cast<std::size_t>(azimuth_nodes)};
  for (int j = 1; j <= d - 2; ++j) {
    // Pieces in theta = arccos t; dt (1-t^2)^{(d-2-j)/2} = sin^{d-1-j}(theta) dtheta.
    std::vector<double> cuts{0.0, std::numbers::pi};
    for (double t : polar_breaks[j - 1]) {
      if (!(t > -1.0 && t < 1.0)) throw DomainError("sphere_composite_rule: breakpoints must lie in (-1, 1)");
      cuts.push_back(std::acos(t));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double a = 0.5 * (d - 2 - j);
    if (cuts.size() == 2) {
      // Smooth level: plain Gauss-Jacobi in t, as many nodes as four pieces.
      // Endpoint factors (1-t^2)^{s/2} with odd s converge only algebraically.
      QuadratureRule r = gauss_jacobi(4 * piece_nodes, a, a);
      sizes.push_back(r.size());
      polar.push_back(std::move(r));
      continue;
    }
    std::vector<double> fine{cuts.front()};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const int parts = static_cast<int>(std::ceil((cuts[i + 1] - cuts[i]) / (std::numbers::pi / 4)));
      for (int k = 1; k <= parts; ++k) fine.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * k / parts);
    }
    cuts = std::move(fine);
    QuadratureRule r;
    r.kind = RuleKind::GaussJacobi;
    r.alpha = r.beta = a;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], half = 0.5 * (cuts[i + 1] - cuts[i]);
      for (std::size_t k = 0; k < legendre.size(); ++k) {
        const double theta = lo + half * (1.0 + legendre.nodes[k]);
        r.nodes.push_back(std::cos(theta));
        r.weights.push_back(half * legendre.weights[k] * std::pow(std::sin(theta), d - 1 - j));
      }
    }
    sizes.push_back(r.size());
    polar.push_back(std::move(r));
  }
  const std::size_t count = capped_count(sizes, node_cap);
  if (count > node_cap)
    throw BudgetError("sphere_composite_rule: node count exceeds cap of " + std::to_string(node_cap));
  QuadratureRule rule = assemble_sphere_rule(dims, polar, azimuth_nodes, count);
  rule.polar_nodes = piece_nodes;
  rule.exactness_degree = std::min(piece_nodes, azimuth_nodes - 1);
  certify(rule, "sphere_composite_rule");
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  if (rule.point_dim != 1) throw DomainError("integrate: rule is not one-dimensional");
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    values[i] = f(rule.nodes[i]);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "integrate: non-finite integrand at node " << i << " (t=" << rule.nodes[i] << ")";
      throw NonFiniteError(msg.str());
    }
  }
  return kernels::weighted_sum(rule.weights, values);
}

double integrate(const QuadratureRule& rule, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const std::vector<double> p = rule.point(i);
    values[i] = f(p);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "integrate: non-finite integrand at node " << i << " (";
      for (std::size_t k = 0; k < p.size(); ++k) msg << (k ? "," : "") << p[k];
      msg << ")";
      throw NonFiniteError(msg.str());
    }
  }
  return kernels::weighted_sum(rule.weights, values);
}

double integrate_values(const QuadratureRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) throw DomainError("integrate_values: length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw NonFiniteError("integrate_values: non-finite value at node " + std::to_string(i));
  return kernels::weighted_sum(rule.weights, values);
}

MomentAudit moment_audit(const QuadratureRule& rule, double tolerance) {
  MomentAudit audit;
  audit.degree = rule.exactness_degree;
  auto record = [&](double approx, double exact, double scale) {
    const double err = std::fabs(approx - exact) / scale;
    audit.max_relative_error = std::max(audit.max_relative_error, std::isfinite(err) ? err : HUGE_VAL);
    ++audit.moments_checked;
  };

  const std::size_t n = rule.size();
  std::vector<double> values(n);
  switch (rule.kind) {
    case RuleKind::GaussJacobi:
    case RuleKind::GaussUltraspherical: {
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = 0.5 * (1.0 + rule.nodes[i]);
      std::fill(values.begin(), values.end(), 1.0);
      const double log2ab = (rule.alpha + rule.beta + 1.0) * std::log(2.0);
      for (int k = 0; k <= rule.exactness_degree; ++k) {
        if (k > 0)
          for (std::size_t i = 0; i < n; ++i) values[i] *= u[i];
        const double exact = std::exp(log2ab + log_beta(k + rule.beta + 1.0, rule.alpha + 1.0));
        record(kernels::weighted_sum(rule.weights, values), exact, exact);
      }
      break;
    }
    case RuleKind::PeriodicUniform: {
      for (int k = 0; k <= rule.exactness_degree; ++k) {
        for (std::size_t i = 0; i < n; ++i) values[i] = std::cos(k * rule.nodes[i]);
        record(kernels::weighted_sum(rule.weights, values), k == 0 ? kTwoPi : 0.0, kTwoPi);
        for (std::size_t i = 0; i < n; ++i) values[i] = std::sin(k * rule.nodes[i]);
        record(kernels::weighted_sum(rule.weights, values), 0.0, kTwoPi);
      }
      break;
    }
    case RuleKind::SphereProduct: {
      const int d = rule.point_dim;
      std::vector<double> abs_values(n);
      double total = 0.0;
      for (double w : rule.weights) total += std::fabs(w);
      auto check = [&](std::span<const int> exps) {
        for (std::size_t i = 0; i < n; ++i) {
          double v = 1.0;
          for (int k = 0; k < d; ++k)
            for (int e = 0; e < exps[k]; ++e) v *= rule.nodes[static_cast<std::size_t>(k) * n + i];
          values[i] = v;
          abs_values[i] = std::fabs(v);
        }
        const double exact = monomial_sphere_integral(exps);
        // Floor keeps vanishing moments from comparing rounding noise with itself.
        const double scale = std::max({kernels::weighted_sum(rule.weights, abs_values), exact, 1e-5 * total});
        record(kernels::weighted_sum(rule.weights, values), exact, scale);
      };
      // Full monomial basis at low degree.
      // Lowered on large rules so the audit stays within ~1e8 node visits.
      int low = std::min(rule.exactness_degree, 8);
      auto basis_size = [d](int deg) {
        double c = 1.0;  // C(deg + d, d): monomials of degree <= deg
        for (int i = 1; i <= d; ++i) c = c * (deg + i) / i;
        return c;
      };
      while (low > 2 && basis_size(low) * static_cast<double>(n) > 1e8) --low;
      std::vector<int> exps(d, 0);
      std::function<void(int, int)> enumerate = [&](int k, int remaining) {
        if (k == d - 1) {
          exps[k] = remaining;
          check(exps);
          return;
        }
        for (int e = 0; e <= remaining; ++e) {
          exps[k] = e;
          enumerate(k + 1, remaining - e);
        }
      };
      for (int deg = 0; deg <= low; ++deg) enumerate(0, deg);
      // Axis pairs at every even degree up to exactness.
      for (int deg = low + 1; deg <= rule.exactness_degree; ++deg) {
        if (deg % 2 != 0) continue;
        for (int a = 0; a < d; ++a)
          for (int b = a; b < d; ++b) {
            std::fill(exps.begin(), exps.end(), 0);
            if (a == b) {
              exps[a] = deg;
              check(exps);
            } else {
              exps[a] = deg / 2 + (deg / 2) % 2;
              exps[b] = deg - exps[a];
              check(exps);
            }
          }
      }
      break;
    }
  }
  audit.passed = audit.max_relative_error <= tolerance;
  return audit;
}

void save_rule(const QuadratureRule& rule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_rule: cannot open " + path);
  out << "# kind=" << to_string(rule.kind) << " d=" << (rule.dims ? rule.dims->d() : 0)
      << " size=" << rule.size() << " point_dim=" << rule.point_dim << " exactness=" << rule.exactness_degree
      << " polar=" << rule.polar_nodes << " azimuth=" << rule.azimuth_nodes << std::setprecision(17)
      << " alpha=" << rule.alpha << " beta=" << rule.beta << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (double c : rule.point(i)) out << c << ' ';
    out << rule.weights[i] << '\n';
  }
  if (!out) throw std::runtime_error("save_rule: write failed for " + path);
}

QuadratureRule load_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_rule: cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# ", 0) != 0) throw std::runtime_error("load_rule: missing header in " + path);
  std::istringstream fields(header.substr(2));
  std::string token, kind;
  int d = 0;
  std::size_t size = 0;
  QuadratureRule rule;
  while (fields >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "kind") kind = val;
    else if (key == "d") d = std::stoi(val);
    else if (key == "size") size = std::stoul(val);
    else if (key == "point_dim") rule.point_dim = std::stoi(val);
    else if (key == "exactness") rule.exactness_degree = std::stoi(val);
    else if (key == "polar") rule.polar_nodes = std::stoi(val);
    else if (key == "azimuth") rule.azimuth_nodes = std::stoi(val);
    else if (key == "alpha") rule.alpha = std::stod(val);
    else if (key == "beta") rule.beta = std::stod(val);
  }
  if (kind == "gauss-jacobi") rule.kind = RuleKind::GaussJacobi;
  else if (kind == "gauss-ultraspherical") rule.kind = RuleKind::GaussUltraspherical;
  else if (kind == "periodic-uniform") rule.kind = RuleKind::PeriodicUniform;
  else if (kind == "sphere-product") rule.kind = RuleKind::SphereProduct;
  else throw std::runtime_error("load_rule: unknown kind '" + kind + "'");
  if (d >= 3) rule.dims = DimensionParams(d);
  if (rule.point_dim < 1) throw std::runtime_error("load_rule: bad point dimension");

  rule.nodes.assign(static_cast<std::size_t>(rule.point_dim) * size, 0.0);
  rule.weights.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (int k = 0; k < rule.point_dim; ++k) {
      double v;
      if (!(in >> v)) throw std::runtime_error("load_rule: truncated table in " + path);
      rule.nodes[rule.point_dim == 1 ? i : static_cast<std::size_t>(k) * size + i] = v;
    }
    if (!(in >> rule.weights[i])) throw std::runtime_error("load_rule: truncated table in " + path);
  }
  return rule;
}

}  // namespace revholder
