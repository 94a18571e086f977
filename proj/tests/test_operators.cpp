#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "revholder/errors.hpp"
#include "revholder/experiments.hpp"
#include "revholder/harmonics.hpp"
#include "revholder/operators.hpp"

using namespace revholder;
using doctest::Approx;

namespace {

BoundedFunction zonal_input(const DimensionParams& dims, int m) {
  const double a = dims.zonal_alpha();
  const int d = dims.d();
  return {[m, a, d](std::span<const double> x) { return jacobi_eval({m, a, a}, x[d - 1]); }, m};
}

BoundedFunction harmonic_input(const HarmonicCombination& y) {
  return {[y](std::span<const double> x) { return y(x); }, y.degree()};
}

// max |A(x) - scale * f(x)| and max |f| over the deterministic test points.
std::pair<double, double> deviation(const AppliedOperator& a, const SphereFunction& f, int d, double scale = 1.0,
                                    std::size_t count = 200) {
  const auto pts = sphere_test_points(d, count, 7);
  std::vector<double> out(count);
  a.evaluate(pts, out);
  double dev = 0.0, size = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::span<const double> x(pts.data() + i * d, d);
    const double fx = f(x);
    dev = std::max(dev, std::fabs(out[i] - scale * fx));
    size = std::max(size, std::fabs(fx));
  }
  return {dev, size};
}

}  // namespace

TEST_CASE("operator kernels") {
  const DimensionParams d4(4);
  const ZonalOperator proj(d4, OperatorKind::Projection, 6);
  CHECK(proj.kernel_degree() == 6);
  CHECK(proj.required_exactness(5) == 11);
  CHECK(proj.kernel(0.3) == Approx(proj_constant(d4, 6) * jacobi_eval({6, 0.5, 0.5}, 0.3)).epsilon(1e-12));
  const ZonalOperator t(d4, OperatorKind::TOperator, 5);
  CHECK(t.kernel_degree() == 9);
  const std::vector<double> ts{-1.0, -0.2, 0.7, 1.0};
  std::vector<double> out(ts.size());
  t.kernel(ts, out);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(out[i] == Approx(phi_kernel(d4, 5, ts[i])).epsilon(1e-11).scale(c_n_constant(d4, 5)));
  CHECK_THROWS_AS(ZonalOperator(d4, OperatorKind::Projection, -1), DomainError);
  CHECK(std::string(to_string(OperatorKind::TOperator)) == "t-operator");
}

TEST_CASE("projection examples") {
  for (int d : {3, 4}) {
    const DimensionParams dims(d);
    for (int k : {0, 3, 8}) {
      const BoundedFunction g = zonal_input(dims, k);
      const auto [dev, size] = deviation(project(dims, k, g), g.f, d);
      CHECK(dev <= 1e-8 * size);
      for (int m : {k + 1, k + 2}) {
        const BoundedFunction gm = zonal_input(dims, m);
        const double dev0 = deviation(project(dims, k, gm), gm.f, d, 0.0).first;
        CHECK(dev0 <= 1e-8 * jacobi_at_one(m, dims.zonal_alpha()));
      }
    }
  }
  const DimensionParams d3(3);
  const BoundedFunction x1{[](std::span<const double> x) { return x[0]; }, 1};
  const auto [dev, size] = deviation(project(d3, 1, x1), x1.f, 3);
  CHECK(dev <= 1e-10);
  CHECK(size > 0.5);
}

TEST_CASE("projection is idempotent on a random polynomial") {
  const DimensionParams d3(3);
  const BoundedFunction f = random_polynomial(3, 6, 4);
  const AppliedOperator once = project(d3, 4, f);
  const AppliedOperator twice = project(d3, 4, once.as_function());
  CHECK(once.degree() == 4);
  const auto [dev, size] = deviation(twice, [&](std::span<const double> x) { return once(x); }, 3);
  CHECK(dev <= 1e-9 * size);
}

TEST_CASE("projections sum to the identity") {
  const DimensionParams d4(4);
  const BoundedFunction f = random_polynomial(4, 5, 8);
  std::vector<AppliedOperator> parts;
  for (int k = 0; k <= 5; ++k) parts.push_back(project(d4, k, f));
  const auto pts = sphere_test_points(4, 50, 2);
  for (std::size_t i = 0; i < 50; ++i) {
    const std::span<const double> x(pts.data() + 4 * i, 4);
    double s = 0.0;
    for (const auto& p : parts) s += p(x);
    CHECK(s == Approx(f.f(x)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("T_n examples") {
  for (int d : {3, 4}) {
    const DimensionParams dims(d);
    for (int n : {2, 5}) {
      const HarmonicCombination y = random_harmonic(dims, n, 11);
      const BoundedFunction f = harmonic_input(y);
      const auto [dev, size] = deviation(t_operator(dims, n, f), f.f, d);
      CHECK(dev <= 1e-8 * size);
      // Degrees outside {n, n+2, ..., n+2(d-2)} are annihilated.
      for (int m : {n - 1, n + 1, n + 2 * (d - 2) + 2}) {
        if (m < 0) continue;
        const BoundedFunction gm = zonal_input(dims, m);
        const double dev0 = deviation(t_operator(dims, n, gm), gm.f, d, 0.0).first;
        CHECK(dev0 <= 1e-8 * jacobi_at_one(m, dims.zonal_alpha()));
      }
      // g_{n+2} is scaled by -binom(d-2,1) c_n / c_{n+2}.
      const BoundedFunction g2 = zonal_input(dims, n + 2);
      const double scale = -(d - 2) * c_n_constant(dims, n) / c_n_constant(dims, n + 2);
      const auto [dev2, size2] = deviation(t_operator(dims, n, g2), g2.f, d, scale);
      CHECK(dev2 <= 1e-8 * std::fabs(scale) * size2);
    }
  }
}

TEST_CASE("caller-supplied rules") {
  const DimensionParams d3(3);
  const ZonalOperator op(d3, OperatorKind::Projection, 4);
  const BoundedFunction f = zonal_input(d3, 4);
  auto low = std::make_shared<const QuadratureRule>(sphere_product_rule(d3, 7));
  CHECK_THROWS_AS(apply(op, f, low), ExactnessError);
  auto ok = std::make_shared<const QuadratureRule>(sphere_product_rule(d3, 8));
  const AppliedOperator a = apply(op, f, ok);
  CHECK(&a.rule() == ok.get());
  const std::vector<double> pole{0, 0, 1};
  CHECK(a(pole) == Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(apply(op, f, std::shared_ptr<const QuadratureRule>()), DomainError);
  CHECK_THROWS_AS(apply(op, f, std::make_shared<const QuadratureRule>(gauss_jacobi(30, 0, 0))), DomainError);
}

TEST_CASE("operator errors") {
  const DimensionParams d3(3), d5(5);
  CHECK_THROWS_AS(project(d5, 200, zonal_input(d5, 200), 100000), BudgetError);
  CHECK_THROWS_AS(project(d3, 2, BoundedFunction{[](std::span<const double>) { return 1.0; }, -1}), DomainError);
  CHECK_THROWS_AS(project(d3, 2, BoundedFunction{[](std::span<const double>) { return NAN; }, 2}), NonFiniteError);
  const AppliedOperator a = project(d3, 1, zonal_input(d3, 1));
  CHECK_THROWS_AS(a(std::vector<double>{1, 0}), DomainError);
  std::vector<double> out(1);
  CHECK_THROWS_AS(a.evaluate(std::vector<double>{1, 0, 0, 0, 1, 0}, out), DomainError);
}

TEST_CASE("zonal_convolve examples") {
  for (int d : {3, 4, 5}) {
    const DimensionParams dims(d);
    const double a = dims.zonal_alpha();
    const std::vector<double> s{-1.0, -0.3, 0.0, 0.45, 0.99, 1.0};
    for (int k : {0, 4, 9}) {
      auto g = [k, a](double t) { return jacobi_eval({k, a, a}, t); };
      const auto out = zonal_convolve(ZonalOperator(dims, OperatorKind::Projection, k), g, k, s);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(out[i] == Approx(g(s[i])).epsilon(1e-10).scale(1.0));
      const auto phi = zonal_convolve(ZonalOperator(dims, OperatorKind::TOperator, k), g, k, s);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(phi[i] == Approx(g(s[i])).epsilon(1e-10).scale(1.0));
      // Callable kernel overload.
      auto phi_k = [&dims, k](double t) { return phi_kernel(dims, k, t); };
      const auto phi2 = zonal_convolve(dims, phi_k, k + 2 * (d - 2), g, k, s);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(phi2[i] == Approx(phi[i]).epsilon(1e-10).scale(1.0));
    }
    const auto zero = zonal_convolve(ZonalOperator(dims, OperatorKind::TOperator, 3), [](double) { return 1.0; }, 0, s);
    for (double v : zero) CHECK(std::fabs(v) <= 1e-10);
  }
  const DimensionParams d3(3);
  CHECK_THROWS_AS(zonal_convolve(ZonalOperator(d3, OperatorKind::Projection, 2), [](double) { return 1.0; }, 0,
                                 std::vector<double>{1.5}),
                  DomainError);
  CHECK_THROWS_AS(zonal_convolve(ZonalOperator(d3, OperatorKind::Projection, 2), [](double) { return 1.0; }, -1,
                                 std::vector<double>{0.5}),
                  DomainError);
}

TEST_CASE("applied operators compose") {
  const DimensionParams d3(3);
  const HarmonicCombination y = random_harmonic(d3, 3, 5);
  const AppliedOperator t = t_operator(d3, 3, harmonic_input(y));
  const AppliedOperator p = project(d3, 3, t.as_function());
  const auto [dev, size] = deviation(p, [&](std::span<const double> x) { return y(x); }, 3);
  CHECK(dev <= 1e-8 * size);
}
