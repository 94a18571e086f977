#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

using namespace revholder;
namespace k = revholder::kernels;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Restores the backend chosen at startup.
struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(k::backend_available(k::Backend::Scalar));
  CHECK(std::string(k::to_string(k::Backend::Scalar)) == "scalar");
  CHECK(std::string(k::to_string(k::Backend::Avx2)) == "avx2");
}

TEST_CASE("backend override") {
  BackendGuard guard;
  k::set_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  if (k::backend_available(k::Backend::Avx2)) {
    k::set_backend(k::Backend::Avx2);
    CHECK(k::active_backend() == k::Backend::Avx2);
  } else {
    CHECK_THROWS_AS(k::set_backend(k::Backend::Avx2), DomainError);
  }
}

TEST_CASE("scalar jacobi_series agrees with jacobi_eval") {
  const JacobiRecurrence rec(0.5, 0.5, 40);
  const auto coeffs = uniform(41, -1, 1, 3);
  const auto t = uniform(37, -1, 1, 4);
  std::vector<double> out(t.size());
  k::scalar::jacobi_series(rec, coeffs, t, out);
  for (std::size_t i = 0; i < t.size(); ++i) {
    double direct = 0.0;
    for (int n = 0; n <= 40; ++n) direct += coeffs[n] * jacobi_eval({n, 0.5, 0.5}, t[i]);
    CHECK(out[i] == doctest::Approx(direct).epsilon(1e-11).scale(max_abs(coeffs)));
  }
}

TEST_CASE("jacobi_series edge cases") {
  const JacobiRecurrence rec(0.0, 0.0, 4);
  const std::vector<double> t{-1.0, 0.0, 1.0};
  std::vector<double> out(3, -7.0);
  k::jacobi_series(rec, std::vector<double>{}, t, out);
  for (double v : out) CHECK(v == 0.0);
  k::jacobi_series(rec, std::vector<double>{2.5}, t, out);
  for (double v : out) CHECK(v == 2.5);
  CHECK_THROWS_AS(k::jacobi_series(rec, std::vector<double>(6, 1.0), t, out), DomainError);
  std::vector<double> short_out(2);
  CHECK_THROWS_AS(k::jacobi_series(rec, std::vector<double>{1.0}, t, short_out), DomainError);
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!k::backend_available(k::Backend::Avx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  // Odd sizes exercise the vector tails.
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
    struct Case {
      double alpha, beta;
      int degree;
    };
    for (const auto& [alpha, beta, degree] :
         std::vector<Case>{{0.0, 0.0, 0}, {0.5, 0.5, 7}, {1.0, 1.0, 64}, {-0.5, 0.25, 300}, {3.5, 3.5, 1024}}) {
      const JacobiRecurrence rec(alpha, beta, std::max(degree, 1));
      const auto coeffs = uniform(degree + 1, -1, 1, 11);
      auto t = uniform(n, -1, 1, 12);
      t[0] = 1.0;
      if (n > 1) t[n - 1] = -1.0;
      std::vector<double> a(n), b(n);
      k::jacobi_series(k::Backend::Scalar, rec, coeffs, t, a);
      k::jacobi_series(k::Backend::Avx2, rec, coeffs, t, b);
      const double scale = std::max(max_abs(a), 1.0);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-12 * scale);
    }
    for (std::size_t dim : {3u, 4u, 5u}) {
      const auto x = uniform(dim, -1, 1, 21);
      const auto coords = uniform(dim * (n + 3), -1, 1, 22);
      std::vector<double> a(n), b(n);
      k::dot_points(k::Backend::Scalar, x, coords, n + 3, a);
      k::dot_points(k::Backend::Avx2, x, coords, n + 3, b);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-15 * dim);
    }
    const auto w = uniform(n, 0, 1, 31);
    const auto f = uniform(n, -1e3, 1e3, 32);
    const double sa = k::weighted_sum(k::Backend::Scalar, w, f);
    const double sb = k::weighted_sum(k::Backend::Avx2, w, f);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::fabs(w[i] * f[i]);
    CHECK(std::fabs(sa - sb) <= 1e-15 * abs_sum + 1e-300);
  }
}

TEST_CASE("dot_points layout") {
  // Two points (1,2,3) and (4,5,6) stored with stride 3.
  const std::vector<double> coords{1, 4, 0, 2, 5, 0, 3, 6, 0};
  const std::vector<double> x{1, 0, -1};
  std::vector<double> out(2);
  k::dot_points(x, coords, 3, out);
  CHECK(out[0] == -2.0);
  CHECK(out[1] == -2.0);
}

TEST_CASE("weighted_sum is compensated") {
  std::vector<double> w(10001, 1.0), f(10001, 1e-16);
  f[0] = 1.0;
  const double s = k::weighted_sum(w, f);
  CHECK(s == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
  CHECK(k::scalar::weighted_sum(w, f) == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
  CHECK(k::weighted_sum(std::vector<double>{}, std::vector<double>{}) == 0.0);
  CHECK_THROWS_AS(k::weighted_sum(std::vector<double>(3), std::vector<double>(2)), DomainError);
}
