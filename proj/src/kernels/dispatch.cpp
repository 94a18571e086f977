#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "revholder/errors.hpp"
#include "revholder/kernels.hpp"

namespace revholder::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(REVHOLDER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("REVHOLDER_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0)
    return Backend::Scalar;
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void check_series_args(const JacobiRecurrence& rec, std::span<const double> coeffs,
                       std::span<const double> t, std::span<double> out) {
  if (coeffs.size() > static_cast<std::size_t>(rec.max_degree()) + 1)
    throw DomainError("jacobi_series: recurrence table shorter than coefficient list");
  if (out.size() < t.size()) throw DomainError("jacobi_series: output span too short");
}

}  // namespace

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  return backend == Backend::Scalar || (backend == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend))
    throw DomainError(std::string("kernels: backend not available: ") + to_string(backend));
  current().store(backend, std::memory_order_relaxed);
}

void jacobi_series(Backend backend, const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out) {
  check_series_args(rec, coeffs, t, out);
#if defined(REVHOLDER_HAVE_AVX2)
  if (backend == Backend::Avx2) return avx2::jacobi_series(rec, coeffs, t, out);
#endif
  (void)backend;
  scalar::jacobi_series(rec, coeffs, t, out);
}

void dot_points(Backend backend, std::span<const double> x, std::span<const double> coords,
                std::size_t stride, std::span<double> out) {
  if (out.size() > stride || coords.size() < x.size() * stride)
    throw DomainError("dot_points: coordinate block too small");
#if defined(REVHOLDER_HAVE_AVX2)
  if (backend == Backend::Avx2) return avx2::dot_points(x, coords, stride, out);
#endif
  (void)backend;
  scalar::dot_points(x, coords, stride, out);
}

double weighted_sum(Backend backend, std::span<const double> w, std::span<const double> f) {
  if (w.size() != f.size()) throw DomainError("weighted_sum: length mismatch");
#if defined(REVHOLDER_HAVE_AVX2)
  if (backend == Backend::Avx2) return avx2::weighted_sum(w, f);
#endif
  (void)backend;
  return scalar::weighted_sum(w, f);
}

void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out) {
  jacobi_series(active_backend(), rec, coeffs, t, out);
}

void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out) {
  dot_points(active_backend(), x, coords, stride, out);
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  return weighted_sum(active_backend(), w, f);
}

}  // namespace revholder::kernels
