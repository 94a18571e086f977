#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2+FMA variant selected at runtime.
// The two are required to agree to a few ulps of the result scale; see
// tests/test_kernels.cpp.
//
// The active backend defaults to the best one the CPU supports. Setting the
// environment variable REVHOLDER_SIMD=scalar before the first call, or calling
// set_backend(), forces the reference path.

#include <cstddef>
#include <span>

#include "revholder/special_fn.hpp"

namespace revholder::kernels {

enum class Backend { Scalar, Avx2 };

const char* to_string(Backend backend);
bool backend_available(Backend backend);
Backend active_backend();
// Throws DomainError if the backend is not available on this CPU.
void set_backend(Backend backend);

// out[i] = sum_{k < coeffs.size()} coeffs[k] * P_k^{(alpha,beta)}(t[i]).
// Requires coeffs.size() <= rec.max_degree() + 1 and |t[i]| <= 1.
void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out);

// out[i] = sum_k x[k] * coords[k * stride + i] for i < out.size().
// `coords` is structure-of-arrays: coordinate k of point i at k*stride + i.
void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out);

// Compensated sum_i w[i] * f[i].
double weighted_sum(std::span<const double> w, std::span<const double> f);

// Explicit-backend entry points, used by the equivalence tests and benchmarks.
void jacobi_series(Backend backend, const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out);
void dot_points(Backend backend, std::span<const double> x, std::span<const double> coords,
                std::size_t stride, std::span<double> out);
double weighted_sum(Backend backend, std::span<const double> w, std::span<const double> f);

namespace scalar {
void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out);
void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> f);
}  // namespace scalar

#if defined(REVHOLDER_HAVE_AVX2)
namespace avx2 {
void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out);
void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> f);
}  // namespace avx2
#endif

}  // namespace revholder::kernels
