#include <cmath>

#include "revholder/kernels.hpp"

namespace revholder::kernels::scalar {

void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out) {
  const std::size_t terms = coeffs.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t[i];
    double prev = 0.0;
    double cur = 1.0;
    double acc = terms > 0 ? coeffs[0] : 0.0;
    for (std::size_t k = 0; k + 1 < terms; ++k) {
      const double next = (rec.a[k] * x + rec.b[k]) * cur - rec.c[k] * prev;
      prev = cur;
      cur = next;
      acc += coeffs[k + 1] * cur;
    }
    out[i] = acc;
  }
}

void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out) {
  const std::size_t count = out.size();
  for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = x[k];
    const double* row = coords.data() + k * stride;
    for (std::size_t i = 0; i < count; ++i) out[i] += xk * row[i];
  }
}

// Neumaier's variant of Kahan summation over the products.
double weighted_sum(std::span<const double> w, std::span<const double> f) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double term = w[i] * f[i];
    const double s = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - s) + term;
    else
      comp += (term - s) + sum;
    sum = s;
  }
  return sum + comp;
}

}  // namespace revholder::kernels::scalar
