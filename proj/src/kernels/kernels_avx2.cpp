// Compiled with -mavx2 -mfma. Only called after a runtime CPU check.

#include <immintrin.h>

#include <array>
#include <cmath>

#include "revholder/kernels.hpp"

namespace revholder::kernels::avx2 {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

}  // namespace

void jacobi_series(const JacobiRecurrence& rec, std::span<const double> coeffs,
                   std::span<const double> t, std::span<double> out) {
  const std::size_t terms = coeffs.size();
  const std::size_t n = t.size();
  const double c0 = terms > 0 ? coeffs[0] : 0.0;
  const double* a = rec.a.data();
  const double* b = rec.b.data();
  const double* c = rec.c.data();
  const double* w = coeffs.data();

  std::size_t i = 0;
  // Two independent 4-lane chains per iteration hide the FMA latency of the
  // serial recurrence.
  for (; i + 8 <= n; i += 8) {
    __m256d x0 = _mm256_loadu_pd(t.data() + i);
    __m256d x1 = _mm256_loadu_pd(t.data() + i + 4);
    __m256d prev0 = _mm256_setzero_pd(), prev1 = _mm256_setzero_pd();
    __m256d cur0 = _mm256_set1_pd(1.0), cur1 = _mm256_set1_pd(1.0);
    __m256d acc0 = _mm256_set1_pd(c0), acc1 = _mm256_set1_pd(c0);
    for (std::size_t k = 0; k + 1 < terms; ++k) {
      const __m256d ak = _mm256_set1_pd(a[k]);
      const __m256d bk = _mm256_set1_pd(b[k]);
      const __m256d ck = _mm256_set1_pd(c[k]);
      const __m256d wk = _mm256_set1_pd(w[k + 1]);
      __m256d next0 = _mm256_fmsub_pd(_mm256_fmadd_pd(ak, x0, bk), cur0, _mm256_mul_pd(ck, prev0));
      __m256d next1 = _mm256_fmsub_pd(_mm256_fmadd_pd(ak, x1, bk), cur1, _mm256_mul_pd(ck, prev1));
      prev0 = cur0;
      prev1 = cur1;
      cur0 = next0;
      cur1 = next1;
      acc0 = _mm256_fmadd_pd(wk, cur0, acc0);
      acc1 = _mm256_fmadd_pd(wk, cur1, acc1);
    }
    _mm256_storeu_pd(out.data() + i, acc0);
    _mm256_storeu_pd(out.data() + i + 4, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d x0 = _mm256_loadu_pd(t.data() + i);
    __m256d prev0 = _mm256_setzero_pd();
    __m256d cur0 = _mm256_set1_pd(1.0);
    __m256d acc0 = _mm256_set1_pd(c0);
    for (std::size_t k = 0; k + 1 < terms; ++k) {
      __m256d next0 = _mm256_fmsub_pd(
          _mm256_fmadd_pd(_mm256_set1_pd(a[k]), x0, _mm256_set1_pd(b[k])), cur0,
          _mm256_mul_pd(_mm256_set1_pd(c[k]), prev0));
      prev0 = cur0;
      cur0 = next0;
      acc0 = _mm256_fmadd_pd(_mm256_set1_pd(w[k + 1]), cur0, acc0);
    }
    _mm256_storeu_pd(out.data() + i, acc0);
  }
  if (i < n) scalar::jacobi_series(rec, coeffs, t.subspan(i), out.subspan(i));
}

void dot_points(std::span<const double> x, std::span<const double> coords, std::size_t stride,
                std::span<double> out) {
  const std::size_t count = out.size();
  const std::size_t dim = x.size();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(x[k]), _mm256_loadu_pd(coords.data() + k * stride + i), acc);
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += x[k] * coords[k * stride + i];
    out[i] = acc;
  }
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  const std::size_t n = w.size();
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(f.data() + i));
    const __m256d s = _mm256_add_pd(sum, term);
    const __m256d big_sum = _mm256_cmp_pd(abs_pd(sum), abs_pd(term), _CMP_GE_OQ);
    const __m256d c_sum = _mm256_add_pd(_mm256_sub_pd(sum, s), term);
    const __m256d c_term = _mm256_add_pd(_mm256_sub_pd(term, s), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(c_term, c_sum, big_sum));
    sum = s;
  }
  alignas(32) std::array<double, 4> lanes{};
  alignas(32) std::array<double, 4> lane_comp{};
  _mm256_store_pd(lanes.data(), sum);
  _mm256_store_pd(lane_comp.data(), comp);

  // Fold lanes and the tail in a fixed order.
  double total = 0.0;
  double total_comp = lane_comp[0] + lane_comp[1] + lane_comp[2] + lane_comp[3];
  auto add = [&](double term) {
    const double s = total + term;
    if (std::fabs(total) >= std::fabs(term))
      total_comp += (total - s) + term;
    else
      total_comp += (term - s) + total;
    total = s;
  };
  for (double v : lanes) add(v);
  for (; i < n; ++i) add(w[i] * f[i]);
  return total + total_comp;
}

}  // namespace revholder::kernels::avx2
