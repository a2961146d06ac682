#include <immintrin.h>

#include <cmath>
#include <limits>

#include "qmcwav/simd.hpp"

namespace qmcwav::simd {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

// Natural log for positive normal inputs: x = 2^e * m, m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh((m-1)/(m+1)) by an odd series in f^2 <= 0.0295. The
// result is hi + lo with hi = e ln 2 carried exactly, so a later product with
// a large exponent keeps relative accuracy.
inline void log_pd(__m256d x, __m256d& hi, __m256d& lo) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  // Biased exponent to double via the 2^52 magic.
  const __m256i ebits = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(ebits, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d f2 = _mm256_mul_pd(f, f);
  __m256d poly = _mm256_set1_pd(1.0 / 25.0);
  for (int k = 23; k >= 1; k -= 2) poly = _mm256_fmadd_pd(poly, f2, _mm256_set1_pd(1.0 / k));
  const __m256d series = _mm256_mul_pd(_mm256_add_pd(f, f), poly);
  // e * kLn2Hi is exact: kLn2Hi has 32 significant bits and |e| < 2^11.
  hi = _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi));
  lo = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), series);
}

// exp(y + dy) with k = round(y / ln 2), |r| <= ln2/2, Taylor to degree 13.
// Results below 2^-1022 flush to zero; above the double range they are +inf.
inline __m256d exp_pd(__m256d y, __m256d dy) {
  const __m256d lo_mask = _mm256_cmp_pd(y, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  const __m256d hi_mask = _mm256_cmp_pd(y, _mm256_set1_pd(709.782712893384), _CMP_GT_OQ);
  y = _mm256_min_pd(_mm256_max_pd(y, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.782712893384));
  const __m256d k =
      _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.4426950408889634)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), y);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);
  r = _mm256_add_pd(r, dy);
  double coef[14];
  coef[0] = 1.0;
  for (int n = 1; n < 14; ++n) coef[n] = coef[n - 1] / n;
  __m256d p = _mm256_set1_pd(coef[13]);
  for (int n = 12; n >= 0; --n) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(coef[n]));
  // 2^(k-1) through the exponent field, then doubled: k reaches 1024 near the top of the range.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)), _mm256_castpd_si256(magic));
  const __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1022)), 52);
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(pow2)), _mm256_set1_pd(2.0));
  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()), hi_mask);
  return _mm256_andnot_pd(lo_mask, res);
}

inline __m256d pow_pd(__m256d v, double a) {
  __m256d hi, lo;
  log_pd(v, hi, lo);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d y = _mm256_mul_pd(va, hi);
  const __m256d dy = _mm256_fmadd_pd(va, lo, _mm256_fmsub_pd(va, hi, y));
  return exp_pd(_mm256_add_pd(y, dy), _mm256_sub_pd(dy, _mm256_sub_pd(_mm256_add_pd(y, dy), y)));
}

double power_sum(const double* u, const double* w, int n, double lo, double h, double a, double shift, double c) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d vlo = _mm256_set1_pd(lo), vh = _mm256_set1_pd(h), vs = _mm256_set1_pd(shift);
  int r = 0;
  for (; r + 4 <= n; r += 4) {
    const __m256d v = _mm256_fmadd_pd(vh, _mm256_loadu_pd(u + r), vlo);
    __m256d term = _mm256_mul_pd(_mm256_loadu_pd(w + r), pow_pd(_mm256_add_pd(v, vs), c));
    if (a != 0.0) term = _mm256_mul_pd(term, pow_pd(v, a));
    acc = _mm256_add_pd(acc, term);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; r < n; ++r) {
    const double v = lo + h * u[r];
    double term = w[r] * std::pow(v + shift, c);
    if (a != 0.0) term *= std::pow(v, a);
    total += term;
  }
  return total;
}

void shifted_power(const double* x, std::size_t n, double t, double e, double* out) {
  const __m256d vt = _mm256_set1_pd(t), zero = _mm256_setzero_pd();
  const __m256d at_zero = _mm256_set1_pd(e < 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vt);
    const __m256d pos = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    const __m256d eq = _mm256_cmp_pd(d, zero, _CMP_EQ_OQ);
    __m256d val;
    if (e == 0.0) {
      val = _mm256_and_pd(pos, _mm256_set1_pd(1.0));
    } else {
      const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), d, pos);
      val = _mm256_and_pd(pos, pow_pd(safe, e));
      val = _mm256_blendv_pd(val, at_zero, eq);
    }
    _mm256_storeu_pd(out + i, val);
  }
  for (; i < n; ++i) {
    const double d = x[i] - t;
    if (d > 0.0)
      out[i] = e == 0.0 ? 1.0 : std::pow(d, e);
    else if (d == 0.0 && e < 0.0)
      out[i] = std::numeric_limits<double>::infinity();
    else
      out[i] = 0.0;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const Kernels& avx2_kernels_impl() {
  static const Kernels k{"avx2", power_sum, shifted_power, dot, mul};
  return k;
}

}  // namespace qmcwav::simd
