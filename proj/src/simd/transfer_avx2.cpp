#include <immintrin.h>

#include <algorithm>
#include <cstddef>

#include "comiclab/simd/transfer.hpp"
#include "pair_sweep.hpp"

namespace comiclab::simd::avx2 {
namespace {

// exp(-q) for q >= 0. Range reduction y = k ln2 + r with |r| <= ln2/2 and a
// degree-13 Taylor polynomial (truncation below 5e-18 relative). Arguments
// past the normal range flush to zero instead of producing subnormals.
inline __m256d exp_neg_pd(__m256d q) {
  const __m256d y = _mm256_sub_pd(_mm256_setzero_pd(), q);
  const __m256d underflow = _mm256_cmp_pd(y, _mm256_set1_pd(-708.39), _CMP_LT_OQ);
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(6.93147180369123816490e-01), y);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(1.90821492927058770002e-10), r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k from the biased exponent k + 1023, extracted through the 2^52 trick.
  const __m256d biased = _mm256_add_pd(_mm256_add_pd(k, _mm256_set1_pd(1023.0)), _mm256_set1_pd(4503599627370496.0));
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

struct Avx2 {
  using reg = __m256d;
  static constexpr std::size_t width = 4;
  static reg zero() { return _mm256_setzero_pd(); }
  static reg set1(double v) { return _mm256_set1_pd(v); }
  static reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, reg v) { _mm256_storeu_pd(p, v); }
  static reg add(reg a, reg b) { return _mm256_add_pd(a, b); }
  static reg sub(reg a, reg b) { return _mm256_sub_pd(a, b); }
  static reg mul(reg a, reg b) { return _mm256_mul_pd(a, b); }
  static reg div(reg a, reg b) { return _mm256_div_pd(a, b); }
  static reg exp_neg(reg q) { return exp_neg_pd(q); }
  static double hsum(reg v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  }
};

}  // namespace

void row_sums(const GaussianPairs& pairs, std::span<double> out) {
  detail::dispatch_sweep<Avx2, false>(pairs, nullptr, out.data());
}

void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta) {
  detail::dispatch_sweep<Avx2, true>(pairs, masses.data(), delta.data());
}

void exp_neg(std::span<const double> q, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= q.size(); i += 4) _mm256_storeu_pd(out.data() + i, exp_neg_pd(_mm256_loadu_pd(q.data() + i)));
  if (i < q.size()) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    std::copy(q.begin() + static_cast<std::ptrdiff_t>(i), q.end(), buf);
    _mm256_store_pd(buf, exp_neg_pd(_mm256_load_pd(buf)));
    std::copy(buf, buf + (q.size() - i), out.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

}  // namespace comiclab::simd::avx2
