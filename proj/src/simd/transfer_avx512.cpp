#include <immintrin.h>

#include <cstddef>

#include "comiclab/simd/transfer.hpp"
#include "pair_sweep.hpp"

namespace comiclab::simd::avx512 {
namespace {

// Same reduction and polynomial as the AVX2 kernel; 2^k is applied with
// scalef, and results below the normal range are zeroed by mask.
inline __m512d exp_neg_pd(__m512d q) {
  const __m512d y = _mm512_sub_pd(_mm512_setzero_pd(), q);
  const __mmask8 keep = _mm512_cmp_pd_mask(y, _mm512_set1_pd(-708.39), _CMP_GE_OQ);
  const __m512d k = _mm512_roundscale_pd(_mm512_mul_pd(y, _mm512_set1_pd(1.4426950408889634)),
                                         _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m512d r = _mm512_fnmadd_pd(k, _mm512_set1_pd(6.93147180369123816490e-01), y);
  r = _mm512_fnmadd_pd(k, _mm512_set1_pd(1.90821492927058770002e-10), r);

  __m512d p = _mm512_set1_pd(1.0 / 6227020800.0);
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 479001600.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 39916800.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 3628800.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 362880.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 40320.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 5040.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 720.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 120.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 24.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0 / 6.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(0.5));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0));
  return _mm512_maskz_scalef_pd(keep, p, k);
}

struct Avx512 {
  using reg = __m512d;
  static constexpr std::size_t width = 8;
  static reg zero() { return _mm512_setzero_pd(); }
  static reg set1(double v) { return _mm512_set1_pd(v); }
  static reg load(const double* p) { return _mm512_loadu_pd(p); }
  static void store(double* p, reg v) { _mm512_storeu_pd(p, v); }
  static reg add(reg a, reg b) { return _mm512_add_pd(a, b); }
  static reg sub(reg a, reg b) { return _mm512_sub_pd(a, b); }
  static reg mul(reg a, reg b) { return _mm512_mul_pd(a, b); }
  static reg div(reg a, reg b) { return _mm512_div_pd(a, b); }
  static reg exp_neg(reg q) { return exp_neg_pd(q); }
  static double hsum(reg v) { return _mm512_reduce_add_pd(v); }
};

}  // namespace

void row_sums(const GaussianPairs& pairs, std::span<double> out) {
  detail::dispatch_sweep<Avx512, false>(pairs, nullptr, out.data());
}

void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta) {
  detail::dispatch_sweep<Avx512, true>(pairs, masses.data(), delta.data());
}

void exp_neg(std::span<const double> q, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 8 <= q.size(); i += 8) _mm512_storeu_pd(out.data() + i, exp_neg_pd(_mm512_loadu_pd(q.data() + i)));
  if (i < q.size()) {
    const auto mask = static_cast<__mmask8>((1u << (q.size() - i)) - 1u);
    const __m512d v = _mm512_maskz_loadu_pd(mask, q.data() + i);
    _mm512_mask_storeu_pd(out.data() + i, mask, exp_neg_pd(v));
  }
}

}  // namespace comiclab::simd::avx512
