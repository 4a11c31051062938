#pragma once

// Vector pair sweeps shared by the SIMD backends. `V` supplies the lane
// count, the register type and a handful of operations; each backend
// instantiates this header in a translation unit built for its ISA.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "comiclab/simd/transfer.hpp"
#include "row_extent.hpp"

namespace comiclab::simd::detail {

template <class V, bool Local, bool Lattice, bool Transfer>
void pair_sweep(const GaussianPairs& pairs, const double* m, double* out) {
  using R = typename V::reg;
  constexpr std::size_t W = V::width;
  const double* x = pairs.positions.data();
  const double* u = pairs.density.data();
  const std::size_t n = pairs.positions.size();
  const auto table = Lattice ? lattice_table(pairs) : std::vector<double>{};
  const R c = V::set1(pairs.inv_four_d_dt);
  const R amp = V::set1(pairs.amplitude);
  const R half = V::set1(0.5);
  std::fill(out, out + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t end = row_end(pairs, i);
    const R xi = V::set1(x[i]);
    const R mi = V::set1(Transfer ? m[i] : 0.0);
    const R ui = V::set1(Local ? u[i] : 0.0);
    R acc = V::zero();
    std::size_t j = i + 1;
    for (; j + W <= end; j += W) {
      R w;
      if constexpr (Lattice) {
        w = V::load(table.data() + (j - i));
      } else {
        const R d = V::sub(V::load(x + j), xi);
        w = V::mul(amp, V::exp_neg(V::mul(V::mul(d, d), c)));
      }
      if constexpr (Local) w = V::div(w, V::mul(half, V::add(ui, V::load(u + j))));
      R f = w;
      if constexpr (Transfer) f = V::mul(w, V::sub(V::load(m + j), mi));
      acc = V::add(acc, f);
      const R oj = V::load(out + j);
      V::store(out + j, Transfer ? V::sub(oj, f) : V::add(oj, f));
    }
    double tail = 0.0;
    for (; j < end; ++j) {
      double w = Lattice ? table[j - i] : pair_weight(pairs, i, j);
      if (Lattice && Local) w /= 0.5 * (u[i] + u[j]);
      const double f = Transfer ? w * (m[j] - m[i]) : w;
      tail += f;
      out[j] += Transfer ? -f : f;
    }
    out[i] += V::hsum(acc) + tail;
  }
}

template <class V, bool Transfer>
void dispatch_sweep(const GaussianPairs& pairs, const double* m, double* out) {
  const bool local = !pairs.density.empty();
  if (pairs.lattice > 0.0) {
    if (local)
      pair_sweep<V, true, true, Transfer>(pairs, m, out);
    else
      pair_sweep<V, false, true, Transfer>(pairs, m, out);
  } else {
    if (local)
      pair_sweep<V, true, false, Transfer>(pairs, m, out);
    else
      pair_sweep<V, false, false, Transfer>(pairs, m, out);
  }
}

}  // namespace comiclab::simd::detail
