#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "comiclab/simd/transfer.hpp"

namespace comiclab::simd::detail {

inline double reach(const GaussianPairs& pairs) { return std::sqrt(kCutoffArgument / pairs.inv_four_d_dt); }

// One past the last partner j > i inside the cutoff.
inline std::size_t row_end(const GaussianPairs& pairs, std::size_t i) {
  const auto x = pairs.positions;
  if (!(pairs.inv_four_d_dt > 0.0)) return x.size();
  if (pairs.lattice > 0.0) {
    const auto span = static_cast<std::size_t>(std::floor(reach(pairs) / pairs.lattice));
    return std::min(x.size(), i + 1 + span);
  }
  if (!pairs.sorted) return x.size();
  const auto it = std::upper_bound(x.begin() + static_cast<std::ptrdiff_t>(i) + 1, x.end(), x[i] + reach(pairs));
  return static_cast<std::size_t>(it - x.begin());
}

inline double pair_weight(const GaussianPairs& pairs, std::size_t i, std::size_t j) {
  const double d = pairs.lattice > 0.0 ? static_cast<double>(j > i ? j - i : i - j) * pairs.lattice
                                       : pairs.positions[j] - pairs.positions[i];
  double w = pairs.amplitude * std::exp(-(d * d) * pairs.inv_four_d_dt);
  if (!pairs.density.empty()) w /= 0.5 * (pairs.density[i] + pairs.density[j]);
  return w;
}

}  // namespace comiclab::simd::detail
