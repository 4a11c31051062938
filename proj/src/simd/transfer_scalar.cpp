#include <algorithm>
#include <cmath>
#include <cstddef>

#include "comiclab/simd/transfer.hpp"
#include "row_extent.hpp"

namespace comiclab::simd {

double detect_lattice(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double span = x[n - 1] - x[0];
  if (!(span > 0.0)) return 0.0;
  const double h = span / static_cast<double>(n - 1);
  const double tol = 1e-12 * span;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(x[i] - (x[0] + static_cast<double>(i) * h)) > tol) return 0.0;
  return h;
}

std::vector<double> lattice_table(const GaussianPairs& pairs) {
  const std::size_t span = pairs.positions.empty() ? 0 : detail::row_end(pairs, 0);
  std::vector<double> table(std::max<std::size_t>(span, 1), 0.0);
  for (std::size_t d = 1; d < span; ++d) {
    const double s = static_cast<double>(d) * pairs.lattice;
    table[d] = pairs.amplitude * std::exp(-(s * s) * pairs.inv_four_d_dt);
  }
  return table;
}

namespace scalar {
namespace {

// Transfer=false accumulates row sums, Transfer=true the mass exchange.
template <bool Transfer>
void sweep(const GaussianPairs& pairs, const double* m, double* out) {
  const std::size_t n = pairs.positions.size();
  const bool local = !pairs.density.empty();
  const bool lattice = pairs.lattice > 0.0;
  const auto table = lattice ? lattice_table(pairs) : std::vector<double>{};
  const double* x = pairs.positions.data();
  std::fill(out, out + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t end = detail::row_end(pairs, i);
    double acc = 0.0;
    for (std::size_t j = i + 1; j < end; ++j) {
      double w;
      if (lattice) {
        w = table[j - i];
      } else {
        const double d = x[j] - x[i];
        w = pairs.amplitude * std::exp(-(d * d) * pairs.inv_four_d_dt);
      }
      if (local) w /= 0.5 * (pairs.density[i] + pairs.density[j]);
      if constexpr (Transfer) {
        const double f = w * (m[j] - m[i]);
        acc += f;
        out[j] -= f;
      } else {
        acc += w;
        out[j] += w;
      }
    }
    out[i] += acc;
  }
}

}  // namespace

void row_sums(const GaussianPairs& pairs, std::span<double> out) { sweep<false>(pairs, nullptr, out.data()); }

void transfer(const GaussianPairs& pairs, std::span<const double> m, std::span<double> delta) {
  sweep<true>(pairs, m.data(), delta.data());
}

}  // namespace scalar
}  // namespace comiclab::simd
