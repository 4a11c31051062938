#pragma once

#include <span>
#include <string_view>
#include <vector>

// Pairwise Gaussian mass-transfer kernels. Every backend evaluates
//
//   w_ij = amplitude * exp(-(x_i - x_j)^2 * inv_four_d_dt) / rho_ij
//
// on the fly, where rho_ij = 1 when `density` is empty (the constant density
// is folded into `amplitude`) and rho_ij = (density_i + density_j) / 2
// otherwise. Nothing of size n^2 is ever stored.
//
// Pairs are visited once (j > i) and their contributions applied
// antisymmetrically, so the transfer conserves the sum exactly up to the final
// rounding of each accumulated entry.
//
// Pairs farther apart than sqrt(kCutoffArgument / inv_four_d_dt) are skipped
// when positions are sorted; their weight is below 5e-18 of the amplitude.
// When `lattice` > 0 the positions are x_0 + i * lattice and the weight of a
// pair depends only on |i - j|, so the Gaussian factors come from a table.

namespace comiclab::simd {

enum class Backend { scalar, avx2, avx512 };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view name);

struct GaussianPairs {
  std::span<const double> positions;
  std::span<const double> density;
  double inv_four_d_dt = 0.0;
  double amplitude = 0.0;
  // Sorted positions let each row stop at the cutoff distance.
  bool sorted = false;
  double lattice = 0.0;
};

/// Pairs with (x_i - x_j)^2 * inv_four_d_dt beyond this are treated as zero.
inline constexpr double kCutoffArgument = 40.0;

/// Spacing h if x_i = x_0 + i h for every i to within 1e-12 of the span, else 0.
double detect_lattice(std::span<const double> positions);

/// w(|i - j|) for a lattice: table[d] = amplitude * exp(-(d h)^2 * inv_four_d_dt),
/// d = 0 .. last partner inside the cutoff (table[0] is unused).
std::vector<double> lattice_table(const GaussianPairs& pairs);

/// out_i = sum_{j != i} w_ij
void row_sums(const GaussianPairs& pairs, std::span<double> out, Backend backend);

/// delta_i = sum_{j != i} w_ij (m_j - m_i); `delta` is overwritten.
void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta, Backend backend);

bool available(Backend backend);

/// Best available backend unless overridden by set_backend() or the
/// COMIC_LAB_SIMD environment variable ("scalar", "avx2" or "avx512").
Backend active_backend();
void set_backend(Backend backend);

namespace scalar {
void row_sums(const GaussianPairs& pairs, std::span<double> out);
void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta);
}  // namespace scalar

namespace avx2 {
void row_sums(const GaussianPairs& pairs, std::span<double> out);
void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta);
/// Vectorized exp(-q) for q >= 0, exposed for equivalence testing.
void exp_neg(std::span<const double> q, std::span<double> out);
}  // namespace avx2

namespace avx512 {
void row_sums(const GaussianPairs& pairs, std::span<double> out);
void transfer(const GaussianPairs& pairs, std::span<const double> masses, std::span<double> delta);
void exp_neg(std::span<const double> q, std::span<double> out);
}  // namespace avx512

}  // namespace comiclab::simd
