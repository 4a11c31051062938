#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "comiclab/model.hpp"
#include "comiclab/rwpt.hpp"
#include "comiclab/simd/transfer.hpp"

namespace comiclab {

struct PlacementSpec {
  Spacing mode = Spacing::uniform;
  std::uint64_t seed = 0;
};

/// The normalizing density rho_ij in W_ij = K_ij / rho_ij.
enum class Normalization {
  density,         // rho = particle density n / |domain|
  local_density,   // rho_ij = (u_i + u_j) / 2 with u_i = 1 / dV_i (Voronoi)
  kernel_density,  // rho_ij = (u_i + u_j) / 2 with u_i = sum_k K_ik, self term included
};

std::string_view to_string(Normalization n);
Normalization normalization_from_string(std::string_view s);

struct KernelNormalization {
  Normalization mode = Normalization::density;
  double density = 1.0;
  std::vector<double> volumes;  // local_density only

  static KernelNormalization constant(double rho) { return {Normalization::density, rho, {}}; }
  static KernelNormalization local(std::vector<double> volumes) {
    return {Normalization::local_density, 0.0, std::move(volumes)};
  }
  static KernelNormalization kernel() { return {Normalization::kernel_density, 0.0, {}}; }
};

/// Symmetric transfer weights W_ij for one time step. Weights are evaluated
/// on demand; only O(n) state is kept.
struct TransferKernel {
  std::vector<double> positions;
  std::vector<double> local_density;  // u_i; empty for constant density
  double diffusion = 0.0;
  double dt = 0.0;
  Normalization normalization = Normalization::density;
  double density = 1.0;
  // Stability clamp: all weights are multiplied by `scale` (< 1 when the
  // largest row sum would otherwise exceed one).
  double scale = 1.0;
  bool clamped = false;
  std::vector<double> row_sums;
  bool sorted = false;
  double lattice = 0.0;  // spacing when positions form an evenly spaced lattice

  std::size_t size() const { return positions.size(); }
  double weight(std::size_t i, std::size_t j) const;
  /// Row-major n x n matrix with zero diagonal; intended for small n.
  std::vector<double> dense() const;
  simd::GaussianPairs pairs() const;
};

TransferKernel build_transfer_weights(std::span<const double> positions, double diffusion, double dt,
                                      const KernelNormalization& normalization,
                                      simd::Backend backend = simd::active_backend());

/// m_i <- m_i - sum_j (m_i - m_j) W_ij, applied simultaneously.
std::vector<double> mtpt_step(std::span<const double> masses, const TransferKernel& kernel,
                              simd::Backend backend = simd::active_backend());

/// Particles spread over the domain with zero mass except the one nearest the
/// release point (ties to the lower index), which carries unit mass.
ParticleEnsemble init_ensemble(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release);

/// 1-D Voronoi lengths clipped to the domain; they sum to |domain|.
std::vector<double> local_volumes(std::span<const double> positions, const Domain& domain);

/// Linear interpolation of a particle profile at the query points; zero
/// outside the span of the particles.
std::vector<double> sample_profile(std::span<const double> positions, std::span<const double> values,
                                   std::span<const double> queries);

/// Placement that stays fixed while transport parameters vary.
struct MtptSetup {
  Domain domain;
  PlacementSpec placement;
  Normalization normalization = Normalization::density;  // see default_normalization
  ParticleEnsemble initial;
  std::vector<double> volumes;
};

/// Constant density for uniform placement, kernel density otherwise.
Normalization default_normalization(Spacing placement);

MtptSetup prepare_mtpt(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release);
MtptSetup prepare_mtpt(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release,
                       Normalization normalization);

struct MtptSimulation {
  ParticleEnsemble ensemble;            // positions at T
  std::vector<double> volumes;          // co-moving Voronoi lengths
  std::vector<double> concentrations;   // m_i / dV_i
  std::size_t steps = 0;
  double kernel_scale = 1.0;
  bool clamped = false;
  bool negative_mass = false;
  double min_mass = 0.0;
};

MtptSimulation run_mtpt(const AdeParams& params, const MtptSetup& setup, double dt,
                        simd::Backend backend = simd::active_backend());

MtptSimulation simulate_mtpt(const AdeParams& params, const Domain& domain, std::size_t n, double dt,
                             const PlacementSpec& placement, simd::Backend backend = simd::active_backend());

}  // namespace comiclab
