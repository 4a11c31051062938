#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "comiclab/model.hpp"

namespace comiclab {

struct ParticleEnsemble {
  std::vector<double> positions;
  std::vector<double> masses;

  std::size_t size() const { return positions.size(); }
  double total_mass() const;
};

/// Half-open bins [lower_i, upper_i), sorted ascending and non-overlapping.
/// `centers` are the points the binned concentration is attributed to; they
/// need not be the geometric midpoints of the bins.
struct BinGrid {
  std::vector<double> centers;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return centers.size(); }
  std::vector<double> widths() const;

  /// Bins [center - width/2, center + width/2). Throws on width <= 0.
  static BinGrid centered(std::span<const double> centers, std::span<const double> widths);
};

/// Number of steps covering (0, T]; the last step is shortened to land on T.
struct StepPlan {
  std::size_t steps = 0;
  double dt = 0.0;
  double last_dt = 0.0;

  double dt_of(std::size_t step) const { return step + 1 == steps ? last_dt : dt; }
};

StepPlan plan_steps(double final_time, double dt);

/// Standard-normal increments for every (step, particle), drawn step-major
/// from one seed. Reusing one draw across parameter values gives common
/// random numbers for estimation.
struct WalkIncrements {
  std::size_t particles = 0;
  StepPlan plan;
  std::vector<double> xi;
  double horizon = 0.0;  // final time T

  std::span<const double> step(std::size_t s) const { return {xi.data() + s * particles, particles}; }
};

WalkIncrements draw_walk_increments(std::size_t n, double final_time, double dt, std::uint64_t seed);

/// Moves every particle from the release point through the stored increments.
ParticleEnsemble propagate_walk(const AdeParams& params, const WalkIncrements& increments);

ParticleEnsemble simulate_rwpt(const AdeParams& params, std::size_t n, double dt, std::uint64_t seed);

std::vector<std::size_t> bin_counts(std::span<const double> positions, const BinGrid& grid);

/// c_i = n_i / (n * dx_i).
std::vector<double> bin_concentrations(const ParticleEnsemble& ensemble, const BinGrid& grid);

/// Carried mass per unit length in each bin: sum of m_p over the bin / dx_i.
std::vector<double> bin_mass_density(const ParticleEnsemble& ensemble, const BinGrid& grid);

/// Voronoi cells around the observation locations; end cells mirror the
/// half-gap to their single neighbour.
BinGrid default_grid(const ObservationSet& observations);
BinGrid default_grid(std::span<const double> locations);

}  // namespace comiclab
