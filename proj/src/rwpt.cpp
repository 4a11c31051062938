#include "comiclab/rwpt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace comiclab {

double ParticleEnsemble::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

std::vector<double> BinGrid::widths() const {
  std::vector<double> w(size());
  for (std::size_t i = 0; i < size(); ++i) w[i] = upper[i] - lower[i];
  return w;
}

BinGrid BinGrid::centered(std::span<const double> centers, std::span<const double> widths) {
  if (centers.size() != widths.size()) throw std::invalid_argument("bin centers and widths differ in length");
  BinGrid grid;
  grid.centers.assign(centers.begin(), centers.end());
  grid.lower.resize(centers.size());
  grid.upper.resize(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!(widths[i] > 0.0)) throw std::invalid_argument("bin widths must be positive");
    grid.lower[i] = centers[i] - 0.5 * widths[i];
    grid.upper[i] = centers[i] + 0.5 * widths[i];
  }
  return grid;
}

StepPlan plan_steps(double final_time, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (dt > final_time) throw std::invalid_argument("time step exceeds the final time");
  StepPlan plan;
  plan.dt = dt;
  // Ratios within 1e-9 of an integer count as exact (0.1 * 10 != 1 in binary).
  const double ratio = final_time / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * rounded) {
    plan.steps = static_cast<std::size_t>(rounded);
    plan.last_dt = dt;
  } else {
    plan.steps = static_cast<std::size_t>(std::ceil(ratio));
    plan.last_dt = final_time - dt * static_cast<double>(plan.steps - 1);
  }
  return plan;
}

WalkIncrements draw_walk_increments(std::size_t n, double final_time, double dt, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random walk requires at least one particle");
  WalkIncrements inc;
  inc.particles = n;
  inc.plan = plan_steps(final_time, dt);
  inc.horizon = final_time;
  inc.xi.resize(inc.plan.steps * n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : inc.xi) v = normal(rng);
  return inc;
}

ParticleEnsemble propagate_walk(const AdeParams& params, const WalkIncrements& increments) {
  if (!(params.diffusion >= 0.0)) throw std::invalid_argument("diffusion must be non-negative");
  const std::size_t n = increments.particles;
  // Drift is applied once for the whole horizon so D = 0 lands exactly on x0 + vT.
  std::vector<double> walk(n, 0.0);
  for (std::size_t s = 0; s < increments.plan.steps; ++s) {
    const double spread = std::sqrt(2.0 * params.diffusion * increments.plan.dt_of(s));
    const auto xi = increments.step(s);
    for (std::size_t p = 0; p < n; ++p) walk[p] += spread * xi[p];
  }
  ParticleEnsemble ens;
  ens.positions.resize(n);
  ens.masses.assign(n, 1.0 / static_cast<double>(n));
  const double centre = params.release + params.velocity * increments.horizon;
  for (std::size_t p = 0; p < n; ++p) ens.positions[p] = centre + walk[p];
  return ens;
}

ParticleEnsemble simulate_rwpt(const AdeParams& params, std::size_t n, double dt, std::uint64_t seed) {
  return propagate_walk(params, draw_walk_increments(n, params.final_time, dt, seed));
}

namespace {

void check_grid(const BinGrid& grid) {
  if (grid.lower.size() != grid.size() || grid.upper.size() != grid.size())
    throw std::invalid_argument("malformed bin grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid.upper[i] > grid.lower[i])) throw std::invalid_argument("bin widths must be positive");
    if (i > 0 && grid.lower[i] < grid.upper[i - 1])
      throw std::invalid_argument("bins must be sorted and non-overlapping");
  }
}

}  // namespace

std::vector<std::size_t> bin_counts(std::span<const double> positions, const BinGrid& grid) {
  check_grid(grid);
  std::vector<std::size_t> counts(grid.size(), 0);
  for (double x : positions) {
    auto it = std::upper_bound(grid.lower.begin(), grid.lower.end(), x);
    if (it == grid.lower.begin()) continue;
    const auto b = static_cast<std::size_t>(std::distance(grid.lower.begin(), it)) - 1;
    if (x < grid.upper[b]) ++counts[b];
  }
  return counts;
}

std::vector<double> bin_mass_density(const ParticleEnsemble& ensemble, const BinGrid& grid) {
  check_grid(grid);
  if (ensemble.masses.size() != ensemble.positions.size())
    throw std::invalid_argument("ensemble positions and masses differ in length");
  std::vector<double> c(grid.size(), 0.0);
  for (std::size_t p = 0; p < ensemble.size(); ++p) {
    const double x = ensemble.positions[p];
    auto it = std::upper_bound(grid.lower.begin(), grid.lower.end(), x);
    if (it == grid.lower.begin()) continue;
    const auto b = static_cast<std::size_t>(std::distance(grid.lower.begin(), it)) - 1;
    if (x < grid.upper[b]) c[b] += ensemble.masses[p];
  }
  for (std::size_t i = 0; i < grid.size(); ++i) c[i] /= grid.upper[i] - grid.lower[i];
  return c;
}

std::vector<double> bin_concentrations(const ParticleEnsemble& ensemble, const BinGrid& grid) {
  const auto counts = bin_counts(ensemble.positions, grid);
  const double n = static_cast<double>(ensemble.size());
  std::vector<double> c(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    c[i] = static_cast<double>(counts[i]) / (n * (grid.upper[i] - grid.lower[i]));
  return c;
}

BinGrid default_grid(std::span<const double> x) {
  const std::size_t k = x.size();
  if (k < 2) throw std::invalid_argument("default_grid requires at least two locations");
  for (std::size_t i = 1; i < k; ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("observation locations must be strictly increasing");
  BinGrid grid;
  grid.centers.assign(x.begin(), x.end());
  grid.lower.resize(k);
  grid.upper.resize(k);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    grid.upper[i] = mid;
    grid.lower[i + 1] = mid;
  }
  grid.lower[0] = x[0] - 0.5 * (x[1] - x[0]);
  grid.upper[k - 1] = x[k - 1] + 0.5 * (x[k - 1] - x[k - 2]);
  return grid;
}

BinGrid default_grid(const ObservationSet& observations) { return default_grid(observations.locations); }

}  // namespace comiclab
