#include "comiclab/mtpt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "comiclab/seeds.hpp"

namespace comiclab {

namespace {

double base_amplitude(double diffusion, double dt) { return 1.0 / std::sqrt(4.0 * std::numbers::pi * diffusion * dt); }

}  // namespace

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::density: return "density";
    case Normalization::local_density: return "voronoi";
    case Normalization::kernel_density: return "kernel";
  }
  return "density";
}

Normalization normalization_from_string(std::string_view s) {
  if (s == "density") return Normalization::density;
  if (s == "voronoi") return Normalization::local_density;
  if (s == "kernel") return Normalization::kernel_density;
  throw std::invalid_argument("unknown kernel normalization '" + std::string(s) + "'");
}

Normalization default_normalization(Spacing placement) {
  return placement == Spacing::uniform ? Normalization::density : Normalization::kernel_density;
}

double TransferKernel::weight(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const double d = lattice > 0.0 ? static_cast<double>(j > i ? j - i : i - j) * lattice : positions[j] - positions[i];
  const auto p = pairs();
  if ((sorted || lattice > 0.0) && (d * d) * p.inv_four_d_dt > simd::kCutoffArgument) return 0.0;
  double w = p.amplitude * std::exp(-(d * d) * p.inv_four_d_dt);
  if (!local_density.empty()) w /= 0.5 * (local_density[i] + local_density[j]);
  return w;
}

std::vector<double> TransferKernel::dense() const {
  const std::size_t n = size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = weight(i, j);
  return w;
}

simd::GaussianPairs TransferKernel::pairs() const {
  simd::GaussianPairs p;
  p.positions = positions;
  p.density = local_density;
  p.inv_four_d_dt = 1.0 / (4.0 * diffusion * dt);
  p.amplitude = scale * base_amplitude(diffusion, dt);
  if (normalization == Normalization::density) p.amplitude /= density;
  p.sorted = sorted;
  p.lattice = lattice;
  return p;
}

TransferKernel build_transfer_weights(std::span<const double> positions, double diffusion, double dt,
                                      const KernelNormalization& normalization, simd::Backend backend) {
  if (!(dt > 0.0)) throw std::invalid_argument("transfer time step must be positive");
  if (!(diffusion > 0.0)) throw std::invalid_argument("transfer requires a positive diffusion coefficient");
  for (double x : positions)
    if (!std::isfinite(x)) throw std::invalid_argument("particle positions must be finite");

  TransferKernel k;
  k.positions.assign(positions.begin(), positions.end());
  k.diffusion = diffusion;
  k.dt = dt;
  k.normalization = normalization.mode;
  k.sorted = std::is_sorted(k.positions.begin(), k.positions.end());
  if (k.sorted) k.lattice = simd::detect_lattice(k.positions);
  if (normalization.mode == Normalization::density) {
    if (!(normalization.density > 0.0)) throw std::invalid_argument("particle density must be positive");
    k.density = normalization.density;
  } else if (normalization.mode == Normalization::local_density) {
    if (normalization.volumes.size() != positions.size())
      throw std::invalid_argument("one local volume per particle is required");
    k.local_density.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (!(normalization.volumes[i] > 0.0)) throw std::invalid_argument("local volumes must be positive");
      k.local_density[i] = 1.0 / normalization.volumes[i];
    }
  } else {
    // Kernel density estimate at each particle: the raw kernel row sum plus
    // the particle's own contribution K(0).
    k.normalization = Normalization::density;
    k.density = 1.0;
    std::vector<double> raw(k.size(), 0.0);
    simd::row_sums(k.pairs(), raw, backend);
    const double self = base_amplitude(diffusion, dt);
    k.local_density.resize(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) k.local_density[i] = raw[i] + self;
    k.normalization = Normalization::kernel_density;
  }

  k.row_sums.assign(k.size(), 0.0);
  simd::row_sums(k.pairs(), k.row_sums, backend);
  const double max_row = k.row_sums.empty() ? 0.0 : *std::max_element(k.row_sums.begin(), k.row_sums.end());
  if (max_row > 1.0) {
    k.scale = 1.0 / max_row;
    k.clamped = true;
    for (auto& r : k.row_sums) r *= k.scale;
  }
  return k;
}

std::vector<double> mtpt_step(std::span<const double> masses, const TransferKernel& kernel, simd::Backend backend) {
  if (masses.size() != kernel.size()) throw std::invalid_argument("mass vector does not match the kernel size");
  std::vector<double> delta(masses.size());
  simd::transfer(kernel.pairs(), masses, delta, backend);
  std::vector<double> out(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) out[i] = masses[i] + delta[i];
  return out;
}

ParticleEnsemble init_ensemble(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release) {
  if (n < 2) throw std::invalid_argument("mass transfer requires at least two particles");
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("domain requires lo < hi");
  if (!domain.contains(release)) throw std::invalid_argument("release point lies outside the domain");

  ParticleEnsemble ens;
  if (placement.mode == Spacing::uniform) {
    ens.positions = linspace(domain.lo, domain.hi, n);
  } else {
    std::mt19937_64 rng(derive_seed(placement.seed, Stream::placement, 0));
    std::uniform_real_distribution<double> unif(domain.lo, domain.hi);
    ens.positions.resize(n);
    for (auto& x : ens.positions) x = unif(rng);
    std::sort(ens.positions.begin(), ens.positions.end());
  }
  ens.masses.assign(n, 0.0);
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(ens.positions[i] - release) < std::abs(ens.positions[nearest] - release)) nearest = i;
  ens.masses[nearest] = 1.0;
  return ens;
}

std::vector<double> local_volumes(std::span<const double> x, const Domain& domain) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (!std::is_sorted(x.begin(), x.end())) throw std::invalid_argument("local_volumes requires sorted positions");
  if (x.front() < domain.lo || x.back() > domain.hi)
    throw std::invalid_argument("local_volumes requires positions inside the domain");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = domain.length();
    return v;
  }
  v[0] = (x[0] - domain.lo) + 0.5 * (x[1] - x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = 0.5 * (x[i + 1] - x[i - 1]);
  v[n - 1] = (domain.hi - x[n - 1]) + 0.5 * (x[n - 1] - x[n - 2]);
  return v;
}

std::vector<double> sample_profile(std::span<const double> x, std::span<const double> values,
                                   std::span<const double> queries) {
  if (x.size() != values.size()) throw std::invalid_argument("profile positions and values differ in length");
  std::vector<double> out(queries.size(), 0.0);
  if (x.empty()) return out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double xq = queries[q];
    if (xq < x.front() || xq > x.back()) continue;
    auto it = std::lower_bound(x.begin(), x.end(), xq);
    const auto hi = static_cast<std::size_t>(it - x.begin());
    if (x[hi] == xq || hi == 0) {
      out[q] = values[hi];
      continue;
    }
    const std::size_t lo = hi - 1;
    const double t = (xq - x[lo]) / (x[hi] - x[lo]);
    out[q] = values[lo] + t * (values[hi] - values[lo]);
  }
  return out;
}

MtptSetup prepare_mtpt(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release) {
  return prepare_mtpt(domain, n, placement, release, default_normalization(placement.mode));
}

MtptSetup prepare_mtpt(const Domain& domain, std::size_t n, const PlacementSpec& placement, double release,
                       Normalization normalization) {
  MtptSetup s;
  s.domain = domain;
  s.placement = placement;
  s.normalization = normalization;
  s.initial = init_ensemble(domain, n, placement, release);
  s.volumes = local_volumes(s.initial.positions, domain);
  return s;
}

MtptSimulation run_mtpt(const AdeParams& params, const MtptSetup& setup, double dt, simd::Backend backend) {
  const auto plan = plan_steps(params.final_time, dt);
  const std::size_t n = setup.initial.size();
  KernelNormalization normalization;
  switch (setup.normalization) {
    case Normalization::density:
      normalization = KernelNormalization::constant(static_cast<double>(n) / setup.domain.length());
      break;
    case Normalization::local_density: normalization = KernelNormalization::local(setup.volumes); break;
    case Normalization::kernel_density: normalization = KernelNormalization::kernel(); break;
  }

  // Pairwise distances are invariant under the common advective shift, so
  // the kernel is built once in the co-moving frame.
  const auto kernel = build_transfer_weights(setup.initial.positions, params.diffusion, plan.dt, normalization, backend);
  TransferKernel last_kernel;
  if (plan.last_dt != plan.dt)
    last_kernel = build_transfer_weights(setup.initial.positions, params.diffusion, plan.last_dt, normalization, backend);

  MtptSimulation sim;
  sim.steps = plan.steps;
  sim.kernel_scale = kernel.scale;
  sim.clamped = kernel.clamped || last_kernel.clamped;
  std::vector<double> m = setup.initial.masses;
  std::vector<double> delta(n);
  double min_mass = 0.0;
  for (std::size_t s = 0; s < plan.steps; ++s) {
    const bool last = s + 1 == plan.steps && plan.last_dt != plan.dt;
    simd::transfer((last ? last_kernel : kernel).pairs(), m, delta, backend);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] += delta[i];
      min_mass = std::min(min_mass, m[i]);
    }
  }
  sim.min_mass = min_mass;
  sim.negative_mass = min_mass < 0.0;

  const double shift = params.velocity * params.final_time;
  sim.ensemble.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) sim.ensemble.positions[i] = setup.initial.positions[i] + shift;
  sim.ensemble.masses = std::move(m);
  sim.volumes = setup.volumes;
  sim.concentrations.resize(n);
  for (std::size_t i = 0; i < n; ++i) sim.concentrations[i] = sim.ensemble.masses[i] / sim.volumes[i];
  return sim;
}

MtptSimulation simulate_mtpt(const AdeParams& params, const Domain& domain, std::size_t n, double dt,
                             const PlacementSpec& placement, simd::Backend backend) {
  validate(params, domain);
  return run_mtpt(params, prepare_mtpt(domain, n, placement, params.release), dt, backend);
}

}  // namespace comiclab
