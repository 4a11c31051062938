#include "comiclab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "comiclab/seeds.hpp"

namespace comiclab {

std::vector<std::size_t> log_grid(double lo_exponent, double hi_exponent, std::size_t points) {
  if (points == 0) throw std::invalid_argument("log_grid requires at least one point");
  if (hi_exponent < lo_exponent) throw std::invalid_argument("log_grid requires lo <= hi");
  std::vector<std::size_t> grid;
  for (std::size_t i = 0; i < points; ++i) {
    const double e = points == 1 ? lo_exponent
                                 : lo_exponent + (hi_exponent - lo_exponent) * static_cast<double>(i) /
                                                     static_cast<double>(points - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

std::uint64_t realization_seed(std::uint64_t master, std::size_t realization) {
  return derive_seed(master, Stream::data, realization);
}

bool data_is_random(const SweepSpec& spec) { return spec.alpha > 0.0 || spec.spacing == Spacing::random; }

bool simulation_is_random(const SweepSpec& spec) {
  return spec.method == Method::rwpt || spec.placement == Spacing::random;
}

ObservationSet sweep_observations(const SweepSpec& spec, std::size_t realization) {
  const std::uint64_t seed = data_is_random(spec) ? realization_seed(spec.master_seed, realization) : spec.master_seed;
  return synthesize_observations(spec.truth, spec.domain, spec.k, spec.spacing, NoiseSpec{spec.alpha, seed});
}

bool shares_simulation(const SweepSpec& spec) {
  return !simulation_is_random(spec) && spec.spacing == Spacing::uniform && !spec.estimate_each_n;
}

namespace {

SolverSpec solver_for(const SweepSpec& spec, std::size_t n, std::uint64_t point_seed) {
  SolverSpec solver;
  solver.method = spec.method;
  solver.particles = n;
  solver.dt = spec.dt;
  solver.domain = spec.domain;
  solver.placement = spec.placement;
  solver.readout = spec.readout;
  solver.normalization = spec.normalization;
  solver.volumes = spec.volumes;
  solver.seed = derive_seed(point_seed, spec.method == Method::rwpt ? Stream::walk : Stream::placement, 0);
  return solver;
}

void fill_scores(SweepPoint& pt, const SweepSpec& spec, const ObservationSet& obs, const ModelOutput& out) {
  pt.report = score(obs, out, spec.criterion, spec.p, spec.entropy, spec.domain);
  pt.comic_uniform = pt.report.aic + std::log(static_cast<double>(pt.n));
  pt.negative_mass = out.negative_mass;
  pt.clamped = out.clamped;
  pt.ok = true;
}

SweepPoint blank_point(const SweepSpec& spec, std::size_t n, std::size_t realization) {
  SweepPoint pt;
  pt.n = n;
  pt.realization = realization;
  pt.seed = realization_seed(spec.master_seed, realization);
  return pt;
}

}  // namespace

SweepPoint evaluate_sweep_point(const SweepSpec& spec, std::size_t n, std::size_t realization) {
  SweepPoint pt = blank_point(spec, n, realization);
  try {
    const auto obs = sweep_observations(spec, realization);
    const ForwardModel model(solver_for(spec, n, pt.seed), obs, spec.truth);
    double v = spec.truth.velocity;
    double d = spec.truth.diffusion;
    if (spec.estimate_each_n) {
      pt.estimate = estimate_parameters(model, obs, spec.criterion, spec.estimation);
      v = pt.estimate->velocity;
      d = pt.estimate->diffusion;
    }
    fill_scores(pt, spec, obs, model.run(v, d));
  } catch (const std::exception& e) {
    pt.ok = false;
    pt.error = e.what();
  }
  return pt;
}

std::vector<SweepPoint> evaluate_sweep_column(const SweepSpec& spec, std::size_t n) {
  std::vector<SweepPoint> column;
  if (!shares_simulation(spec)) {
    for (std::size_t r = 0; r < spec.realizations; ++r) column.push_back(evaluate_sweep_point(spec, n, r));
    return column;
  }
  std::optional<ModelOutput> out;
  std::string failure;
  try {
    const auto obs = sweep_observations(spec, 0);
    const ForwardModel model(solver_for(spec, n, realization_seed(spec.master_seed, 0)), obs, spec.truth);
    out = model.run(spec.truth.velocity, spec.truth.diffusion);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  for (std::size_t r = 0; r < spec.realizations; ++r) {
    SweepPoint pt = blank_point(spec, n, r);
    if (!out) {
      pt.error = failure;
    } else {
      try {
        fill_scores(pt, spec, sweep_observations(spec, r), *out);
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    }
    column.push_back(std::move(pt));
  }
  return column;
}

void locate_argmin(SweepCurve& curve) {
  curve.found = false;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.mean.size(); ++i) {
    const auto& m = curve.mean[i];
    if (m.successes == 0 || !std::isfinite(m.comic)) continue;
    if (m.comic < best) {
      best = m.comic;
      curve.argmin_index = i;
      curve.found = true;
    }
  }
  if (!curve.found) return;
  const std::size_t i = curve.argmin_index;
  curve.argmin_n = curve.mean[i].n;
  curve.bracket_lo = curve.mean[i == 0 ? 0 : i - 1].n;
  curve.bracket_hi = curve.mean[std::min(i + 1, curve.mean.size() - 1)].n;
}

SweepCurve sweep_particle_numbers(const SweepSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i)
    if (spec.grid[i] <= spec.grid[i - 1]) throw std::invalid_argument("sweep grid must be strictly ascending");
  if (spec.realizations == 0) throw std::invalid_argument("at least one realization is required");

  const std::size_t R = spec.realizations;
  SweepCurve curve;
  curve.points.resize(spec.grid.size() * R);

  // Jobs are single points, or whole columns when the simulation is shared.
  const bool by_column = shares_simulation(spec);
  const std::size_t job_count = by_column ? spec.grid.size() : curve.points.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < job_count; job = next++) {
      if (by_column) {
        auto column = evaluate_sweep_column(spec, spec.grid[job]);
        std::move(column.begin(), column.end(), curve.points.begin() + static_cast<std::ptrdiff_t>(job * R));
      } else {
        curve.points[job] = evaluate_sweep_point(spec, spec.grid[job / R], job % R);
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(job_count)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    CurveMean m;
    m.n = spec.grid[g];
    for (std::size_t r = 0; r < R; ++r) {
      const auto& pt = curve.points[g * R + r];
      if (!pt.ok) continue;
      ++m.successes;
      m.aic += pt.report.aic;
      m.aicc += pt.report.aicc;
      m.comic += pt.report.comic;
      m.comicc += pt.report.comicc;
      m.entropy_term += pt.report.entropy_term;
      m.comic_uniform += pt.comic_uniform;
    }
    if (m.successes > 0) {
      const double s = static_cast<double>(m.successes);
      m.aic /= s;
      m.aicc /= s;
      m.comic /= s;
      m.comicc /= s;
      m.entropy_term /= s;
      m.comic_uniform /= s;
    }
    curve.mean.push_back(m);
  }
  locate_argmin(curve);
  return curve;
}

}  // namespace comiclab
