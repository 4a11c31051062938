#include "comiclab/estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace comiclab {

std::string_view to_string(Method m) { return m == Method::rwpt ? "rwpt" : "mtpt"; }

Method method_from_string(std::string_view s) {
  if (s == "rwpt") return Method::rwpt;
  if (s == "mtpt") return Method::mtpt;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

std::string_view to_string(EntropyMode m) { return m == EntropyMode::uniform ? "uniform" : "integral"; }

EntropyMode entropy_from_string(std::string_view s) {
  if (s == "uniform") return EntropyMode::uniform;
  if (s == "integral") return EntropyMode::integral;
  throw std::invalid_argument("unknown entropy mode '" + std::string(s) + "'");
}

std::string_view to_string(VolumeRule r) { return r == VolumeRule::voronoi ? "voronoi" : "uniform"; }

VolumeRule volume_rule_from_string(std::string_view s) {
  if (s == "voronoi") return VolumeRule::voronoi;
  if (s == "uniform") return VolumeRule::uniform;
  throw std::invalid_argument("unknown volume rule '" + std::string(s) + "'");
}

std::string_view to_string(MtptReadout r) {
  switch (r) {
    case MtptReadout::automatic: return "auto";
    case MtptReadout::interpolate: return "interpolate";
    case MtptReadout::bin: return "bin";
  }
  return "auto";
}

MtptReadout readout_from_string(std::string_view s) {
  if (s == "auto") return MtptReadout::automatic;
  if (s == "interpolate") return MtptReadout::interpolate;
  if (s == "bin") return MtptReadout::bin;
  throw std::invalid_argument("unknown MTPT readout '" + std::string(s) + "'");
}

ForwardModel::ForwardModel(const SolverSpec& spec, const ObservationSet& observations, const AdeParams& base)
    : spec_(spec), base_(base), locations_(observations.locations) {
  validate(base, spec.domain);
  if (spec.method == Method::rwpt) {
    walk_ = draw_walk_increments(spec.particles, base.final_time, spec.dt, spec.seed);
    grid_ = default_grid(observations);
  } else {
    mtpt_ = prepare_mtpt(spec.domain, spec.particles, PlacementSpec{spec.placement, spec.seed}, base.release,
                         spec.normalization.value_or(default_normalization(spec.placement)));
    if (spec_.readout == MtptReadout::automatic)
      spec_.readout = spec.placement == Spacing::uniform ? MtptReadout::interpolate : MtptReadout::bin;
    if (spec_.readout == MtptReadout::bin) grid_ = default_grid(observations);
  }
}

ModelOutput ForwardModel::run(double velocity, double diffusion) const {
  AdeParams p = base_;
  p.velocity = velocity;
  p.diffusion = diffusion;
  ModelOutput out;
  out.particles = spec_.particles;
  if (walk_) {
    const auto ens = propagate_walk(p, *walk_);
    out.support_concentrations = bin_concentrations(ens, *grid_);
    out.support_volumes = grid_->widths();
    out.at_observations = out.support_concentrations;
    out.m_total = 1.0;
  } else {
    auto sim = run_mtpt(p, *mtpt_, spec_.dt);
    if (spec_.volumes == VolumeRule::uniform) {
      const double dv = spec_.domain.length() / static_cast<double>(spec_.particles);
      sim.volumes.assign(spec_.particles, dv);
      for (std::size_t i = 0; i < spec_.particles; ++i) sim.concentrations[i] = sim.ensemble.masses[i] / dv;
    }
    out.at_observations = grid_ ? bin_mass_density(sim.ensemble, *grid_)
                                : sample_profile(sim.ensemble.positions, sim.concentrations, locations_);
    out.support_concentrations = sim.concentrations;
    out.support_volumes = sim.volumes;
    out.m_total = 1.0;
    out.negative_mass = sim.negative_mass;
    out.clamped = sim.clamped;
  }
  return out;
}

double entropy_term(CriterionKind kind, EntropyMode mode, const ModelOutput& out, const Domain& domain) {
  if (mode == EntropyMode::integral) return entropy_integral(out.support_concentrations, out.support_volumes);
  const double n = static_cast<double>(out.particles);
  // Constant dV = |domain| / n: +ln n for the IID criterion, -ln dV for the
  // weighted one. The two differ by the constant ln |domain|.
  return kind == CriterionKind::iid_gaussian ? std::log(n) : -std::log(domain.length() / n);
}

FitnessReport score(const ObservationSet& obs, const ModelOutput& out, CriterionKind kind, int p, EntropyMode mode,
                    const Domain& domain) {
  const double h = entropy_term(kind, mode, out, domain);
  return kind == CriterionKind::iid_gaussian ? score_iid(obs, out.at_observations, p, h)
                                             : score_weighted(obs, out.at_observations, out.m_total, p, h);
}

EstimationResult estimate_parameters(const ForwardModel& model, const ObservationSet& obs, CriterionKind kind,
                                     const EstimationOptions& options) {
  if (!(options.initial_diffusion > 0.0)) throw std::invalid_argument("initial diffusion guess must be positive");
  constexpr int kParameters = 2;
  const Domain domain = model.spec().domain;
  auto objective = [&](std::span<const double> theta) {
    try {
      const auto out = model.run(theta[0], std::exp(theta[1]));
      return score(obs, out, kind, kParameters, EntropyMode::uniform, domain).aic;
    } catch (const DegenerateFitError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const auto nm =
      nelder_mead(objective, {options.initial_velocity, std::log(options.initial_diffusion)}, options.simplex);
  EstimationResult r;
  r.velocity = nm.x[0];
  r.diffusion = std::exp(nm.x[1]);
  r.value = nm.value;
  r.iterations = nm.iterations;
  r.evaluations = nm.evaluations;
  r.converged = nm.converged;
  r.kind = kind;
  return r;
}

EstimationResult estimate_parameters(const ObservationSet& obs, const AdeParams& base, const SolverSpec& solver,
                                     CriterionKind kind, const EstimationOptions& options) {
  return estimate_parameters(ForwardModel(solver, obs, base), obs, kind, options);
}

}  // namespace comiclab
