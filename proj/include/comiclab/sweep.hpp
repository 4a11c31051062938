#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comiclab/estimation.hpp"

namespace comiclab {

/// One fitness-versus-particle-number experiment.
struct SweepSpec {
  AdeParams truth{};  // generates the data; also the model parameters unless re-estimated
  Domain domain{};
  std::size_t k = 30;
  Spacing spacing = Spacing::uniform;
  double alpha = 0.0;
  Method method = Method::mtpt;
  double dt = 0.1;
  Spacing placement = Spacing::uniform;
  MtptReadout readout = MtptReadout::automatic;
  std::optional<Normalization> normalization;
  VolumeRule volumes = VolumeRule::voronoi;
  CriterionKind criterion = CriterionKind::iid_gaussian;
  EntropyMode entropy = EntropyMode::uniform;
  int p = 0;
  std::vector<std::size_t> grid;
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  bool estimate_each_n = false;
  EstimationOptions estimation{};
  unsigned jobs = 1;
};

struct SweepPoint {
  std::size_t n = 0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  FitnessReport report{};
  double comic_uniform = 0.0;  // AIC + ln n, whatever entropy mode the report uses
  std::optional<EstimationResult> estimate;
  bool negative_mass = false;
  bool clamped = false;
};

/// Realization-mean of each criterion at one n.
struct CurveMean {
  std::size_t n = 0;
  std::size_t successes = 0;
  double aic = 0.0;
  double aicc = 0.0;
  double comic = 0.0;
  double comicc = 0.0;
  double entropy_term = 0.0;
  double comic_uniform = 0.0;
};

struct SweepCurve {
  std::vector<SweepPoint> points;  // n-major, realization-minor
  std::vector<CurveMean> mean;
  std::size_t argmin_index = 0;
  std::size_t argmin_n = 0;
  std::size_t bracket_lo = 0;  // neighbouring grid points around the argmin
  std::size_t bracket_hi = 0;
  bool found = false;
};

/// round(10^e) for `points` exponents evenly spaced over [lo, hi]; duplicates removed.
std::vector<std::size_t> log_grid(double lo_exponent, double hi_exponent, std::size_t points);

/// Seed carried by every row of realization r.
std::uint64_t realization_seed(std::uint64_t master, std::size_t realization);

/// Data set used by realization r: redrawn per realization only when the
/// data are random (noisy values or random locations).
ObservationSet sweep_observations(const SweepSpec& spec, std::size_t realization);

bool data_is_random(const SweepSpec& spec);
bool simulation_is_random(const SweepSpec& spec);

/// True when every realization at a given n runs the identical simulation
/// (deterministic solver, fixed data locations, no re-estimation), so the
/// model output can be computed once per n and scored per realization.
bool shares_simulation(const SweepSpec& spec);

SweepPoint evaluate_sweep_point(const SweepSpec& spec, std::size_t n, std::size_t realization);

/// All realizations at one n; shares the simulation when shares_simulation().
std::vector<SweepPoint> evaluate_sweep_column(const SweepSpec& spec, std::size_t n);

/// Runs every (n, realization) job, aggregates means and locates the argmin
/// of the mean COMIC over successful points.
SweepCurve sweep_particle_numbers(const SweepSpec& spec);

/// Argmin of a mean curve over the entries with at least one success.
void locate_argmin(SweepCurve& curve);

}  // namespace comiclab
