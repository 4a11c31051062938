#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "comiclab/fitness.hpp"
#include "comiclab/model.hpp"
#include "comiclab/mtpt.hpp"
#include "comiclab/nelder_mead.hpp"
#include "comiclab/rwpt.hpp"

namespace comiclab {

enum class Method { rwpt, mtpt };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

/// How the computational-entropy addend is formed.
enum class EntropyMode {
  uniform,   // constant dV = |domain| / n
  integral,  // quadrature of -integral c_n ln dV over the particles or bins
};

std::string_view to_string(EntropyMode m);
EntropyMode entropy_from_string(std::string_view s);

/// How an MTPT profile is read at the observation points.
enum class MtptReadout {
  automatic,    // interpolate for uniform placement, bin for random placement
  interpolate,  // linear interpolation of c_i = m_i / dV_i between particles
  bin,          // particle mass in each observation cell divided by its width
};

/// Local volumes attached to MTPT particles.
enum class VolumeRule {
  voronoi,  // clipped Voronoi lengths
  uniform,  // |domain| / n for every particle
};

std::string_view to_string(VolumeRule r);
VolumeRule volume_rule_from_string(std::string_view s);

std::string_view to_string(MtptReadout r);
MtptReadout readout_from_string(std::string_view s);

struct SolverSpec {
  Method method = Method::mtpt;
  std::size_t particles = 3000;
  double dt = 0.1;
  Domain domain{};
  Spacing placement = Spacing::uniform;  // MTPT only
  std::uint64_t seed = 0;                // walk stream (RWPT) or placement (MTPT)
  MtptReadout readout = MtptReadout::automatic;
  std::optional<Normalization> normalization;  // MTPT; default_normalization(placement) when unset
  VolumeRule volumes = VolumeRule::voronoi;     // MTPT
};

/// Model concentrations at the observation points plus the support the
/// entropy integral is taken over (RWPT bins or MTPT particles).
struct ModelOutput {
  std::vector<double> at_observations;
  std::vector<double> support_concentrations;
  std::vector<double> support_volumes;
  std::size_t particles = 0;
  double m_total = 1.0;
  bool negative_mass = false;
  bool clamped = false;
};

/// A particle simulation whose random inputs are frozen at construction:
/// RWPT reuses one increment draw and MTPT one placement for every
/// (v, D) it is run with.
class ForwardModel {
 public:
  ForwardModel(const SolverSpec& spec, const ObservationSet& observations, const AdeParams& base);

  ModelOutput run(double velocity, double diffusion) const;
  const SolverSpec& spec() const { return spec_; }

 private:
  SolverSpec spec_;
  AdeParams base_;
  std::vector<double> locations_;
  std::optional<WalkIncrements> walk_;
  std::optional<BinGrid> grid_;
  std::optional<MtptSetup> mtpt_;
};

double entropy_term(CriterionKind kind, EntropyMode mode, const ModelOutput& out, const Domain& domain);

FitnessReport score(const ObservationSet& observations, const ModelOutput& out, CriterionKind kind, int p,
                    EntropyMode mode, const Domain& domain);

struct EstimationResult {
  double velocity = 0.0;
  double diffusion = 0.0;
  double value = 0.0;  // criterion at the optimum
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  CriterionKind kind = CriterionKind::iid_gaussian;
};

struct EstimationOptions {
  double initial_velocity = 0.5;
  double initial_diffusion = 0.5;
  NelderMeadOptions simplex{};
};

/// Minimizes AIC (IID) or 2 ln E + 2p (weighted) over theta = (v, ln D).
EstimationResult estimate_parameters(const ObservationSet& observations, const AdeParams& base,
                                     const SolverSpec& solver, CriterionKind kind,
                                     const EstimationOptions& options = {});

EstimationResult estimate_parameters(const ForwardModel& model, const ObservationSet& observations,
                                     CriterionKind kind, const EstimationOptions& options = {});

}  // namespace comiclab
