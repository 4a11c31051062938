#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace comiclab {

/// Constant-coefficient 1-D advection-diffusion problem released as a unit
/// point mass at `release` and observed at `final_time`.
struct AdeParams {
  double velocity = 0.0;
  double diffusion = 1.0;
  double release = 0.0;
  double final_time = 1.0;
};

struct Domain {
  double lo = -5.0;
  double hi = 5.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Multiplicative Gaussian measurement noise: sd = alpha * c(x, T).
struct NoiseSpec {
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

enum class Spacing { uniform, random };

std::string_view to_string(Spacing s);
Spacing spacing_from_string(std::string_view s);

/// k observations, locations strictly increasing inside the domain.
struct ObservationSet {
  std::vector<double> locations;
  std::vector<double> values;
  Spacing spacing = Spacing::uniform;
  NoiseSpec noise{};

  std::size_t size() const { return locations.size(); }
};

/// Throws std::invalid_argument when D <= 0, T <= 0, lo >= hi or the release
/// point is outside the domain.
void validate(const AdeParams& params, const Domain& domain);

/// Green's function of the ADE; throws std::domain_error for t <= 0 or D <= 0.
double analytic_concentration(const AdeParams& params, double x, double t);

std::vector<double> analytic_profile(const AdeParams& params, std::span<const double> x, double t);

/// k points spanning [lo, hi] endpoints-inclusive; k == 1 gives the midpoint.
std::vector<double> linspace(double lo, double hi, std::size_t k);

ObservationSet synthesize_observations(const AdeParams& params, const Domain& domain, std::size_t k,
                                       Spacing spacing, const NoiseSpec& noise);

}  // namespace comiclab
