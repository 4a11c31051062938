#include "comiclab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "comiclab/seeds.hpp"

namespace comiclab {

std::string_view to_string(Spacing s) { return s == Spacing::uniform ? "uniform" : "random"; }

Spacing spacing_from_string(std::string_view s) {
  if (s == "uniform") return Spacing::uniform;
  if (s == "random") return Spacing::random;
  throw std::invalid_argument("unknown spacing mode '" + std::string(s) + "'");
}

void validate(const AdeParams& params, const Domain& domain) {
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("domain requires lo < hi");
  if (!(params.diffusion > 0.0)) throw std::invalid_argument("diffusion must be positive");
  if (!(params.final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!std::isfinite(params.velocity)) throw std::invalid_argument("velocity must be finite");
  if (!domain.contains(params.release)) throw std::invalid_argument("release point lies outside the domain");
}

double analytic_concentration(const AdeParams& params, double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("analytic_concentration requires t > 0");
  if (!(params.diffusion > 0.0)) throw std::domain_error("analytic_concentration requires D > 0");
  const double four_dt = 4.0 * params.diffusion * t;
  const double s = x - params.release - params.velocity * t;
  return std::exp(-s * s / four_dt) / std::sqrt(std::numbers::pi * four_dt);
}

std::vector<double> analytic_profile(const AdeParams& params, std::span<const double> x, double t) {
  std::vector<double> c(x.size());
  std::transform(x.begin(), x.end(), c.begin(), [&](double xi) { return analytic_concentration(params, xi, t); });
  return c;
}

std::vector<double> linspace(double lo, double hi, std::size_t k) {
  std::vector<double> out(k);
  if (k == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(k - 1);
  for (std::size_t i = 0; i < k; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

namespace {

std::vector<double> random_locations(const Domain& domain, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, Stream::locations, 0));
  std::uniform_real_distribution<double> unif(domain.lo, domain.hi);
  std::vector<double> x(k);
  for (;;) {
    for (auto& xi : x) xi = unif(rng);
    std::sort(x.begin(), x.end());
    if (std::adjacent_find(x.begin(), x.end()) == x.end()) return x;
  }
}

}  // namespace

ObservationSet synthesize_observations(const AdeParams& params, const Domain& domain, std::size_t k,
                                       Spacing spacing, const NoiseSpec& noise) {
  if (k < 1) throw std::invalid_argument("synthesize_observations requires k >= 1");
  if (!(noise.alpha >= 0.0)) throw std::invalid_argument("noise alpha must be non-negative");
  validate(params, domain);

  ObservationSet obs;
  obs.spacing = spacing;
  obs.noise = noise;
  obs.locations = spacing == Spacing::uniform ? linspace(domain.lo, domain.hi, k)
                                              : random_locations(domain, k, noise.seed);
  obs.values = analytic_profile(params, obs.locations, params.final_time);
  if (noise.alpha == 0.0) return obs;

  // Truncated normal by rejection: negative draws are redrawn so k is kept.
  std::mt19937_64 rng(derive_seed(noise.seed, Stream::noise, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : obs.values) {
    if (v <= 0.0) continue;
    const double mean = v;
    const double sd = noise.alpha * mean;
    double draw;
    do {
      draw = mean + sd * normal(rng);
    } while (draw < 0.0);
    v = draw;
  }
  return obs;
}

}  // namespace comiclab
