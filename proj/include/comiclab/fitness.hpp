#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "comiclab/model.hpp"

namespace comiclab {

/// Raised when a criterion is -infinity because the fit is perfect.
class DegenerateFitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class CriterionKind { iid_gaussian, weighted };

std::string_view to_string(CriterionKind k);
CriterionKind criterion_from_string(std::string_view s);

/// Scores for one simulation. For the weighted criterion `neg2lnL` holds
/// 2 ln E so that aic = neg2lnL + 2p holds for both kinds.
struct FitnessReport {
  CriterionKind kind = CriterionKind::iid_gaussian;
  double neg2lnL = 0.0;
  int p = 0;
  std::size_t k = 0;
  double aic = 0.0;
  double aicc = 0.0;  // NaN when k <= p + 1
  double comic = 0.0;
  double comicc = 0.0;
  double entropy_term = 0.0;
  std::size_t excluded = 0;  // zero-valued data dropped by the weighted criterion
};

/// -ln(SSE / k), the maximized IID Gaussian log-likelihood with constants
/// removed. Throws DegenerateFitError when SSE == 0.
double log_fitness_iid(std::span<const double> residuals);

/// Textbook maximized IID Gaussian log-likelihood -(k/2)(ln(2 pi SSE/k) + 1).
double log_likelihood_iid_full(std::span<const double> residuals);

/// Diagonal-covariance Gaussian log-likelihood with the given variances.
double log_likelihood_diagonal(std::span<const double> residuals, std::span<const double> variances);

double aic(double log_likelihood, int p);
/// Throws std::invalid_argument when k <= p + 1.
double aicc(double aic_value, int p, std::size_t k);

double comic_uniform(double aic_value, double n);
double comicc_uniform(double aicc_value, double n);

/// -sum_i c_i ln(dV_i) dV_i, the particle-Voronoi quadrature of
/// -integral c ln(dV) dx.
double entropy_integral(std::span<const double> concentrations, std::span<const double> volumes);
double comic_integral(double aic_value, std::span<const double> concentrations, std::span<const double> volumes);

struct WeightedMse {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// E = (1/k) sum w_i (c_hat_i - c_n(x_i))^2 with w_i = 1 / (m_total c_hat_i);
/// k counts only points with c_hat_i > 0.
WeightedMse weighted_mse(const ObservationSet& observations, std::span<const double> model, double m_total);

/// 2 ln E + 2p - ln(dV). Throws DegenerateFitError when E == 0.
double comic_weighted(double mse, int p, double volume);

/// sigma_i^2 = (1/N) sum_l (y_l)_i^2.
std::vector<double> pointwise_variance_mle(std::span<const std::vector<double>> samples);

/// sigma_i^2 = m_total / (n dx_i) * c_n(x_i).
std::vector<double> concentration_variances(std::span<const double> model, double m_total, std::size_t n,
                                            std::span<const double> widths);

std::vector<double> residuals(const ObservationSet& observations, std::span<const double> model);

/// IID Gaussian scores; `entropy_term` is added to AIC and AICc.
FitnessReport score_iid(const ObservationSet& observations, std::span<const double> model, int p,
                        double entropy_term);

/// Weighted-MSE scores (aic = 2 ln E + 2p); `entropy_term` is added as above.
FitnessReport score_weighted(const ObservationSet& observations, std::span<const double> model, double m_total,
                             int p, double entropy_term);

}  // namespace comiclab
