#include "comiclab/fitness.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace comiclab {

std::string_view to_string(CriterionKind k) { return k == CriterionKind::iid_gaussian ? "iid-gaussian" : "weighted"; }

CriterionKind criterion_from_string(std::string_view s) {
  if (s == "iid-gaussian" || s == "iid") return CriterionKind::iid_gaussian;
  if (s == "weighted" || s == "weighted-mse") return CriterionKind::weighted;
  throw std::invalid_argument("unknown criterion kind '" + std::string(s) + "'");
}

namespace {

double sum_of_squares(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s;
}

}  // namespace

double log_fitness_iid(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("log_fitness_iid requires at least one residual");
  const double sse = sum_of_squares(y);
  if (sse == 0.0) throw DegenerateFitError("perfect fit: sum of squared errors is zero");
  return -std::log(sse / static_cast<double>(y.size()));
}

double log_likelihood_iid_full(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("log_likelihood_iid_full requires at least one residual");
  const double sse = sum_of_squares(y);
  if (sse == 0.0) throw DegenerateFitError("perfect fit: sum of squared errors is zero");
  const double k = static_cast<double>(y.size());
  return -0.5 * k * (std::log(2.0 * std::numbers::pi * sse / k) + 1.0);
}

double log_likelihood_diagonal(std::span<const double> y, std::span<const double> var) {
  if (y.size() != var.size()) throw std::invalid_argument("residuals and variances differ in length");
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(var[i] > 0.0)) throw std::invalid_argument("variances must be positive");
    ll -= 0.5 * (std::log(2.0 * std::numbers::pi * var[i]) + y[i] * y[i] / var[i]);
  }
  return ll;
}

double aic(double log_likelihood, int p) { return -2.0 * log_likelihood + 2.0 * p; }

double aicc(double aic_value, int p, std::size_t k) {
  if (static_cast<double>(k) <= static_cast<double>(p) + 1.0)
    throw std::invalid_argument("AICc requires k > p + 1");
  const double pd = p;
  return aic_value + (2.0 * pd * pd + 2.0 * pd) / (static_cast<double>(k) - pd - 1.0);
}

double comic_uniform(double aic_value, double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("particle count must be at least one");
  return aic_value + std::log(n);
}

double comicc_uniform(double aicc_value, double n) { return comic_uniform(aicc_value, n); }

double entropy_integral(std::span<const double> c, std::span<const double> dv) {
  if (c.size() != dv.size()) throw std::invalid_argument("concentrations and volumes differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(dv[i] > 0.0)) throw std::invalid_argument("local volumes must be positive");
    s += c[i] * std::log(dv[i]) * dv[i];
  }
  return -s;
}

double comic_integral(double aic_value, std::span<const double> c, std::span<const double> dv) {
  return aic_value + entropy_integral(c, dv);
}

WeightedMse weighted_mse(const ObservationSet& obs, std::span<const double> model, double m_total) {
  if (model.size() != obs.size()) throw std::invalid_argument("model values do not match the observations");
  if (!(m_total > 0.0)) throw std::invalid_argument("total mass must be positive");
  WeightedMse out;
  double acc = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double c_hat = obs.values[i];
    if (!(c_hat > 0.0)) {
      ++out.excluded;
      continue;
    }
    const double r = c_hat - model[i];
    acc += r * r / (m_total * c_hat);
    ++out.used;
  }
  if (out.used == 0) throw std::domain_error("weighted MSE undefined: every observation is zero");
  out.value = acc / static_cast<double>(out.used);
  return out;
}

double comic_weighted(double mse, int p, double volume) {
  if (!(volume > 0.0)) throw std::invalid_argument("sampling volume must be positive");
  if (mse == 0.0) throw DegenerateFitError("perfect fit: weighted MSE is zero");
  if (!(mse > 0.0)) throw std::invalid_argument("weighted MSE must be non-negative");
  return 2.0 * std::log(mse) + 2.0 * p - std::log(volume);
}

std::vector<double> pointwise_variance_mle(std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw std::invalid_argument("at least one residual sample is required");
  const std::size_t k = samples.front().size();
  std::vector<double> var(k, 0.0);
  for (const auto& y : samples) {
    if (y.size() != k) throw std::invalid_argument("residual samples differ in length");
    for (std::size_t i = 0; i < k; ++i) var[i] += y[i] * y[i];
  }
  const double n = static_cast<double>(samples.size());
  for (auto& v : var) v /= n;
  return var;
}

std::vector<double> concentration_variances(std::span<const double> model, double m_total, std::size_t n,
                                            std::span<const double> widths) {
  if (model.size() != widths.size()) throw std::invalid_argument("model values and bin widths differ in length");
  std::vector<double> var(model.size());
  for (std::size_t i = 0; i < model.size(); ++i)
    var[i] = m_total / (static_cast<double>(n) * widths[i]) * model[i];
  return var;
}

std::vector<double> residuals(const ObservationSet& obs, std::span<const double> model) {
  if (model.size() != obs.size()) throw std::invalid_argument("model values do not match the observations");
  std::vector<double> y(obs.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = obs.values[i] - model[i];
  return y;
}

namespace {

void finish(FitnessReport& r, double entropy_term) {
  r.aic = r.neg2lnL + 2.0 * r.p;
  r.aicc = static_cast<double>(r.k) > r.p + 1.0 ? aicc(r.aic, r.p, r.k) : std::numeric_limits<double>::quiet_NaN();
  r.entropy_term = entropy_term;
  r.comic = r.aic + entropy_term;
  r.comicc = r.aicc + entropy_term;
}

}  // namespace

FitnessReport score_iid(const ObservationSet& obs, std::span<const double> model, int p, double entropy_term) {
  FitnessReport r;
  r.kind = CriterionKind::iid_gaussian;
  r.p = p;
  r.k = obs.size();
  r.neg2lnL = -2.0 * log_fitness_iid(residuals(obs, model));
  finish(r, entropy_term);
  return r;
}

FitnessReport score_weighted(const ObservationSet& obs, std::span<const double> model, double m_total, int p,
                             double entropy_term) {
  const auto e = weighted_mse(obs, model, m_total);
  if (e.value == 0.0) throw DegenerateFitError("perfect fit: weighted MSE is zero");
  FitnessReport r;
  r.kind = CriterionKind::weighted;
  r.p = p;
  r.k = e.used;
  r.excluded = e.excluded;
  r.neg2lnL = 2.0 * std::log(e.value);
  finish(r, entropy_term);
  return r;
}

}  // namespace comiclab
