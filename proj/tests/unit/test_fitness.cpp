#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "comiclab/fitness.hpp"

using namespace comiclab;

namespace {

ObservationSet make_obs(std::vector<double> x, std::vector<double> c) {
  ObservationSet o;
  o.locations = std::move(x);
  o.values = std::move(c);
  return o;
}

}  // namespace

TEST_SUITE("fitness") {

TEST_CASE("IID log fitness") {
  CHECK(log_fitness_iid(std::vector<double>{1.0, -1.0, 1.0}) == 0.0);
  CHECK(log_fitness_iid(std::vector<double>{3.0, 4.0}) == doctest::Approx(-std::log(12.5)));
  CHECK(log_fitness_iid(std::vector<double>{3.0, 4.0}) == doctest::Approx(-2.5257).epsilon(1e-4));
  const std::vector<double> y{0.3, -1.2, 0.8, 2.0};
  std::vector<double> scaled = y;
  for (auto& v : scaled) v *= 3.0;
  CHECK(log_fitness_iid(scaled) == doctest::Approx(log_fitness_iid(y) - 2.0 * std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_fitness_iid(std::vector<double>{0.0, 0.0}), DegenerateFitError);
}

TEST_CASE("textbook likelihood differs by a k-dependent affine map") {
  const std::vector<double> y{0.3, -1.2, 0.8, 2.0, -0.1};
  const double k = 5.0;
  const double expected = 0.5 * k * log_fitness_iid(y) - 0.5 * k * (std::log(2.0 * std::numbers::pi) + 1.0);
  CHECK(log_likelihood_iid_full(y) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("AIC and AICc") {
  CHECK(aic(-3.0, 2) == 10.0);
  CHECK(aicc(5.0, 2, 10) - 5.0 == doctest::Approx(12.0 / 7.0).epsilon(1e-15));
  CHECK(aicc(5.0, 0, 10) == 5.0);
  CHECK_THROWS_AS(aicc(5.0, 2, 3), std::invalid_argument);
}

TEST_CASE("constant-volume COMIC adds ln n") {
  CHECK(comic_uniform(4.5, 1.0) == 4.5);
  CHECK(comic_uniform(4.5, 1000.0) - 4.5 == doctest::Approx(6.9078).epsilon(1e-5));
  CHECK(comic_uniform(4.5, 2000.0) - comic_uniform(4.5, 1000.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(comicc_uniform(1.0, 100.0) == 1.0 + std::log(100.0));
}

TEST_CASE("integral COMIC") {
  CHECK(comic_integral(3.0, std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 2.0}) ==
        doctest::Approx(3.0 - std::log(2.0)).epsilon(1e-15));
  CHECK(comic_integral(3.0, std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>{1.0, 2.0, 3.0}) == 3.0);
  CHECK_THROWS_AS(comic_integral(3.0, std::vector<double>{1.0}, std::vector<double>{0.0}), std::invalid_argument);

  // Constant dV = |domain| / n with unit mass: a vertical shift of -ln|domain|.
  const std::size_t n = 400;
  const double len = 10.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(n), dv(n, len / n);
  double mass = 0.0;
  for (auto& v : c) mass += (v = u(rng)) * len / n;
  for (auto& v : c) v /= mass;
  CHECK(comic_integral(1.0, c, dv) - comic_uniform(1.0, n) == doctest::Approx(-std::log(len)).epsilon(1e-12));
}

TEST_CASE("weighted MSE") {
  const auto one = make_obs({0.0}, {0.5});
  CHECK(weighted_mse(one, std::vector<double>{0.4}, 1.0).value == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(weighted_mse(one, std::vector<double>{0.5}, 1.0).value == 0.0);
  const auto two = make_obs({0.0, 1.0}, {0.2, 0.4});
  CHECK(weighted_mse(two, std::vector<double>{0.1, 0.5}, 1.0).value == doctest::Approx(0.0375).epsilon(1e-14));

  const auto with_zero = make_obs({0.0, 1.0, 2.0}, {0.2, 0.0, 0.4});
  const auto e = weighted_mse(with_zero, std::vector<double>{0.1, 0.3, 0.5}, 1.0);
  CHECK(e.used == 2);
  CHECK(e.excluded == 1);
  CHECK(e.value == doctest::Approx(0.0375).epsilon(1e-14));
  CHECK_THROWS(weighted_mse(make_obs({0.0}, {0.0}), std::vector<double>{0.1}, 1.0));
}

TEST_CASE("weighted COMIC") {
  CHECK(comic_weighted(1.0, 2, 1.0) == 4.0);
  CHECK(comic_weighted(0.0375, 2, 10.0 / 3000.0) == doctest::Approx(3.139).epsilon(1e-3));
  CHECK(comic_weighted(0.5, 2, 10.0 / 10000.0) - comic_weighted(0.5, 2, 10.0 / 1000.0) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-13));
  CHECK_THROWS_AS(comic_weighted(0.0, 2, 1.0), DegenerateFitError);
}

TEST_CASE("pointwise variance estimator") {
  const std::vector<std::vector<double>> a{{2.0, -3.0}};
  CHECK(pointwise_variance_mle(a) == std::vector<double>{4.0, 9.0});
  const std::vector<std::vector<double>> b{{1.0, 0.0}, {3.0, 2.0}};
  CHECK(pointwise_variance_mle(b) == std::vector<double>{5.0, 2.0});
  const std::vector<std::vector<double>> same{{0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}};
  CHECK(pointwise_variance_mle(same) == std::vector<double>{0.25, 2.25});
}

TEST_CASE("concentration-proportional variances") {
  const auto v = concentration_variances(std::vector<double>{0.2, 0.0}, 1.0, 100, std::vector<double>{0.5, 0.5});
  CHECK(v[0] == doctest::Approx(0.2 / 50.0));
  CHECK(v[1] == 0.0);
}

TEST_CASE("weighted MSE and the diagonal likelihood share their minimizer") {
  // Model c(theta) = theta * g(x); the MSE weights are 1 / (m c_hat) and the
  // likelihood variances m c_hat.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> x, g, c;
  for (int i = 0; i < 25; ++i) {
    x.push_back(i);
    g.push_back(std::exp(-0.1 * i));
    c.push_back(0.8 * g.back() * u(rng));
  }
  const auto obs = make_obs(x, c);
  const double m_total = 1.0;
  std::vector<double> var(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) var[i] = m_total * c[i];
  std::size_t best_mse = 0, best_ll = 0;
  double min_mse = std::numeric_limits<double>::infinity(), max_ll = -min_mse;
  for (std::size_t t = 0; t <= 400; ++t) {
    const double theta = 0.5 + 0.001 * t;
    std::vector<double> model(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) model[i] = theta * g[i];
    const double e = weighted_mse(obs, model, m_total).value;
    const double ll = log_likelihood_diagonal(residuals(obs, model), var);
    if (e < min_mse) min_mse = e, best_mse = t;
    if (ll > max_ll) max_ll = ll, best_ll = t;
  }
  CHECK(best_mse == best_ll);
  CHECK(best_mse > 0);
  CHECK(best_mse < 400);
}

TEST_CASE("criteria are invariant under permutation of the data") {
  auto obs = make_obs({0.0, 1.0, 2.0, 3.0}, {0.1, 0.4, 0.3, 0.2});
  std::vector<double> model{0.12, 0.35, 0.31, 0.18};
  const auto a = score_iid(obs, model, 2, 1.5);
  const auto w = score_weighted(obs, model, 1.0, 2, 1.5);
  std::swap(obs.values[0], obs.values[3]);
  std::swap(model[0], model[3]);
  std::swap(obs.values[1], obs.values[2]);
  std::swap(model[1], model[2]);
  CHECK(score_iid(obs, model, 2, 1.5).aic == doctest::Approx(a.aic).epsilon(1e-15));
  CHECK(score_weighted(obs, model, 1.0, 2, 1.5).aic == doctest::Approx(w.aic).epsilon(1e-15));
}

TEST_CASE("reports keep comic = aic + entropy term") {
  const auto obs = make_obs({0.0, 1.0, 2.0, 3.0, 4.0}, {0.1, 0.4, 0.3, 0.2, 0.05});
  const std::vector<double> model{0.12, 0.35, 0.31, 0.18, 0.07};
  const auto r = score_iid(obs, model, 2, std::log(300.0));
  CHECK(r.comic == r.aic + std::log(300.0));
  CHECK(r.aicc >= r.aic);
  CHECK(r.comicc == r.aicc + std::log(300.0));
  const auto few = score_iid(make_obs({0.0, 1.0}, {0.1, 0.2}), std::vector<double>{0.0, 0.0}, 2, 0.0);
  CHECK(std::isnan(few.aicc));
  CHECK(criterion_from_string(to_string(CriterionKind::weighted)) == CriterionKind::weighted);
}

}  // TEST_SUITE
