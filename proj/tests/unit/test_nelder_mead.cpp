#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "comiclab/nelder_mead.hpp"

using namespace comiclab;

TEST_SUITE("nelder_mead") {

TEST_CASE("convex quadratic") {
  auto f = [](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0); };
  const auto r = nelder_mead(f, {0.5, 0.5});
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-6);
  CHECK(std::abs(r.x[1] - 2.0) < 1e-6);
}

TEST_CASE("Rosenbrock from (-1.2, 1)") {
  auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_iterations = 2000;
  const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-3);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-3);
}

TEST_CASE("a flat objective returns the start without shrinking") {
  auto f = [](std::span<const double>) { return 3.0; };
  const auto r = nelder_mead(f, {0.4, -0.2});
  CHECK(r.x == std::vector<double>{0.4, -0.2});
  CHECK(r.shrinks == 0);
  CHECK(r.value == 3.0);
}

TEST_CASE("the iteration cap reports non-convergence with the best point") {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + 10.0 * x[1] * x[1]; };
  NelderMeadOptions opt;
  opt.max_iterations = 5;
  const auto r = nelder_mead(f, {3.0, 2.0}, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 5);
  CHECK(r.value < f(std::vector<double>{3.0, 2.0}));
}

TEST_CASE("zero coordinates use the absolute step") {
  std::vector<std::vector<double>> seen;
  auto f = [&](std::span<const double> x) {
    seen.emplace_back(x.begin(), x.end());
    return x[0] * x[0] + x[1] * x[1];
  };
  NelderMeadOptions opt;
  opt.max_iterations = 0;
  nelder_mead(f, {0.0, 2.0}, opt);
  REQUIRE(seen.size() >= 3);
  CHECK(seen[1] == std::vector<double>{0.00025, 2.0});
  CHECK(seen[2][0] == 0.0);
  CHECK(seen[2][1] == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("non-finite values rank as +inf and a non-finite start is rejected") {
  auto walled = [](std::span<const double> x) {
    return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 0.2) * (x[0] - 0.2);
  };
  const auto r = nelder_mead(walled, {1.0});
  CHECK(std::abs(r.x[0] - 0.2) < 1e-6);
  auto bad = [](std::span<const double>) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(nelder_mead(bad, {1.0}), std::invalid_argument);
}

}  // TEST_SUITE
