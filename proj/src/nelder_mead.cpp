#include "comiclab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace comiclab {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

// x = a + t (b - a)
std::vector<double> along(const std::vector<double>& a, const std::vector<double>& b, double t) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead requires at least one coordinate");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  const double f0 = objective(x0);
  ++result.evaluations;
  if (!std::isfinite(f0)) throw std::invalid_argument("objective is not finite at the starting point");

  std::vector<Vertex> simplex;
  simplex.push_back({x0, f0});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = x0;
    x[i] = x[i] != 0.0 ? (1.0 + opt.relative_step) * x[i] : opt.zero_step;
    simplex.push_back({x, eval(x)});
  }
  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();

  auto done = [&] {
    double diameter = 0.0;
    double spread = 0.0;
    for (std::size_t v = 1; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i)
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
      spread = std::max(spread, std::abs(simplex[v].f - simplex[0].f));
    }
    return diameter <= opt.tol_x && spread <= opt.tol_f;
  };

  while (result.iterations < opt.max_iterations) {
    if (done()) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    for (auto& c : centroid) c /= static_cast<double>(dim);

    Vertex& worst = simplex[dim];
    const double f_best = simplex[0].f;
    const double f_second_worst = simplex[dim - 1].f;

    auto xr = along(centroid, worst.x, -opt.reflection);
    const double fr = eval(xr);
    if (fr < f_best) {
      auto xe = along(centroid, worst.x, -opt.reflection * opt.expansion);
      const double fe = eval(xe);
      if (fe < fr)
        worst = {std::move(xe), fe};
      else
        worst = {std::move(xr), fr};
    } else if (fr < f_second_worst) {
      worst = {std::move(xr), fr};
    } else {
      bool accepted = false;
      if (fr < worst.f) {
        auto xc = along(centroid, xr, opt.contraction);
        const double fc = eval(xc);
        if (fc <= fr) {
          worst = {std::move(xc), fc};
          accepted = true;
        }
      } else {
        auto xcc = along(centroid, worst.x, opt.contraction);
        const double fcc = eval(xcc);
        if (fcc <= worst.f) {
          worst = {std::move(xcc), fcc};
          accepted = true;
        }
      }
      if (!accepted) {
        ++result.shrinks;
        for (std::size_t v = 1; v <= dim; ++v) {
          simplex[v].x = along(simplex[0].x, simplex[v].x, opt.shrink);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    order();
  }
  if (!result.converged && done()) result.converged = true;

  result.x = simplex[0].x;
  result.value = simplex[0].f;
  return result;
}

}  // namespace comiclab
