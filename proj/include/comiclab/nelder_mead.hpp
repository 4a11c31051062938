#pragma once

#include <functional>
#include <span>
#include <vector>

namespace comiclab {

struct NelderMeadOptions {
  double tol_x = 1e-8;  // max coordinate distance of any vertex from the best
  double tol_f = 1e-8;  // max |f_i - f_best|
  int max_iterations = 400;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double relative_step = 0.05;  // initial simplex offset as a fraction of each coordinate
  double zero_step = 0.00025;   // offset used for coordinates equal to zero
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int shrinks = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimization. Non-finite objective values rank as +inf.
/// Throws std::invalid_argument when the objective is not finite at x0.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace comiclab
