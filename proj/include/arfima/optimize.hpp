#pragma once

#include <functional>
#include <span>
#include <vector>

// Derivative-free minimization over box-constrained parameter spaces: Brent
// search for one dimension, Nelder-Mead with restarts for several.

namespace arfima {

struct ScalarMinResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f over [lo, hi] by Brent's method (golden-section steps with
// parabolic interpolation when reliable).  Stops when the bracket around
// the minimizer shrinks below x_tol.
ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double x_tol = 1e-8,
                                int max_iterations = 500);

struct VectorMinResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f over the box [lo, hi] by the Nelder-Mead simplex method.
// Every trial point is clamped to the box.  The search runs from x0 and
// from three further deterministic starting points (the box center and
// the center shifted up and down by a quarter of the box width in every
// coordinate), keeping the best result; iterations counts all four runs.
// Converged means the simplex diameter fell below x_tol and the spread of
// function values below f_tol within the per-run iteration budget.
VectorMinResult minimize_simplex(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, std::span<const double> lo,
    std::span<const double> hi, double x_tol = 1e-8, double f_tol = 1e-12,
    int max_iterations = 500);

}  // namespace arfima
