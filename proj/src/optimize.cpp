#include "arfima/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace arfima {

ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double x_tol,
                                int max_iterations) {
  if (!(lo < hi)) {
    throw std::invalid_argument("minimize_scalar: requires lo < hi");
  }
  if (!(x_tol > 0.0) || max_iterations < 1) {
    throw std::invalid_argument("minimize_scalar: bad tolerance settings");
  }

  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  constexpr double kTiny = 1e-21;
  double a = lo;
  double b = hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double step = 0.0;       // step taken two iterations ago
  double last_step = 0.0;  // most recent step

  ScalarMinResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter + 1;
    const double mid = 0.5 * (a + b);
    const double tol = x_tol * std::abs(x) + x_tol * 0.1 + kTiny;
    if (std::abs(x - mid) <= 2.0 * tol - 0.5 * (b - a)) {
      result.converged = true;
      break;
    }
    bool take_golden = true;
    if (std::abs(step) > tol) {
      // Fit a parabola through (v, fv), (w, fw), (x, fx).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      if (std::abs(p) < std::abs(0.5 * q * step) && p > q * (a - x) &&
          p < q * (b - x)) {
        step = last_step;
        last_step = p / q;
        const double u = x + last_step;
        if (u - a < 2.0 * tol || b - u < 2.0 * tol) {
          last_step = (mid > x) ? tol : -tol;
        }
        take_golden = false;
      }
    }
    if (take_golden) {
      step = (x < mid) ? b - x : a - x;
      last_step = kGolden * step;
    }
    const double u =
        (std::abs(last_step) >= tol) ? x + last_step
                                     : x + ((last_step > 0.0) ? tol : -tol);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  result.x = x;
  result.fx = fx;
  return result;
}

namespace {

struct SimplexRun {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

SimplexRun nelder_mead(const std::function<double(std::span<const double>)>& f,
                       std::span<const double> start,
                       std::span<const double> lo, std::span<const double> hi,
                       double x_tol, double f_tol, int max_iterations) {
  const std::size_t n = start.size();
  auto clamp = [&](std::vector<double>& p) {
    for (std::size_t i = 0; i < n; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
  };

  // Initial simplex: the start point plus one vertex per coordinate,
  // displaced by 10% of the box width.
  std::vector<std::vector<double>> verts(n + 1,
                                         std::vector<double>(start.begin(),
                                                             start.end()));
  for (std::size_t i = 0; i < n; ++i) {
    const double width = hi[i] - lo[i];
    double shift = 0.1 * width;
    if (verts[i + 1][i] + shift > hi[i]) shift = -shift;
    verts[i + 1][i] += shift;
    clamp(verts[i + 1]);
  }
  std::vector<double> fvals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fvals[i] = f(verts[i]);

  std::vector<std::size_t> order(n + 1);
  SimplexRun run;
  std::vector<double> centroid(n), trial(n);

  for (int iter = 0; iter < max_iterations; ++iter) {
    run.iterations = iter + 1;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter,
                            std::abs(verts[order[i]][j] - verts[best][j]));
      }
    }
    if (diameter < x_tol && fvals[worst] - fvals[best] < f_tol) {
      run.converged = true;
      break;
    }

    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        if (i != worst) sum += verts[i][j];
      }
      centroid[j] = sum / n;
    }

    auto blend = [&](double coef) {
      for (std::size_t j = 0; j < n; ++j) {
        trial[j] = centroid[j] + coef * (centroid[j] - verts[worst][j]);
      }
      clamp(trial);
      return f(trial);
    };

    const double f_reflect = blend(1.0);
    if (f_reflect < fvals[best]) {
      std::vector<double> reflect = trial;
      const double f_expand = blend(2.0);
      if (f_expand < f_reflect) {
        verts[worst] = trial;
        fvals[worst] = f_expand;
      } else {
        verts[worst] = reflect;
        fvals[worst] = f_reflect;
      }
    } else if (f_reflect < fvals[second_worst]) {
      verts[worst] = trial;
      fvals[worst] = f_reflect;
    } else {
      const double f_contract =
          (f_reflect < fvals[worst]) ? blend(0.5) : blend(-0.5);
      if (f_contract < std::min(f_reflect, fvals[worst])) {
        verts[worst] = trial;
        fvals[worst] = f_contract;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j) {
            verts[i][j] = 0.5 * (verts[i][j] + verts[best][j]);
          }
          clamp(verts[i]);
          fvals[i] = f(verts[i]);
        }
      }
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(fvals.begin(), fvals.end()) - fvals.begin());
  run.x = verts[best];
  run.fx = fvals[best];
  return run;
}

}  // namespace

VectorMinResult minimize_simplex(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, std::span<const double> lo,
    std::span<const double> hi, double x_tol, double f_tol,
    int max_iterations) {
  const std::size_t n = x0.size();
  if (n == 0 || lo.size() != n || hi.size() != n) {
    throw std::invalid_argument(
        "minimize_simplex: inconsistent dimensions");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lo[i] < hi[i])) {
      throw std::invalid_argument("minimize_simplex: requires lo < hi");
    }
  }
  if (!(x_tol > 0.0) || !(f_tol > 0.0) || max_iterations < 1) {
    throw std::invalid_argument("minimize_simplex: bad tolerance settings");
  }

  std::vector<std::vector<double>> starts;
  starts.emplace_back(x0.begin(), x0.end());
  std::vector<double> center(n), up(n), down(n);
  for (std::size_t i = 0; i < n; ++i) {
    center[i] = 0.5 * (lo[i] + hi[i]);
    up[i] = std::clamp(center[i] + 0.25 * (hi[i] - lo[i]), lo[i], hi[i]);
    down[i] = std::clamp(center[i] - 0.25 * (hi[i] - lo[i]), lo[i], hi[i]);
  }
  starts.push_back(center);
  starts.push_back(up);
  starts.push_back(down);

  VectorMinResult result;
  bool first = true;
  for (const auto& start : starts) {
    const SimplexRun run =
        nelder_mead(f, start, lo, hi, x_tol, f_tol, max_iterations);
    result.iterations += run.iterations;
    if (first || run.fx < result.fx) {
      result.x = run.x;
      result.fx = run.fx;
      result.converged = run.converged;
      first = false;
    }
  }
  return result;
}

}  // namespace arfima
