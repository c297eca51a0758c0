#pragma once

// Deterministic maximisation of a smooth function over the unit square: a
// coarse grid followed by coordinate-wise golden-section refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "daa/errors.hpp"

namespace daa {

struct GridRefineOptions {
  std::size_t grid_points = 101;  // per axis, including both edges
  double window = 0.02;           // half-width of each line search
  double line_tolerance = 1e-9;
  double step_tolerance = 1e-7;
  std::size_t max_sweeps = 200;
};

struct Maximum2D {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

namespace detail {

// Golden-section search for the maximum of f on [lo, hi]. The interval
// endpoints are candidates too, so optima on the boundary are found.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  double best_x = lo;
  double best = f(lo);
  for (double x : {mid, hi}) {
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace detail

/// Maximises f(x, y) over [0,1]^2. Grid ties go to the smaller x, then the
/// smaller y; refinement only accepts strict improvements, so the result is
/// reproducible and never worse than the best grid point.
template <class F>
Maximum2D maximize_unit_square(F&& f, const GridRefineOptions& options = {}) {
  detail::require(options.grid_points >= 2, "grid needs at least two points per axis");
  const double step = 1.0 / static_cast<double>(options.grid_points - 1);
  Maximum2D best{0.0, 0.0, f(0.0, 0.0)};
  for (std::size_t i = 0; i < options.grid_points; ++i) {
    const double x = static_cast<double>(i) * step;
    for (std::size_t j = 0; j < options.grid_points; ++j) {
      const double y = static_cast<double>(j) * step;
      const double v = f(x, y);
      if (v > best.value) best = {x, y, v};
    }
  }

  // An optimum on an edge may hide a narrow ridge within one step of it (a
  // plateau at p1 = 0, say). Rescan that strip at grid resolution.
  const std::size_t n = options.grid_points;
  auto scan_strip = [&](double x_lo, double x_hi, double y_lo, double y_hi) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        const double y = y_lo + (y_hi - y_lo) * static_cast<double>(j) / static_cast<double>(n - 1);
        const double v = f(x, y);
        if (v > best.value) best = {x, y, v};
      }
    }
  };
  const Maximum2D coarse = best;
  if (coarse.x == 0.0) scan_strip(0.0, step, 0.0, 1.0);
  if (coarse.x == 1.0) scan_strip(1.0 - step, 1.0, 0.0, 1.0);
  if (coarse.y == 0.0) scan_strip(0.0, 1.0, 0.0, step);
  if (coarse.y == 1.0) scan_strip(0.0, 1.0, 1.0 - step, 1.0);

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double nx = detail::golden_section_max([&](double t) { return f(t, best.y); },
                                                 std::max(0.0, best.x - options.window),
                                                 std::min(1.0, best.x + options.window),
                                                 options.line_tolerance);
    const double ny = detail::golden_section_max([&](double t) { return f(nx, t); },
                                                 std::max(0.0, best.y - options.window),
                                                 std::min(1.0, best.y + options.window),
                                                 options.line_tolerance);
    const double v = f(nx, ny);
    if (!(v > best.value)) break;
    const double moved = std::max(std::abs(nx - best.x), std::abs(ny - best.y));
    best = {nx, ny, v};
    if (moved < options.step_tolerance) break;
  }
  return best;
}

}  // namespace daa
