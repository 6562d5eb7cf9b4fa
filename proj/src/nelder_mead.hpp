#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace recal::detail {

using Point2 = std::array<double, 2>;

struct NmResult {
  Point2 x{};
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead in 2D with box constraints enforced by projection.
/// Stops when the value spread across the simplex falls below ftol.
inline NmResult nelder_mead_2d(const std::function<double(const Point2&)>& f,
                               Point2 x0, double step, double ftol, int max_iter,
                               Point2 lo, Point2 hi) {
  auto clamp = [&](Point2 p) {
    p[0] = std::clamp(p[0], lo[0], hi[0]);
    p[1] = std::clamp(p[1], lo[1], hi[1]);
    return p;
  };

  std::array<Point2, 3> xs{clamp(x0), clamp({x0[0] + step, x0[1]}),
                           clamp({x0[0], x0[1] + step})};
  // Degenerate start on a box edge: push the offset inward instead.
  if (xs[1] == xs[0]) xs[1] = clamp({x0[0] - step, x0[1]});
  if (xs[2] == xs[0]) xs[2] = clamp({x0[0], x0[1] - step});
  std::array<double, 3> fs{f(xs[0]), f(xs[1]), f(xs[2])};

  NmResult res;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], mid = order[1], worst = order[2];

    if (std::isfinite(fs[best]) && fs[worst] - fs[best] <= ftol) {
      res.converged = true;
      break;
    }

    const Point2 centroid{0.5 * (xs[best][0] + xs[mid][0]),
                          0.5 * (xs[best][1] + xs[mid][1])};
    auto along = [&](double coef) {
      return clamp({centroid[0] + coef * (centroid[0] - xs[worst][0]),
                    centroid[1] + coef * (centroid[1] - xs[worst][1])});
    };

    const Point2 xr = along(1.0);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Point2 xe = along(2.0);
      const double fe = f(xe);
      if (fe < fr) { xs[worst] = xe; fs[worst] = fe; }
      else         { xs[worst] = xr; fs[worst] = fr; }
    } else if (fr < fs[mid]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const Point2 xc = along(fr < fs[worst] ? 0.5 : -0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {  // shrink toward the best vertex
        for (int i : {mid, worst}) {
          xs[i] = clamp({0.5 * (xs[i][0] + xs[best][0]), 0.5 * (xs[i][1] + xs[best][1])});
          fs[i] = f(xs[i]);
        }
      }
    }
  }

  const int best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  res.x = xs[best];
  res.fx = fs[best];
  return res;
}

}  // namespace recal::detail
