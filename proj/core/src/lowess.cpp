#include "pedrisk/lowess.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

double tricube(double u) {
  double t = 1.0 - u * u * u;
  return t * t * t;
}

// Window of the r indices nearest to i (contiguous in the index metric).
// On a distance tie the window extends to the left.
void nearest_window(std::size_t i, std::size_t n, std::size_t r,
                    std::size_t& lo, std::size_t& hi) {
  lo = i;
  hi = i;
  while (hi - lo + 1 < r) {
    const bool can_left = lo > 0;
    const bool can_right = hi + 1 < n;
    if (can_left && can_right) {
      if (i - (lo - 1) <= (hi + 1) - i) {
        --lo;
      } else {
        ++hi;
      }
    } else if (can_left) {
      --lo;
    } else {
      ++hi;
    }
  }
}

// Weighted local linear fit of (t_j, y_j) evaluated at t = i, solved in
// centered form. Falls back to the weighted mean when the design collapses.
double fit_at(const std::vector<double>& y, const std::vector<double>& robust,
              std::size_t i, std::size_t lo, std::size_t hi) {
  const double ti = static_cast<double>(i);
  double dmax = std::max(ti - static_cast<double>(lo),
                         static_cast<double>(hi) - ti);
  if (dmax <= 0.0) dmax = 1.0;

  double sw = 0.0, st = 0.0, sy = 0.0;
  std::vector<double> w(hi - lo + 1, 0.0);
  for (std::size_t j = lo; j <= hi; ++j) {
    double u = std::abs(static_cast<double>(j) - ti) / dmax;
    double wj = (u < 1.0 ? tricube(u) : 0.0) * robust[j];
    w[j - lo] = wj;
    sw += wj;
    st += wj * static_cast<double>(j);
    sy += wj * y[j];
  }
  if (sw <= 0.0) return y[i];
  const double tbar = st / sw;
  const double ybar = sy / sw;
  double stt = 0.0, sty = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    double dt = static_cast<double>(j) - tbar;
    stt += w[j - lo] * dt * dt;
    sty += w[j - lo] * dt * (y[j] - ybar);
  }
  const double slope = (stt > 1e-12) ? sty / stt : 0.0;
  return ybar + slope * (ti - tbar);
}

}  // namespace

std::vector<double> lowess_smooth_series(const std::vector<double>& values,
                                         double span, int robust_iters) {
  const std::size_t n = values.size();
  if (n < 3) {
    throw DataError("lowess: series too short (" + std::to_string(n) +
                    " points, need >= 3)");
  }
  if (!(span > 0.0) || span > 1.0) {
    throw DataError("lowess: span must lie in (0, 1]");
  }
  if (span * static_cast<double>(n) < 2.0) {
    throw DataError("lowess: span covers fewer than 2 neighbor points");
  }
  if (robust_iters < 0) {
    throw DataError("lowess: robustness iteration count must be >= 0");
  }

  const std::size_t r = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::floor(span * static_cast<double>(n))));

  std::vector<double> robust(n, 1.0);
  std::vector<double> fitted(n, 0.0);
  for (int pass = 0; pass <= robust_iters; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t lo, hi;
      nearest_window(i, n, r, lo, hi);
      fitted[i] = fit_at(values, robust, i, lo, hi);
    }
    if (pass == robust_iters) break;

    // Bisquare robustness weights from the residual scale.
    std::vector<double> absres(n);
    for (std::size_t i = 0; i < n; ++i) absres[i] = std::abs(values[i] - fitted[i]);
    std::vector<double> sorted = absres;
    std::sort(sorted.begin(), sorted.end());
    double med = (n % 2 == 1) ? sorted[n / 2]
                              : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double cutoff = 6.0 * med;
    if (cutoff < 1e-12) break;  // already an essentially exact fit
    for (std::size_t i = 0; i < n; ++i) {
      double u = absres[i] / cutoff;
      robust[i] = (u < 1.0) ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
  }
  return fitted;
}

PedestrianTrack lowess_smooth(const PedestrianTrack& track, double span,
                              int robust_iters) {
  std::vector<double> xs(track.points.size()), ys(track.points.size());
  for (std::size_t k = 0; k < track.points.size(); ++k) {
    xs[k] = track.points[k].x;
    ys[k] = track.points[k].y;
  }
  std::vector<double> sx = lowess_smooth_series(xs, span, robust_iters);
  std::vector<double> sy = lowess_smooth_series(ys, span, robust_iters);

  PedestrianTrack out;
  out.id = track.id;
  out.frame_rate = track.frame_rate;
  out.points.resize(track.points.size());
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    out.points[k] = {sx[k], sy[k]};
  }
  return out;
}

}  // namespace pedrisk
