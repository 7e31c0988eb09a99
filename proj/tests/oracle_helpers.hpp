#pragma once

// Test-only reference computations. These deliberately avoid the library's
// closed forms: the velocity profile is treated as an opaque clamped ramp,
// its saturation time is located by bisection, and the displacement comes
// from Simpson quadrature on the smooth pieces (exact for linear integrands).

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

inline double clamped_velocity(double v0, double a, double v_lo, double v_hi, double t) {
  return std::clamp(v0 + a * t, v_lo, v_hi);
}

inline double simpson(double v0, double a, double v_lo, double v_hi, double t0, double t1) {
  const double mid = 0.5 * (t0 + t1);
  return (t1 - t0) / 6.0 *
         (clamped_velocity(v0, a, v_lo, v_hi, t0) + 4.0 * clamped_velocity(v0, a, v_lo, v_hi, mid) +
          clamped_velocity(v0, a, v_lo, v_hi, t1));
}

/// Displacement over [0, t] of a robot with velocity clamp(v0 + a s, v_lo, v_hi).
inline double displacement(double v0, double a, double v_lo, double v_hi, double t) {
  if (t <= 0.0) return 0.0;
  const double raw_start = v0;
  const double raw_end = v0 + a * t;
  const bool start_inside = raw_start > v_lo && raw_start < v_hi;
  const bool end_inside = raw_end > v_lo && raw_end < v_hi;
  if (start_inside == end_inside) {
    // no saturation switch inside (0, t); the profile is a single linear or
    // constant piece
    return simpson(v0, a, v_lo, v_hi, 0.0, t);
  }
  double lo = 0.0, hi = t;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double raw = v0 + a * mid;
    if ((raw > v_lo && raw < v_hi) == start_inside)
      lo = mid;
    else
      hi = mid;
  }
  const double ts = 0.5 * (lo + hi);
  return simpson(v0, a, v_lo, v_hi, 0.0, ts) + simpson(v0, a, v_lo, v_hi, ts, t);
}

/// Trapezoid integration of a piecewise-constant acceleration profile under
/// the same clamps; used to probe the reachable set.
inline double integrate_profile(double v0, const std::vector<double>& accels, double piece_time,
                                double v_lo, double v_hi, double h, double t_end) {
  double x = 0.0;
  double v = std::clamp(v0, v_lo, v_hi);
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double dt = std::min(h, t_end - t);
    const std::size_t piece = std::min(accels.size() - 1,
                                       static_cast<std::size_t>(t / piece_time));
    const double v_next = std::clamp(v + accels[piece] * dt, v_lo, v_hi);
    x += 0.5 * (v + v_next) * dt;
    v = v_next;
    t += dt;
  }
  return x;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace oracle
