#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace pvt::numeric {

/// Bisection on [lo, hi] for a sign change of f. Returns nullopt when
/// f(lo) and f(hi) have the same strict sign.
inline std::optional<double> bisect(const std::function<double(double)>& f, double lo, double hi,
                                    double x_tol = 1e-14, int max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  for (int it = 0; it < max_iter && std::abs(hi - lo) > x_tol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Central first derivative with one Richardson extrapolation.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

/// Central second derivative with one Richardson extrapolation.
inline double second_derivative(const std::function<double(double)>& f, double x, double h) {
  const double f0 = f(x);
  const double d1 = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
  const double hh = 0.5 * h;
  const double d2 = (f(x + hh) - 2.0 * f0 + f(x - hh)) / (hh * hh);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace pvt::numeric
