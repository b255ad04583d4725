#include "pvt/cubic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "pvt/error.hpp"

namespace pvt {
namespace {

using cplx = std::complex<double>;

double polish(const SteadyCubic& f, double x) {
  double fx = std::abs(f(x));
  for (int it = 0; it < 4 && fx > 0.0; ++it) {
    const double d = f.derivative(x);
    if (d == 0.0) break;
    const double xn = x - f(x) / d;
    const double fn = std::abs(f(xn));
    if (!(fn < fx)) break;
    x = xn;
    fx = fn;
  }
  return x;
}

// Zero of f' closest to `near`; falls back to `near` when f' has no real zero.
double derivative_root_near(const SteadyCubic& f, double near) {
  const double qa = 3.0 * f.c[3], qb = 2.0 * f.c[2], qc = f.c[1];
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return -qb / (2.0 * qa);
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  std::array<double, 2> cand{q / qa, q != 0.0 ? qc / q : q / qa};
  return std::abs(cand[0] - near) <= std::abs(cand[1] - near) ? cand[0] : cand[1];
}

}  // namespace

CubicRoots solve_cubic(const SteadyCubic& f, double residual_tol) {
  const double c3 = f.c[3];
  if (c3 == 0.0 || !std::isfinite(c3)) {
    throw Error(ErrorKind::InvalidArgument, "solve_cubic needs a nonzero leading coefficient");
  }
  CubicRoots out;
  {
    const double a = c3, b = f.c[2], c = f.c[1], d = f.c[0];
    out.discriminant = 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c -
                       27.0 * a * a * d * d;
  }

  // Monic form x^3 + a x^2 + b x + c, depressed by x = t - a/3.
  const double a = f.c[2] / c3, b = f.c[1] / c3, c = f.c[0] / c3;
  const double shift = a / 3.0;
  const double P = b - a * a / 3.0;
  const double Q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double D = 0.25 * Q * Q + P * P * P / 27.0;

  std::array<cplx, 3> z;
  if (D < 0.0) {
    const double m = 2.0 * std::sqrt(-P / 3.0);
    const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      z[k] = cplx(polish(f, m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift), 0.0);
    }
  } else {
    const double sq = std::sqrt(D);
    const double u = std::cbrt(-0.5 * Q + sq);
    const double v = std::cbrt(-0.5 * Q - sq);
    const double r = polish(f, u + v - shift);
    z[0] = cplx(r, 0.0);
    // Deflate: x^3 + a x^2 + b x + c = (x - r)(x^2 + q1 x + q0).
    const double q1 = a + r;
    const double q0 = b + r * q1;
    const double h = 0.25 * q1 * q1 - q0;
    if (h >= 0.0) {
      const double s = std::sqrt(h);
      z[1] = cplx(polish(f, -0.5 * q1 - s), 0.0);
      z[2] = cplx(polish(f, -0.5 * q1 + s), 0.0);
    } else {
      const double s = std::sqrt(-h);
      z[1] = cplx(-0.5 * q1, -s);
      z[2] = cplx(-0.5 * q1, s);
    }
  }

  const double scale = std::abs(c3);
  const double tol = residual_tol / scale;

  // Triple cluster: |c3| * max|z - x_t|^3 <= residual_tol.
  const double x_t = -shift;
  const double r3 = std::cbrt(tol);
  if (std::all_of(z.begin(), z.end(), [&](const cplx& w) { return std::abs(w - x_t) <= r3; })) {
    out.roots.push_back({x_t, 3});
    return out;
  }

  // Closest pair; merged when |f| at the midpoint is within tolerance.
  std::array<bool, 3> used{false, false, false};
  int bi = 0, bj = 1;
  double best = std::abs(z[0] - z[1]);
  for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}}) {
    const double dd = std::abs(z[i] - z[j]);
    if (dd < best) { best = dd; bi = i; bj = j; }
  }
  const int other = 3 - bi - bj;
  const double mid = 0.5 * (z[bi].real() + z[bj].real());
  const double half = 0.5 * best;
  if (half * half * std::abs(mid - z[other]) <= tol) {
    out.roots.push_back({derivative_root_near(f, mid), 2});
    used[bi] = used[bj] = true;
  }
  for (int k = 0; k < 3; ++k) {
    if (!used[k] && z[k].imag() == 0.0) out.roots.push_back({z[k].real(), 1});
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const CubicRoot& l, const CubicRoot& r) { return l.value < r.value; });
  return out;
}

}  // namespace pvt
