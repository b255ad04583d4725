#pragma once

#include <vector>

#include "pvt/model.hpp"

namespace pvt {

struct CubicRoot {
  double value = 0.0;
  int multiplicity = 1;
};

struct CubicRoots {
  std::vector<CubicRoot> roots;  ///< real roots, ascending
  double discriminant = 0.0;     ///< classical cubic discriminant
};

/// Real roots of c0 + c1 x + c2 x^2 + c3 x^3 (c3 != 0).
///
/// Closed form (trigonometric for three real roots, Cardano otherwise),
/// followed by Newton polishing. Roots that are indistinguishable at the
/// residual tolerance are reported once with their multiplicity: a cluster is
/// merged when the polynomial residual at the merged point is <= residual_tol,
/// and the merged point is placed at the zero of f'' (triple) or f' (double),
/// which are well conditioned where the roots themselves are not.
CubicRoots solve_cubic(const SteadyCubic& f, double residual_tol = 1e-10);

}  // namespace pvt
