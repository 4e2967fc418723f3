#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "aatomo/common.hpp"
#include "aatomo/fields.hpp"

namespace aatomo::detail {

struct Interval {
  double t0, t1;
};

/// Pieces of [lo, hi] on which the line x + t*dir may meet the support. Every
/// disk boundary crossing is a breakpoint, so each piece has a smooth integrand.
std::vector<Interval> support_pieces(cplx x, cplx dir, double lo, double hi, const std::vector<SupportDisk>& disks);

/// Composite Simpson of field along x + t*dir over [lo, hi], clipped to its support.
double simpson_line(const ScalarField& field, cplx x, cplx dir, double lo, double hi, double max_step);

/// Composite 8-point Gauss-Legendre along x + t*dir over [lo, hi], clipped to the
/// support, with panels no longer than half the radius of the disk being crossed.
double gauss_line(const ScalarField& field, cplx x, cplx dir, double lo, double hi);

inline int even_panels(double length, double max_step) {
  int n = static_cast<int>(std::ceil(length / max_step - 1e-12));
  n = std::max(n, 2);
  return n + (n & 1);
}

}  // namespace aatomo::detail
