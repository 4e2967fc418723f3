#include "aatomo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aatomo {

DiskDomain::DiskDomain(int n_boundary_, double mask_margin_)
    : n_boundary(n_boundary_), mask_margin(mask_margin_) {
  if (n_boundary < 8 || n_boundary % 2 != 0)
    throw ConfigError("boundary node count must be even and >= 8, got " + std::to_string(n_boundary));
  if (!(mask_margin > 0.0 && mask_margin < 0.5))
    throw ConfigError("mask margin must lie in (0, 0.5)");
}

ChordTimes chord_times(cplx x, double phi) {
  const double r2 = std::norm(x);
  if (r2 > (1.0 + 1e-12) * (1.0 + 1e-12))
    throw DomainError("chord base point outside the unit disk: |x| = " + std::to_string(std::sqrt(r2)));
  const double p = dot(x, unit(phi));
  const double q = std::max(0.0, 1.0 - r2);
  const double root = std::sqrt(p * p + q);
  // Roots of t^2 + 2pt - q = 0, arranged to avoid cancellation.
  ChordTimes out;
  if (p >= 0.0) {
    out.tau_minus = p + root;
    out.tau_plus = out.tau_minus > 0.0 ? q / out.tau_minus : 0.0;
  } else {
    out.tau_plus = root - p;
    out.tau_minus = q / out.tau_plus;
  }
  return out;
}

ChordEndpoints chord_endpoints(cplx x, double phi) {
  const ChordTimes t = chord_times(x, phi);
  const cplx theta = unit(phi);
  return {x - t.tau_minus * theta, x + t.tau_plus * theta};
}

Chord make_chord(cplx x, double phi) {
  const ChordTimes t = chord_times(x, phi);
  return {x, phi, t.tau_minus, t.tau_plus};
}

bool line_disk_interval(cplx x, cplx theta, cplx center, double radius, double& t0, double& t1) {
  const cplx d = x - center;
  const double p = dot(d, theta);
  const double disc = p * p - (std::norm(d) - radius * radius);
  if (disc <= 0.0) return false;
  const double root = std::sqrt(disc);
  t0 = -p - root;
  t1 = -p + root;
  return true;
}

InteriorGrid::InteriorGrid(double pitch, double radius) : pitch_(pitch), radius_(radius) {
  if (!(pitch > 0.0)) throw ConfigError("grid pitch must be positive");
  if (!(radius > 0.0 && radius < 1.0)) throw ConfigError("grid radius must lie in (0, 1)");
  half_ = static_cast<int>(std::ceil(1.0 / pitch_ - 1e-9));
  for (std::size_t idx = 0; idx < size(); ++idx)
    if (active(idx)) nodes_.push_back(idx);
}

InteriorGrid InteriorGrid::widened(int nodes, double cap) const {
  return InteriorGrid(pitch_, std::min(cap, radius_ + nodes * pitch_));
}

}  // namespace aatomo
