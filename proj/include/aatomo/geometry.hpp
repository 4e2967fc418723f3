#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "aatomo/common.hpp"

namespace aatomo {

/// The unit disk with a uniform boundary grid and an interior mask margin.
struct DiskDomain {
  int n_boundary = 512;
  double mask_margin = 0.05;

  DiskDomain() = default;
  DiskDomain(int n_boundary, double mask_margin);

  double boundary_angle(int j) const { return kTwoPi * j / n_boundary; }
  cplx boundary_node(int j) const { return unit(boundary_angle(j)); }
  double mask_radius() const { return 1.0 - mask_margin; }
};

struct ChordTimes {
  double tau_minus = 0.0;
  double tau_plus = 0.0;
};

struct ChordEndpoints {
  cplx minus;
  cplx plus;
};

/// A chord through x in direction (cos phi, sin phi).
struct Chord {
  cplx base;
  double phi = 0.0;
  double tau_minus = 0.0;
  double tau_plus = 0.0;

  cplx direction() const { return unit(phi); }
  cplx entry() const { return base - tau_minus * direction(); }
  cplx exit() const { return base + tau_plus * direction(); }
  double length() const { return tau_minus + tau_plus; }
};

/// Distances from x to the unit circle along -theta and +theta.
/// Throws DomainError when |x| > 1 + 1e-12.
ChordTimes chord_times(cplx x, double phi);
ChordEndpoints chord_endpoints(cplx x, double phi);
Chord make_chord(cplx x, double phi);

/// Interval [t0, t1] of x + t*theta inside the disk |y - center| <= radius.
/// Returns false if the line misses the disk.
bool line_disk_interval(cplx x, cplx theta, cplx center, double radius, double& t0, double& t1);

/// Square lattice of the given pitch covering the closed unit disk. A node is
/// active when |z| < radius; fields store values for every lattice node and
/// flag the ones that carry data.
class InteriorGrid {
 public:
  InteriorGrid(double pitch, double radius);

  /// Grid on the same lattice with the activity radius grown by `nodes`
  /// pitches, capped strictly inside the unit circle.
  InteriorGrid widened(int nodes, double cap = 0.995) const;

  double pitch() const { return pitch_; }
  double radius() const { return radius_; }
  int half_width() const { return half_; }
  int side() const { return 2 * half_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(side()) * side(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j + half_) * side() + static_cast<std::size_t>(i + half_);
  }
  int column(std::size_t idx) const { return static_cast<int>(idx % side()) - half_; }
  int row(std::size_t idx) const { return static_cast<int>(idx / side()) - half_; }
  cplx point(std::size_t idx) const { return {column(idx) * pitch_, row(idx) * pitch_}; }
  bool in_lattice(int i, int j) const { return i >= -half_ && i <= half_ && j >= -half_ && j <= half_; }
  bool active(std::size_t idx) const { return std::abs(point(idx)) < radius_; }

  /// Active node indices in lattice order.
  const std::vector<std::size_t>& nodes() const { return nodes_; }

  bool same_lattice(const InteriorGrid& other) const {
    return pitch_ == other.pitch_ && half_ == other.half_;
  }

 private:
  double pitch_;
  double radius_;
  int half_;
  std::vector<std::size_t> nodes_;
};

using GridPtr = std::shared_ptr<const InteriorGrid>;

}  // namespace aatomo
