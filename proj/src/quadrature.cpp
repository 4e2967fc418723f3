#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "aatomo/geometry.hpp"

namespace aatomo::detail {

namespace {

constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};

}  // namespace

std::vector<Interval> support_pieces(cplx x, cplx dir, double lo, double hi, const std::vector<SupportDisk>& disks) {
  std::vector<Interval> out;
  if (!(hi > lo)) return out;
  if (disks.empty()) {
    out.push_back({lo, hi});
    return out;
  }
  std::vector<double> cuts{lo, hi};
  for (const auto& d : disks) {
    double t0, t1;
    if (!line_disk_interval(x, dir, d.center, d.radius, t0, t1)) continue;
    if (t0 > lo && t0 < hi) cuts.push_back(t0);
    if (t1 > lo && t1 < hi) cuts.push_back(t1);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a <= 1e-15) continue;
    const cplx mid = x + 0.5 * (a + b) * dir;
    const bool inside = std::any_of(disks.begin(), disks.end(),
                                    [&](const SupportDisk& d) { return std::abs(mid - d.center) < d.radius; });
    if (!inside) continue;
    out.push_back({a, b});
  }
  return out;
}

double simpson_line(const ScalarField& field, cplx x, cplx dir, double lo, double hi, double max_step) {
  double total = 0.0;
  for (const auto& piece : support_pieces(x, dir, lo, hi, field.support())) {
    const int n = even_panels(piece.t1 - piece.t0, max_step);
    const double h = (piece.t1 - piece.t0) / n;
    double s = field.value(x + piece.t0 * dir) + field.value(x + piece.t1 * dir);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * field.value(x + (piece.t0 + i * h) * dir);
    total += s * h / 3.0;
  }
  return total;
}

double gauss_line(const ScalarField& field, cplx x, cplx dir, double lo, double hi) {
  const auto disks = field.support();
  double total = 0.0;
  for (const auto& piece : support_pieces(x, dir, lo, hi, disks)) {
    double scale = 0.5;
    if (!disks.empty()) {
      const cplx mid = x + 0.5 * (piece.t0 + piece.t1) * dir;
      double r = 1.0;
      for (const auto& d : disks)
        if (std::abs(mid - d.center) < d.radius) r = std::min(r, d.radius);
      scale = 0.5 * r;
    }
    const int panels = std::max(1, static_cast<int>(std::ceil((piece.t1 - piece.t0) / scale - 1e-12)));
    const double w = (piece.t1 - piece.t0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = piece.t0 + (p + 0.5) * w;
      double s = 0.0;
      for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
        const double off = 0.5 * w * kGlNodes[k];
        s += kGlWeights[k] * (field.value(x + (c - off) * dir) + field.value(x + (c + off) * dir));
      }
      total += 0.5 * w * s;
    }
  }
  return total;
}

}  // namespace aatomo::detail
