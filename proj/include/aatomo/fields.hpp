#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aatomo/common.hpp"
#include "aatomo/geometry.hpp"

namespace aatomo {

/// Disk outside of which a generator vanishes identically.
struct SupportDisk {
  cplx center;
  double radius = 0.0;
};

/// Closed-form real scalar field on the plane. Gradients are returned packed
/// as d/dx1 + i d/dx2.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(cplx z) const = 0;
  virtual cplx gradient(cplx z) const = 0;
  /// Empty when the field has no known compact support.
  virtual std::vector<SupportDisk> support() const { return {}; }
  virtual std::string describe() const = 0;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

/// Closed-form real vector field, packed as F1 + i F2.
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual cplx value(cplx z) const = 0;
  virtual std::vector<SupportDisk> support() const { return {}; }
  virtual std::string describe() const = 0;
};

using VectorFieldPtr = std::shared_ptr<const VectorField>;

enum class BumpKind { polynomial, gaussian_truncated };

/// amplitude * max(0, 1 - |z-c|^2/w^2)^3, optionally times exp(-|z-c|^2 / (2 (w/3)^2)).
/// Throws DomainError when the support leaves the closed unit disk.
ScalarFieldPtr make_bump(cplx center, double width, double amplitude, BumpKind kind);

/// scale * (1 - |z|^2)^3: positive inside the disk, C^2 and vanishing on the circle.
ScalarFieldPtr make_canonical_attenuation(double scale);

ScalarFieldPtr make_constant(double c);
ScalarFieldPtr make_sum(std::vector<ScalarFieldPtr> terms);
ScalarFieldPtr make_product(ScalarFieldPtr a, ScalarFieldPtr b);
ScalarFieldPtr make_function(std::function<double(cplx)> value, std::function<cplx(cplx)> gradient,
                             std::string description);

/// F = bump(z) * (v1, v2).
VectorFieldPtr make_bump_vector(ScalarFieldPtr bump, cplx direction);
/// F = scale * grad(psi).
VectorFieldPtr make_gradient_field(ScalarFieldPtr psi, double scale = 1.0);
/// F = scale * (-d2 psi, d1 psi), divergence free.
VectorFieldPtr make_rotated_gradient_field(ScalarFieldPtr psi, double scale = 1.0);
VectorFieldPtr make_vector_sum(std::vector<VectorFieldPtr> terms);
VectorFieldPtr make_vector_function(std::function<cplx(cplx)> value, std::string description);

/// Values on the lattice of an InteriorGrid; only nodes with valid != 0 carry data.
template <class T>
struct GridField {
  GridPtr grid;
  std::vector<T> values;
  std::vector<std::uint8_t> valid;

  GridField() = default;
  explicit GridField(GridPtr g) : grid(std::move(g)), values(grid->size(), T{}), valid(grid->size(), 0) {}

  bool ok(std::size_t idx) const { return valid[idx] != 0; }
  void set(std::size_t idx, T v) {
    values[idx] = v;
    valid[idx] = 1;
  }
  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += v;
    return n;
  }
};

using ComplexFieldGrid = GridField<cplx>;

/// Sampled real field; keeps its generator when it came from one.
struct ScalarFieldGrid : GridField<double> {
  ScalarFieldPtr source;

  ScalarFieldGrid() = default;
  explicit ScalarFieldGrid(GridPtr g) : GridField<double>(std::move(g)) {}
};

struct VectorFieldGrid {
  GridPtr grid;
  std::vector<double> f1, f2;
  std::vector<std::uint8_t> valid;

  VectorFieldGrid() = default;
  explicit VectorFieldGrid(GridPtr g)
      : grid(std::move(g)), f1(grid->size(), 0.0), f2(grid->size(), 0.0), valid(grid->size(), 0) {}
  bool ok(std::size_t idx) const { return valid[idx] != 0; }
  void set(std::size_t idx, cplx v) {
    f1[idx] = v.real();
    f2[idx] = v.imag();
    valid[idx] = 1;
  }
  cplx at(std::size_t idx) const { return {f1[idx], f2[idx]}; }
};

/// f1 = (F1 + i F2) / 2.
struct ComplexSourceField {
  ComplexFieldGrid f1;
};

ComplexSourceField to_complex_source(const VectorFieldGrid& field);
VectorFieldGrid from_complex_source(const ComplexSourceField& source);

ScalarFieldGrid sample(const ScalarFieldPtr& field, GridPtr grid);
VectorFieldGrid sample(const VectorField& field, GridPtr grid);
ComplexFieldGrid sample_complex(const std::function<cplx(cplx)>& field, GridPtr grid);

/// Field evaluator backed by the generator, or by bilinear interpolation of
/// the samples when the grid has none.
ScalarFieldPtr as_field(const ScalarFieldGrid& grid);

ScalarFieldGrid bump(cplx center, double width, double amplitude, BumpKind kind, GridPtr grid);

struct WirtingerResult {
  ComplexFieldGrid dbar;
  ComplexFieldGrid d;
  std::size_t dropped = 0;
  std::string reason;
};

/// dbar = (d1 + i d2)/2 and d = (d1 - i d2)/2. Uses the generator's exact
/// gradient when present, else fourth-order centred differences; nodes whose
/// stencil leaves the valid set are dropped.
WirtingerResult wirtinger(const ScalarFieldGrid& field);
WirtingerResult wirtinger(const ComplexFieldGrid& field);

/// Harmonic extension of boundary samples on the uniform circle grid,
/// u(r e^{i beta}) = sum_n c_n r^{|n|} e^{i n beta}, |n| <= N_b/2.
class PoissonExtension {
 public:
  explicit PoissonExtension(std::span<const cplx> boundary_values);

  cplx value(cplx z) const;
  cplx dbar(cplx z) const;
  cplx d(cplx z) const;
  int band() const { return band_; }

  ComplexFieldGrid sample(GridPtr grid) const;

 private:
  int band_;
  std::vector<cplx> positive_;  // c_0 .. c_band
  std::vector<cplx> negative_;  // c_{-1} .. c_{-band}
};

PoissonExtension poisson_extension(std::span<const cplx> boundary_values);

void write_scalar_csv(const std::string& path, const ScalarFieldGrid& field);
void write_vector_csv(const std::string& path, const VectorFieldGrid& field);
void write_complex_csv(const std::string& path, const ComplexFieldGrid& field);
VectorFieldGrid read_vector_csv(const std::string& path, GridPtr grid);

}  // namespace aatomo
