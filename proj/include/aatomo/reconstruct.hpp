#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aatomo/attenuation.hpp"
#include "aatomo/config.hpp"
#include "aatomo/fields.hpp"
#include "aatomo/transport.hpp"

namespace aatomo {

/// Ordered key/value diagnostics.
struct Metrics {
  std::vector<std::pair<std::string, double>> entries;
  void set(const std::string& key, double value);
  double get(const std::string& key) const;
  bool has(const std::string& key) const;
  std::string str() const;
};

/// Range-condition residuals of a sinogram and the verdict of each gate.
struct RangeReport {
  bool attenuated = false;
  double residual_even = 0.0;
  double residual_odd = 0.0;
  std::vector<double> residual_aug;  // m = 1 .. m_max, non-attenuated only
  double g0_defect = 0.0;            // attenuated only
  std::vector<std::string> failed;   // names of failed conditions
  bool pass() const { return failed.empty(); }
  Metrics metrics() const;
};

RangeReport check_range_nonatt(const Sinogram& g, const RunConfig& cfg);
RangeReport check_range_att(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg);

/// Residual of the companion zero-tensor sequence <g_0, g_-2, g_-4, ...>.
double zero_tensor_residual(const Sinogram& g, const RunConfig& cfg);

struct ReconstructionReport {
  bool accepted = false;
  std::string rejection;
  RangeReport range;
  VectorFieldGrid F;
  ScalarFieldGrid u0;
  Metrics metrics;
};

/// Vector field from non-attenuated Doppler data, up to a gradient.
ReconstructionReport reconstruct_nonatt(const Sinogram& g, const RunConfig& cfg);
/// Vector field from attenuated Doppler data.
ReconstructionReport reconstruct_att(const Sinogram& g, const ScalarFieldPtr& a, const RunConfig& cfg);
/// Same, reusing a prepared integrating factor (its direction grid must match g).
ReconstructionReport reconstruct_att(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg);

/// max over boundary nodes of |u_0 extrapolated to the circle - g_0|, with
/// u_0 = -2 Re d u_-1 / a sampled on three radii.
double g0_limit_defect(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg);

/// Source f = a psi paired with the field -grad psi that has the same attenuated data.
struct ConfusionPair {
  ScalarFieldPtr f;
  VectorFieldPtr F;
};

/// Requires f in the factored form a * psi; returns F = -grad psi.
ConfusionPair confusion_field(const ScalarFieldPtr& psi, const ScalarFieldPtr& a);

/// Relative L2 norm of curl(F_a - F_b) over nodes where both fields and the
/// difference stencils exist; absolute when curl F_b vanishes.
double curl_defect(const VectorFieldGrid& F_a, const VectorFieldGrid& F_b);

/// Relative L2 error of F against truth over shared valid nodes with |z| <= radius.
double relative_l2_error(const VectorFieldGrid& F, const VectorFieldGrid& truth, double radius = 1.0);

void write_metrics(const std::string& path, const Metrics& m);

}  // namespace aatomo
