#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aatomo/config.hpp"
#include "aatomo/fields.hpp"

namespace aatomo {

/// Ground truth for a simulation run. Doppler scenarios set F; X-ray ones set f.
/// Confusion scenarios set psi, F = -grad psi and f = a psi.
struct Scenario {
  std::string name;
  SinogramTag tag = SinogramTag::doppler;
  VectorFieldPtr F;
  ScalarFieldPtr f;
  ScalarFieldPtr psi;
  ScalarFieldPtr a;
};

std::vector<std::string> scenario_names();

/// Attenuation named by the config, or null for "none".
ScalarFieldPtr make_attenuation(const RunConfig& cfg);

/// Sum of two or three truncated-Gaussian bump vector fields supported in |z| < 0.85.
VectorFieldPtr random_bump_field(std::uint64_t seed);
/// Random polynomial bump potential supported in |z| < 0.85.
ScalarFieldPtr random_potential(std::uint64_t seed);

Scenario make_scenario(const RunConfig& cfg);
Scenario make_scenario(const std::string& name, const RunConfig& cfg);

}  // namespace aatomo
