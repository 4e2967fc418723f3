#pragma once

#include <cstdint>
#include <string>

#include "aatomo/aanalytic.hpp"
#include "aatomo/attenuation.hpp"
#include "aatomo/transport.hpp"

namespace aatomo {

/// Every tunable of a run. Read from and written to flat key = value text.
struct RunConfig {
  int n_boundary = 512;
  int n_angles = 256;
  int n_mode = 64;
  int m_seq = 32;
  int m_max = 8;
  int k_h = 24;
  double pitch = 1.0 / 128.0;
  double mask_margin = 0.05;
  double ray_step = 1.0 / 512.0;
  double tol_range = 1e-4;
  double tol_h = 1e-4;
  double tol_g0 = 5e-3;
  std::uint64_t seed = 1;
  std::string scenario = "bump_pair";
  /// "canonical" (scale * (1 - |z|^2)^3) or "none".
  std::string attenuation = "canonical";
  double attenuation_scale = 0.5;
  int radon_samples = 2049;
  int hilbert_pad = 4;
  double bc_kappa = 2.0;
  double bc_c0 = 40.0;
  /// Radial sampling for the boundary limit of u_0: r0, r0 - dr, r0 - 2 dr.
  double g0_radius = 0.95;
  double g0_spacing = 0.05;
  int g0_nodes = 128;
  double g0_step = 2e-3;
  double conjugacy_pitch = 1.0 / 32.0;

  void validate() const;
  TransportOptions transport() const;
  HOptions h_options() const;
  BcOptions bc_options() const;
  bool attenuated() const { return attenuation != "none"; }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& cfg);
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace aatomo
