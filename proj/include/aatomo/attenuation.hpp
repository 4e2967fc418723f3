#pragma once

#include <span>
#include <vector>

#include "aatomo/aanalytic.hpp"
#include "aatomo/common.hpp"
#include "aatomo/fields.hpp"
#include "aatomo/spectral.hpp"
#include "aatomo/transport.hpp"

namespace aatomo {

struct HOptions {
  int n_angles = 256;
  double radon_half_width = 2.0;
  int radon_samples = 2049;
  int hilbert_pad = 4;
  double ray_step = 1.0 / 512.0;
  /// Evaluate at s = -z . theta_perp instead of z . theta_perp (diagnostic only).
  bool flip_perp = false;
};

/// h(z, theta_k) = Da(z, theta_k) - (1/2) [Ra(s, theta_k) - i (H Ra)(s, theta_k)], s = z . theta_perp,
/// theta_perp = (-sin phi, cos phi), on the directions phi_k = 2 pi k / N_phi.
class IntegratingFactor {
 public:
  IntegratingFactor(ScalarFieldPtr a, HOptions opt = {});

  cplx h(cplx z, int k) const;
  /// All N_phi directions at z.
  void h_all(cplx z, std::span<cplx> out) const;

  const ScalarFieldPtr& attenuation() const { return a_; }
  const HOptions& options() const { return opt_; }
  int n_angles() const { return opt_.n_angles; }
  const RadonTable& radon() const { return radon_; }

 private:
  ScalarFieldPtr a_;
  HOptions opt_;
  RadonTable radon_;
  std::vector<double> hilbert_;  // same layout as the Radon table
};

/// h on a list of points, point-major over the N_phi directions.
struct HField {
  std::vector<cplx> points;
  int n_angles = 0;
  std::vector<cplx> values;
  cplx at(std::size_t p, int k) const { return values[p * n_angles + k]; }
};

HField compute_h(const IntegratingFactor& h, std::span<const cplx> points);

/// Modes 0..K_h of exp(-h) (alpha) and exp(h) (beta) at one point, plus the
/// mass sum_{k=1..K_h} |mode -k| of each exponential and the discarded mass above K_h.
struct PointModes {
  std::vector<cplx> alpha, beta;
  double negative_alpha = 0.0, negative_beta = 0.0, tail = 0.0;
};

PointModes exp_h_modes(std::span<const cplx> h_row, int k_h);
PointModes exp_h_modes_at(const IntegratingFactor& h, cplx z, int k_h);

/// alpha_k, beta_k on a grid.
struct HModeField {
  GridPtr grid;
  int k_h = 0;
  std::vector<cplx> alpha, beta;  // node-major, k_h + 1 per node
  std::vector<std::uint8_t> valid;
  double negative_alpha = 0.0, negative_beta = 0.0, tail = 0.0;

  std::size_t offset(std::size_t idx, int k) const { return idx * static_cast<std::size_t>(k_h + 1) + k; }
  bool ok(std::size_t idx) const { return valid[idx] != 0; }
  ComplexFieldGrid alpha_plane(int k) const;
  ComplexFieldGrid beta_plane(int k) const;
};

HModeField exp_h_modes(const IntegratingFactor& h, const GridPtr& grid, int k_h);
/// Grid-free variant for an explicit HField; one PointModes per point.
std::vector<PointModes> exp_h_modes(const HField& h, int k_h);

/// Wirtinger derivatives of every alpha_k and beta_k by fourth-order differences.
struct HModeDerivatives {
  GridPtr grid;
  int k_h = 0;
  std::vector<cplx> alpha_dbar, alpha_d, beta_dbar, beta_d;
  std::vector<std::uint8_t> valid;
  bool ok(std::size_t idx) const { return valid[idx] != 0; }
};

HModeDerivatives differentiate_modes(const HModeField& modes);

struct HIdentityReport {
  double beta0 = 0.0;          // |dbar beta_0|
  double beta1 = 0.0;          // |dbar beta_1 + a beta_0|
  double beta_recurrence = 0.0;   // |dbar beta_{k+2} + d beta_k + a beta_{k+1}|
  double alpha0 = 0.0;         // |dbar alpha_0|
  double alpha1 = 0.0;         // |dbar alpha_1 - a alpha_0|
  double alpha_recurrence = 0.0;  // |dbar alpha_{k+2} + d alpha_k - a alpha_{k+1}|
  double cauchy_product = 0.0;    // |sum_m alpha_m beta_{k-m} - delta_k|, k <= 5
  double max_recurrence() const;
};

HIdentityReport verify_h_identities(const HModeField& modes, const ScalarField& a);

/// max |(h(z + eps theta, theta) - h(z - eps theta, theta)) / (2 eps) + a(z)| over the given rays.
double ray_derivative_defect(const IntegratingFactor& h, std::span<const cplx> points, std::span<const int> directions,
                             double eps = 1e-4);

enum class ConvDirection { u_from_v, v_from_u };

/// out[s] = sum_j c_j in[s + j], c = beta (u_from_v) or alpha (v_from_u); the
/// input tail is in plain order (mode -1, -2, ...). The sum stops at the data edge.
TailField mode_convolution(const TailField& tail, const HModeField& modes, ConvDirection dir, int n_out = -1);
/// Same, also propagating d and dbar through the product rule.
TailField mode_convolution(const TailField& tail, const HModeField& modes, const HModeDerivatives& dmodes,
                           ConvDirection dir, int n_out = -1);

/// Modes of exp(-h) g on the sinogram grid; h evaluated at the boundary nodes.
ModeBank weighted_data_modes(const Sinogram& g, const IntegratingFactor& h, int n_mode);

void write_hmode_field(const std::string& path, const HModeField& modes);

}  // namespace aatomo
