#pragma once

#include <string>
#include <vector>

#include "aatomo/common.hpp"
#include "aatomo/fields.hpp"

namespace aatomo {

enum class SinogramTag { xray, doppler };

/// Boundary data g(zeta_j, theta_k) with zero inflow: rows are boundary nodes
/// beta_j = 2 pi j / N_b, columns are directions phi_k = 2 pi k / N_phi.
struct Sinogram {
  int n_boundary = 0;
  int n_angles = 0;
  SinogramTag tag = SinogramTag::doppler;
  std::string attenuation = "zero";
  double ray_step = 1.0 / 512.0;
  std::vector<double> values;

  Sinogram() = default;
  Sinogram(int n_boundary, int n_angles, SinogramTag tag);

  double beta(int j) const { return kTwoPi * j / n_boundary; }
  double phi(int k) const { return kTwoPi * k / n_angles; }
  double& at(int j, int k) { return values[static_cast<std::size_t>(j) * n_angles + k]; }
  double at(int j, int k) const { return values[static_cast<std::size_t>(j) * n_angles + k]; }
};

struct TransportOptions {
  double ray_step = 1.0 / 512.0;
  /// |theta . nu| below this counts as tangential and yields 0.
  double tangent_tol = 1e-10;
};

/// Integral of a from x to the boundary along theta = (cos phi, sin phi).
/// A null attenuation is the zero field.
double divergence_beam(const ScalarField* a, cplx x, double phi, double ray_step = 1.0 / 512.0);

/// Attenuated X-ray data of f (a may be null).
Sinogram forward_xray(const ScalarField& f, const ScalarField* a, int n_boundary, int n_angles,
                      const TransportOptions& opt = {});

/// Attenuated Doppler data of F (a may be null).
Sinogram forward_doppler(const VectorField& F, const ScalarField* a, int n_boundary, int n_angles,
                         const TransportOptions& opt = {});

/// Weighted integral backward from the boundary point zeta along -theta over
/// the full chord, with weight exp(-int_0^t a). The integrand receives (y, theta).
double attenuated_ray(const std::function<double(cplx)>& integrand, const std::vector<SupportDisk>& support,
                      const ScalarField* a, cplx zeta, double phi, double ray_step);

/// Writes CSV (beta,phi,value) plus a JSON sidecar at path + ".meta".
void write_sinogram(const std::string& path, const Sinogram& g);
Sinogram read_sinogram(const std::string& path);

std::string to_string(SinogramTag tag);

}  // namespace aatomo
