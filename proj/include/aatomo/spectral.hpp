#pragma once

#include <span>
#include <string>
#include <vector>

#include "aatomo/common.hpp"
#include "aatomo/fields.hpp"
#include "aatomo/transport.hpp"

namespace aatomo {

/// In-place unnormalized DFT: forward uses exp(-2 pi i jk/n), inverse exp(+2 pi i jk/n).
void fft(std::span<cplx> data, bool inverse = false);

/// Trigonometric interpolation of periodic samples onto factor times as many
/// equispaced points (factor a power of two), by spectral zero padding.
std::vector<cplx> upsample_periodic(std::span<const cplx> samples, int factor);

/// Periodic samples shifted by a fraction of one sample spacing.
std::vector<cplx> shift_periodic(std::span<const cplx> samples, double fraction);

/// Angular modes g_n(zeta_j), n in [-N_mode, N_mode].
struct ModeBank {
  int n_boundary = 0;
  int n_mode = 0;
  std::vector<cplx> coefficients;

  ModeBank() = default;
  ModeBank(int n_boundary, int n_mode);

  int width() const { return 2 * n_mode + 1; }
  cplx& at(int j, int n) { return coefficients[static_cast<std::size_t>(j) * width() + (n + n_mode)]; }
  cplx at(int j, int n) const { return coefficients[static_cast<std::size_t>(j) * width() + (n + n_mode)]; }
  std::vector<cplx> mode(int n) const;
};

/// g_n = (1/N_phi) sum_k g(zeta, phi_k) exp(-i n phi_k). Needs N_phi >= 2 N_mode + 2.
ModeBank angular_decompose(const Sinogram& g, int n_mode);
/// Same for complex samples laid out like a sinogram.
ModeBank angular_decompose(std::span<const cplx> values, int n_boundary, int n_angles, int n_mode);

/// sum_n g_n exp(i n phi_k) on N_phi directions; the complex version keeps the
/// imaginary part so reality can be checked.
std::vector<cplx> angular_synthesize_complex(const ModeBank& bank, int n_angles);
Sinogram angular_synthesize(const ModeBank& bank, int n_angles, SinogramTag tag = SinogramTag::doppler);

/// Ra(s, theta_k) on s in [-L, L] with theta_perp = (-sin phi, cos phi).
struct RadonTable {
  int n_angles = 0;
  int n_s = 0;
  double half_width = 2.0;
  std::vector<double> values;

  double ds() const { return 2.0 * half_width / (n_s - 1); }
  double s(int i) const { return -half_width + i * ds(); }
  double at(int k, int i) const { return values[static_cast<std::size_t>(k) * n_s + i]; }
  std::span<const double> row(int k) const { return {values.data() + static_cast<std::size_t>(k) * n_s, static_cast<std::size_t>(n_s)}; }
};

RadonTable radon_transform(const ScalarField& a, int n_angles, double half_width = 2.0, int n_s = 2049,
                           double ray_step = 1.0 / 512.0);

/// Four-point Lagrange interpolation of uniform samples starting at x0 with step dx; zero outside.
double cubic_interpolate(std::span<const double> samples, double x0, double dx, double x);

/// Line Hilbert transform (1/pi) PV int f(t)/(s-t) dt of uniform samples. The
/// discrete kernel 2/(pi m) (odd m) has transfer function -i sign(omega); the
/// convolution is evaluated aperiodically by FFT on a zero-padded buffer.
std::vector<double> line_hilbert(std::span<const double> samples, int pad_factor = 4);
/// Same, validating that the abscissae are uniform.
std::vector<double> line_hilbert(std::span<const double> s, std::span<const double> samples, int pad_factor = 4);

void write_mode_bank(const std::string& path, const ModeBank& bank);
ModeBank read_mode_bank(const std::string& path);

}  // namespace aatomo
