#include "aatomo/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "aatomo/geometry.hpp"
#include "aatomo/parallel.hpp"
#include "json.hpp"
#include "quadrature.hpp"

namespace aatomo {

namespace {

// FFTW planning is not thread safe; execution on fresh arrays is.
fftw_plan plan_for(int n, bool inverse) {
  static std::mutex lock;
  static std::map<std::pair<int, bool>, fftw_plan> plans;
  std::lock_guard guard(lock);
  auto it = plans.find({n, inverse});
  if (it != plans.end()) return it->second;
  std::vector<cplx> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(std::make_pair(n, inverse), plan);
  return plan;
}

}  // namespace

void fft(std::span<cplx> data, bool inverse) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(static_cast<int>(data.size()), inverse), p, p);
}

std::vector<cplx> upsample_periodic(std::span<const cplx> samples, int factor) {
  const int n = static_cast<int>(samples.size());
  if (factor == 1) return {samples.begin(), samples.end()};
  if (factor < 1 || (factor & (factor - 1))) throw ConfigError("upsampling factor must be a power of two");
  std::vector<cplx> spec(samples.begin(), samples.end());
  fft(spec);
  const int m = n * factor;
  std::vector<cplx> out(m, 0.0);
  const int half = n / 2;
  for (int k = 0; k < half; ++k) out[k] = spec[k];
  for (int k = 1; k < half; ++k) out[m - k] = spec[n - k];
  // Nyquist bin shared between +n/2 and -n/2.
  out[half] = 0.5 * spec[half];
  out[m - half] = 0.5 * spec[half];
  fft(out, true);
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

std::vector<cplx> shift_periodic(std::span<const cplx> samples, double fraction) {
  const int n = static_cast<int>(samples.size());
  std::vector<cplx> spec(samples.begin(), samples.end());
  fft(spec);
  for (int k = 0; k < n; ++k) {
    const int f = (k <= n / 2) ? k : k - n;
    if (2 * f == n) {
      // Real-symmetric Nyquist handling: cos part of the shift only.
      spec[k] *= std::cos(kTwoPi * f * fraction / n);
    } else {
      spec[k] *= unit(kTwoPi * f * fraction / n);
    }
  }
  fft(spec, true);
  for (auto& v : spec) v /= static_cast<double>(n);
  return spec;
}

ModeBank::ModeBank(int n_boundary_, int n_mode_) : n_boundary(n_boundary_), n_mode(n_mode_) {
  coefficients.assign(static_cast<std::size_t>(n_boundary) * width(), 0.0);
}

std::vector<cplx> ModeBank::mode(int n) const {
  if (n < -n_mode || n > n_mode) throw ConfigError("mode index outside the bank");
  std::vector<cplx> out(n_boundary);
  for (int j = 0; j < n_boundary; ++j) out[j] = at(j, n);
  return out;
}

ModeBank angular_decompose(std::span<const cplx> values, int n_boundary, int n_angles, int n_mode) {
  if (n_mode < 0 || n_angles < 2 * n_mode + 2)
    throw ConfigError("angular mode count " + std::to_string(n_mode) + " too large for " + std::to_string(n_angles) +
                      " directions");
  if (values.size() != static_cast<std::size_t>(n_boundary) * n_angles) throw ConfigError("sample count mismatch");
  ModeBank bank(n_boundary, n_mode);
  parallel_for(static_cast<std::size_t>(n_boundary), [&](std::size_t b, std::size_t e) {
    std::vector<cplx> row(n_angles);
    for (std::size_t j = b; j < e; ++j) {
      for (int k = 0; k < n_angles; ++k) row[k] = values[j * n_angles + k];
      fft(row);
      for (int n = -n_mode; n <= n_mode; ++n)
        bank.at(static_cast<int>(j), n) = row[(n + n_angles) % n_angles] / static_cast<double>(n_angles);
    }
  });
  return bank;
}

ModeBank angular_decompose(const Sinogram& g, int n_mode) {
  std::vector<cplx> values(g.values.begin(), g.values.end());
  return angular_decompose(values, g.n_boundary, g.n_angles, n_mode);
}

std::vector<cplx> angular_synthesize_complex(const ModeBank& bank, int n_angles) {
  if (n_angles < 2 * bank.n_mode + 1) throw ConfigError("too few directions to synthesize the bank");
  std::vector<cplx> out(static_cast<std::size_t>(bank.n_boundary) * n_angles);
  std::vector<cplx> row(n_angles);
  for (int j = 0; j < bank.n_boundary; ++j) {
    std::fill(row.begin(), row.end(), cplx{});
    for (int n = -bank.n_mode; n <= bank.n_mode; ++n) row[(n + n_angles) % n_angles] += bank.at(j, n);
    fft(row, true);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(j) * n_angles);
  }
  return out;
}

Sinogram angular_synthesize(const ModeBank& bank, int n_angles, SinogramTag tag) {
  const auto c = angular_synthesize_complex(bank, n_angles);
  Sinogram g(bank.n_boundary, n_angles, tag);
  for (std::size_t i = 0; i < c.size(); ++i) g.values[i] = c[i].real();
  return g;
}

RadonTable radon_transform(const ScalarField& a, int n_angles, double half_width, int n_s, double ray_step) {
  if (n_s < 8) throw ConfigError("too few Radon samples");
  if (half_width < 1.0) throw ConfigError("Radon half width must be >= 1");
  RadonTable t{n_angles, n_s, half_width, std::vector<double>(static_cast<std::size_t>(n_angles) * n_s, 0.0)};
  parallel_for(static_cast<std::size_t>(n_angles), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const double phi = kTwoPi * static_cast<double>(k) / n_angles;
      const cplx theta = unit(phi), perp = kI * theta;
      for (int i = 0; i < n_s; ++i) {
        const double s = t.s(i);
        if (std::abs(s) >= 1.0) continue;
        const double half = std::sqrt(1.0 - s * s);
        t.values[k * n_s + i] = detail::simpson_line(a, s * perp, theta, -half, half, ray_step);
      }
    }
  });
  return t;
}

double cubic_interpolate(std::span<const double> samples, double x0, double dx, double x) {
  const int n = static_cast<int>(samples.size());
  const double u = (x - x0) / dx;
  int i = static_cast<int>(std::floor(u));
  if (u < 0.0 || u > n - 1) return 0.0;
  i = std::clamp(i, 1, n - 3);
  const double t = u - i;
  const double p0 = samples[i - 1], p1 = samples[i], p2 = samples[i + 1], p3 = samples[i + 2];
  return p0 * (-t * (t - 1) * (t - 2) / 6.0) + p1 * ((t + 1) * (t - 1) * (t - 2) / 2.0) +
         p2 * (-(t + 1) * t * (t - 2) / 2.0) + p3 * ((t + 1) * t * (t - 1) / 6.0);
}

std::vector<double> line_hilbert(std::span<const double> samples, int pad_factor) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) return {};
  if (pad_factor < 2) throw ConfigError("line Hilbert padding factor must be >= 2");
  const int p = pad_factor * n;
  std::vector<cplx> kernel(p, 0.0), data(p, 0.0);
  for (int m = 1; m < n; m += 2) {
    kernel[m] = 2.0 / (kPi * m);
    kernel[p - m] = -2.0 / (kPi * m);
  }
  for (int i = 0; i < n; ++i) data[i] = samples[i];
  fft(kernel);
  fft(data);
  for (int i = 0; i < p; ++i) data[i] *= kernel[i];
  fft(data, true);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = data[i].real() / p;
  return out;
}

std::vector<double> line_hilbert(std::span<const double> s, std::span<const double> samples, int pad_factor) {
  if (s.size() != samples.size()) throw ConfigError("abscissa and sample counts differ");
  if (s.size() >= 3) {
    const double ds = s[1] - s[0];
    for (std::size_t i = 1; i < s.size(); ++i)
      if (std::abs((s[i] - s[i - 1]) - ds) > 1e-9 * std::abs(ds)) throw ConfigError("line Hilbert needs a uniform grid");
  }
  return line_hilbert(samples, pad_factor);
}

void write_mode_bank(const std::string& path, const ModeBank& bank) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "beta,n,re,im\n";
  char buf[128];
  for (int j = 0; j < bank.n_boundary; ++j)
    for (int n = -bank.n_mode; n <= bank.n_mode; ++n) {
      const cplx c = bank.at(j, n);
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g\n", kTwoPi * j / bank.n_boundary, n, c.real(), c.imag());
      out << buf;
    }
  std::ofstream side(path + ".meta");
  side << nlohmann::json{{"n_boundary", bank.n_boundary}, {"n_mode", bank.n_mode}}.dump(2) << "\n";
}

ModeBank read_mode_bank(const std::string& path) {
  std::ifstream side(path + ".meta");
  if (!side) throw FormatError("missing sidecar " + path + ".meta");
  ModeBank bank;
  try {
    nlohmann::json meta;
    side >> meta;
    bank = ModeBank(meta.at("n_boundary").get<int>(), meta.at("n_mode").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ".meta: " + e.what());
  }
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || line != "beta,n,re,im") throw FormatError(path + ": expected header beta,n,re,im");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string c0, c1, c2, c3;
    if (!std::getline(row, c0, ',') || !std::getline(row, c1, ',') || !std::getline(row, c2, ',') ||
        !std::getline(row, c3, ','))
      throw FormatError(path + ": short row");
    const int j = static_cast<int>(std::lround(std::strtod(c0.c_str(), nullptr) / kTwoPi * bank.n_boundary));
    const int n = std::stoi(c1);
    if (j < 0 || j >= bank.n_boundary || n < -bank.n_mode || n > bank.n_mode) throw FormatError(path + ": entry off the bank");
    bank.at(j, n) = {std::strtod(c2.c_str(), nullptr), std::strtod(c3.c_str(), nullptr)};
  }
  return bank;
}

}  // namespace aatomo
