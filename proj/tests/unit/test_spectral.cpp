#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <vector>

#include "aatomo/spectral.hpp"

using namespace aatomo;

namespace {

// Dawson's function by composite Simpson on exp(t^2); H[exp(-t^2)] = (2/sqrt(pi)) D(s).
double dawson(double s) {
  const int n = 4000;
  const double h = s / n;
  double sum = 1.0 + std::exp(s * s);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * std::exp((i * h) * (i * h));
  return std::exp(-s * s) * sum * h / 3.0;
}

}  // namespace

TEST_CASE("fft matches the naive DFT") {
  const int n = 12;
  std::vector<cplx> x(n), y;
  for (int j = 0; j < n; ++j) x[j] = {std::sin(j * 0.7), std::cos(j * 1.3)};
  y = x;
  fft(y);
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += x[j] * unit(-kTwoPi * j * k / n);
    CHECK(std::abs(y[k] - s) < 1e-12);
  }
  fft(y, true);
  for (int j = 0; j < n; ++j) CHECK(std::abs(y[j] / double(n) - x[j]) < 1e-14);
}

TEST_CASE("upsampling and shifting trigonometric polynomials are exact") {
  const int n = 16;
  auto f = [](double t) { return unit(3.0 * t) + 0.5 * std::cos(2.0 * t) - cplx(0.0, 0.2) * std::sin(5.0 * t); };
  std::vector<cplx> x(n);
  for (int j = 0; j < n; ++j) x[j] = f(kTwoPi * j / n);
  const auto up = upsample_periodic(x, 4);
  REQUIRE(up.size() == 64u);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(up[j] - f(kTwoPi * j / 64)) < 1e-13);
  const auto sh = shift_periodic(x, 0.5);
  for (int j = 0; j < n; ++j) CHECK(std::abs(sh[j] - f(kTwoPi * (j + 0.5) / n)) < 1e-13);
}

TEST_CASE("angular decomposition recovers synthesized modes") {
  const int nb = 8, na = 32, nm = 6;
  ModeBank bank(nb, nm);
  for (int j = 0; j < nb; ++j)
    for (int n = 1; n <= nm; ++n) {
      const cplx c(std::cos(j + n), std::sin(2 * j - n));
      bank.at(j, -n) = c / double(n);
      bank.at(j, n) = std::conj(c) / double(n);
    }
  for (int j = 0; j < nb; ++j) bank.at(j, 0) = 0.1 * j;
  const Sinogram g = angular_synthesize(bank, na);
  const ModeBank back = angular_decompose(g, nm);
  for (int j = 0; j < nb; ++j)
    for (int n = -nm; n <= nm; ++n) CHECK(std::abs(back.at(j, n) - bank.at(j, n)) < 1e-13);
  CHECK_THROWS_AS(angular_decompose(g, 16), ConfigError);
}

TEST_CASE("Radon transform of a polynomial bump") {
  // int (1 - (s^2 + t^2)/w^2)^3 dt = w c^{7/2} 32/35 with c = 1 - s^2/w^2
  const double w = 0.6;
  const auto a = make_bump(0.0, w, 1.0, BumpKind::polynomial);
  const RadonTable r = radon_transform(*a, 8, 2.0, 401);
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < r.n_s; i += 7) {
      const double s = r.s(i);
      const double c = 1.0 - s * s / (w * w);
      const double expected = c > 0.0 ? w * std::pow(c, 3.5) * 32.0 / 35.0 : 0.0;
      CHECK(r.at(k, i) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("cubic interpolation is exact on cubics") {
  std::vector<double> v(20);
  auto p = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
  for (int i = 0; i < 20; ++i) v[i] = p(-1.0 + 0.1 * i);
  for (double x : {-0.83, 0.0, 0.37, 0.71}) CHECK(cubic_interpolate(v, -1.0, 0.1, x) == doctest::Approx(p(x)));
  CHECK(cubic_interpolate(v, -1.0, 0.1, 5.0) == 0.0);
}

TEST_CASE("line Hilbert transform of a Gaussian is a scaled Dawson function") {
  const double h = 1.0 / 32.0;
  const int n = 513;  // t in [-8, 8]
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(-std::pow(-8.0 + i * h, 2));
  const auto H = line_hilbert(f);
  for (int i = 128; i < n - 128; i += 16) {
    const double s = -8.0 + i * h;
    CHECK(std::abs(H[i] - 2.0 / std::sqrt(kPi) * dawson(s)) < 1e-6);
  }
}

TEST_CASE("line Hilbert transform of a cosine packet") {
  // H[cos] = sin away from the window edges when the envelope is broad.
  const double h = 1.0 / 16.0;
  const int n = 1601;  // t in [-50, 50]
  std::vector<double> f(n), t(n);
  for (int i = 0; i < n; ++i) {
    t[i] = -50.0 + i * h;
    f[i] = std::cos(4.0 * t[i]) * std::exp(-t[i] * t[i] / 200.0);
  }
  const auto H = line_hilbert(t, f);
  for (int i = 760; i < 840; i += 9) CHECK(std::abs(H[i] - std::sin(4.0 * t[i]) * std::exp(-t[i] * t[i] / 200.0)) < 1e-6);
  std::vector<double> bad = t;
  bad[5] += 0.01;
  CHECK_THROWS_AS(line_hilbert(bad, f), ConfigError);
}

TEST_CASE("mode bank files round trip") {
  ModeBank bank(4, 3);
  for (std::size_t i = 0; i < bank.coefficients.size(); ++i) bank.coefficients[i] = {std::sin(i * 1.0), 1.0 / (1.0 + i)};
  write_mode_bank("modes_roundtrip.csv", bank);
  const ModeBank r = read_mode_bank("modes_roundtrip.csv");
  CHECK(r.n_boundary == 4);
  CHECK(r.n_mode == 3);
  CHECK(r.coefficients == bank.coefficients);
  std::remove("modes_roundtrip.csv");
  std::remove("modes_roundtrip.csv.meta");
}
