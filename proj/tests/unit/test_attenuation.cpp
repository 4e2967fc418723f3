#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "aatomo/attenuation.hpp"

using namespace aatomo;

namespace {

HOptions small_options() {
  HOptions o;
  o.n_angles = 128;
  o.radon_samples = 1025;
  return o;
}

const IntegratingFactor& canonical() {
  static const IntegratingFactor h(make_canonical_attenuation(0.5), small_options());
  return h;
}

}  // namespace

TEST_CASE("zero attenuation gives a trivial integrating factor") {
  const IntegratingFactor h(make_constant(0.0), small_options());
  for (int k = 0; k < 128; k += 17) CHECK(std::abs(h.h({0.3, -0.4}, k)) < 1e-14);
  const PointModes pm = exp_h_modes_at(h, {0.1, 0.2}, 8);
  CHECK(std::abs(pm.alpha[0] - 1.0) < 1e-14);
  CHECK(std::abs(pm.beta[0] - 1.0) < 1e-14);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(pm.alpha[k]) < 1e-14);
}

TEST_CASE("Radon table of the canonical attenuation") {
  // scale * int (1 - s^2 - t^2)^3 dt = scale * (1 - s^2)^{7/2} * 32/35
  const RadonTable& r = canonical().radon();
  for (int k = 0; k < r.n_angles; k += 31)
    for (int i = 0; i < r.n_s; i += 37) {
      const double c = 1.0 - r.s(i) * r.s(i);
      CHECK(r.at(k, i) == doctest::Approx(c > 0 ? 0.5 * std::pow(c, 3.5) * 32.0 / 35.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("h is an integrating factor along rays") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> pts;
  std::vector<int> dirs;
  for (int i = 0; i < 100; ++i) {
    pts.push_back(0.95 * std::sqrt(u(rng)) * unit(kTwoPi * u(rng)));
    dirs.push_back(static_cast<int>(rng() % 128));
  }
  CHECK(ray_derivative_defect(canonical(), pts, dirs) < 1e-3);
}

TEST_CASE("exp(-h) and exp(h) have no negative modes and invert each other") {
  const auto grid = std::make_shared<InteriorGrid>(1.0 / 16.0, 0.95);
  const HModeField m = exp_h_modes(canonical(), grid, 24);
  CHECK(m.negative_alpha < 1e-4);
  CHECK(m.negative_beta < 1e-4);
  double ab = 0.0;
  for (std::size_t idx : grid->nodes())
    ab = std::max(ab, std::abs(m.alpha[m.offset(idx, 0)] * m.beta[m.offset(idx, 0)] - 1.0));
  CHECK(ab < 1e-8);
}

TEST_CASE("flipping theta-perp breaks the negative-mode property") {
  HOptions o = small_options();
  o.flip_perp = true;
  const IntegratingFactor flipped(make_canonical_attenuation(0.5), o);
  const PointModes pm = exp_h_modes_at(flipped, {0.3, 0.2}, 24);
  CHECK(pm.negative_alpha > 1e-2);
}

TEST_CASE("mode identities converge under refinement") {
  const auto a = make_canonical_attenuation(0.5);
  double previous = 1.0;
  for (double pitch : {1.0 / 16.0, 1.0 / 32.0}) {
    const auto grid = std::make_shared<InteriorGrid>(pitch, 0.9);
    const HIdentityReport r = verify_h_identities(exp_h_modes(canonical(), grid, 24), *a);
    CHECK(r.cauchy_product < 1e-6);
    CHECK(r.beta0 < 1e-4);
    CHECK(r.max_recurrence() < 5e-3);
    CHECK(r.max_recurrence() < previous / 3.0);
    previous = r.max_recurrence();
  }
}

TEST_CASE("mode convolution round trip") {
  const auto grid = std::make_shared<InteriorGrid>(1.0 / 8.0, 0.9);
  const HModeField m = exp_h_modes(canonical(), grid, 24);
  TailField v(grid, 40, false);
  for (std::size_t idx : grid->nodes()) {
    for (int s = 0; s < 40; ++s) v.values[v.offset(idx, s)] = grid->point(idx) * std::pow(0.6, s) + cplx(0.0, 0.01 * s);
    v.valid[idx] = 1;
  }
  const TailField u = mode_convolution(v, m, ConvDirection::u_from_v);
  const TailField back = mode_convolution(u, m, ConvDirection::v_from_u, 10);
  double err = 0.0;
  for (std::size_t idx : grid->nodes())
    for (int s = 0; s < 10; ++s) err = std::max(err, std::abs(back.value(idx, s) - v.value(idx, s)));
  CHECK(err < 1e-6);
}

TEST_CASE("weighted modes reduce to plain modes without attenuation") {
  const IntegratingFactor h(make_constant(0.0), small_options());
  const auto F = make_bump_vector(make_bump({0.2, 0.1}, 0.4, 1.0, BumpKind::polynomial), {1.0, 0.3});
  const Sinogram g = forward_doppler(*F, nullptr, 16, 128);
  const ModeBank plain = angular_decompose(g, 20);
  const ModeBank weighted = weighted_data_modes(g, h, 20);
  for (std::size_t i = 0; i < plain.coefficients.size(); ++i)
    CHECK(std::abs(plain.coefficients[i] - weighted.coefficients[i]) < 1e-15);
}
