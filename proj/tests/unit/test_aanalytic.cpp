#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aatomo/aanalytic.hpp"
#include "aatomo/transport.hpp"

using namespace aatomo;

namespace {

SeqBoundary hand_built(int which, int nb) {
  return trace_sequence(nb, 8, [which](cplx z, int s) -> cplx {
    switch (which) {
      case 0: return s == 0 ? cplx(1.0) : cplx(0.0);
      case 1: return s == 0 ? z : cplx(0.0);
      default: return s == 0 ? std::conj(z) : (s == 1 ? -z : cplx(0.0));
    }
  });
}

cplx hand_built_value(int which, cplx z, int s) {
  switch (which) {
    case 0: return s == 0 ? cplx(1.0) : cplx(0.0);
    case 1: return s == 0 ? z : cplx(0.0);
    default: return s == 0 ? std::conj(z) : (s == 1 ? -z : cplx(0.0));
  }
}

Sinogram bump_doppler(int nb, int na) {
  const auto F = make_vector_sum(
      {make_bump_vector(make_bump({0.25, 0.1}, 0.4, 1.0, BumpKind::gaussian_truncated), {1.0, 0.5}),
       make_bump_vector(make_bump({-0.3, -0.2}, 0.35, 0.8, BumpKind::gaussian_truncated), {-0.3, 1.0})});
  return forward_doppler(*F, nullptr, nb, na);
}

}  // namespace

TEST_CASE("slot to mode maps") {
  CHECK(slot_mode(SeqKind::plain, 0, 0) == -1);
  CHECK(slot_mode(SeqKind::plain, 0, 4) == -5);
  CHECK(slot_mode(SeqKind::even, 0, 0) == -2);
  CHECK(slot_mode(SeqKind::even, 0, 3) == -8);
  CHECK(slot_mode(SeqKind::odd, 0, 2) == -5);
  CHECK(slot_mode(SeqKind::augmented, 2, 0) == 3);
  CHECK(slot_mode(SeqKind::augmented, 2, 1) == 1);
  CHECK(slot_mode(SeqKind::augmented, 2, 2) == -1);
  CHECK(slot_mode(SeqKind::augmented, 2, 3) == -3);
  CHECK(slot_mode(SeqKind::zero_tensor, 0, 0) == 0);
  CHECK(slot_mode(SeqKind::zero_tensor, 0, 2) == -4);
}

TEST_CASE("Bukhgeim-Cauchy reproduces hand-built L-analytic sequences") {
  const auto grid = std::make_shared<InteriorGrid>(1.0 / 16.0, 0.95);
  for (int which = 0; which < 3; ++which) {
    const TailField t = bukhgeim_cauchy(hand_built(which, 128), grid, {});
    double err = 0.0;
    for (std::size_t idx : grid->nodes())
      for (int s = 0; s < 3; ++s)
        err = std::max(err, std::abs(t.value(idx, s) - hand_built_value(which, grid->point(idx), s)));
    CHECK(err < 1e-8);
  }
}

TEST_CASE("analytic derivatives of the operator") {
  // <zbar z^2, -z^3/3>: dbar u_0 = z^2, d u_0 = 2 |z|^2, dbar u_1 = 0, d u_1 = -z^2
  const auto seq = trace_sequence(128, 4, [](cplx z, int s) {
    return s == 0 ? std::conj(z) * z * z : (s == 1 ? -z * z * z / 3.0 : cplx(0.0));
  });
  BcOptions opt;
  opt.derivatives = true;
  BukhgeimCauchy bc(seq, opt);
  for (cplx z : {cplx(0.3, 0.4), cplx(-0.7, 0.1), cplx(0.0, -0.9)}) {
    cplx v[2], db[2], d[2];
    bc.evaluate(z, 2, v, db, d);
    CHECK(std::abs(v[0] - std::conj(z) * z * z) < 1e-8);
    CHECK(std::abs(db[0] - z * z) < 1e-7);
    CHECK(std::abs(d[0] - 2.0 * std::norm(z)) < 1e-7);
    CHECK(std::abs(db[1]) < 1e-7);
    CHECK(std::abs(d[1] + z * z) < 1e-7);
  }
}

TEST_CASE("Hilbert residuals of hand-built traces vanish") {
  for (int which = 0; which < 3; ++which) CHECK(range_residual(hand_built(which, 256)) < 1e-5);
}

TEST_CASE("a non-analytic trace is detected") {
  const auto seq = trace_sequence(256, 8, [](cplx z, int s) { return s == 0 ? std::conj(z) : cplx(0.0); });
  CHECK(range_residual(seq) > 1.0);
}

TEST_CASE("zero data give zero residual and zero tail") {
  const SeqBoundary zero(64, 6);
  CHECK(range_residual(zero) == 0.0);
  const auto grid = std::make_shared<InteriorGrid>(1.0 / 8.0, 0.9);
  const TailField t = bukhgeim_cauchy(zero, grid, {});
  for (std::size_t idx : grid->nodes()) CHECK(t.value(idx, 0) == cplx(0.0));
}

TEST_CASE("simulated Doppler data satisfy the range conditions") {
  const ModeBank bank = angular_decompose(bump_doppler(512, 256), 64);
  const SequenceSet set = build_sequences(bank, 8, 32);
  CHECK(range_residual(set.even) < 1e-4);
  CHECK(range_residual(set.odd) < 1e-4);
  for (const auto& aug : set.augmented) CHECK(range_residual(aug) < 1e-3);

  const auto coarse = std::make_shared<InteriorGrid>(1.0 / 16.0, 0.9);
  BcOptions head;
  head.slots_out = 1;
  std::vector<TailField> heads;
  for (const auto& aug : set.augmented) heads.push_back(bukhgeim_cauchy(aug, coarse, head));
  BcOptions odd;
  odd.slots_out = 8;
  CHECK(conjugacy_defect(heads, bukhgeim_cauchy(set.odd, coarse, odd)) < 1e-4);
}

TEST_CASE("sequence construction preconditions") {
  const ModeBank bank(16, 8);
  CHECK_THROWS_AS(build_sequences(bank, 2, 5), ConfigError);
  CHECK_NOTHROW(build_sequences(bank, 2, 4));
}
