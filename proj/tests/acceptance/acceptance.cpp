// Property-based acceptance suite at desk scale. Prints one PASS/FAIL line per
// criterion and exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "aatomo/aanalytic.hpp"
#include "aatomo/attenuation.hpp"
#include "aatomo/config.hpp"
#include "aatomo/reconstruct.hpp"
#include "aatomo/scenarios.hpp"
#include "aatomo/transport.hpp"

using namespace aatomo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

RunConfig desk() { return RunConfig{}; }

RunConfig desk_nonatt() {
  RunConfig c;
  c.attenuation = "none";
  return c;
}

/// Adds eps * (zetabar e^{-i n phi} + c.c.) to the data: modes -n and n move by eps zetabar and its conjugate.
Sinogram perturb_mode(Sinogram g, int n, double eps) {
  for (int j = 0; j < g.n_boundary; ++j) {
    const cplx zb = std::conj(unit(g.beta(j)));
    for (int k = 0; k < g.n_angles; ++k) {
      const cplx e = eps * zb * unit(-n * g.phi(k));
      g.at(j, k) += n == 0 ? eps * 2.0 * zb.real() : 2.0 * e.real();
    }
  }
  return g;
}

/// Largest boundary RMS over the angular modes of the data.
double mode_scale(const Sinogram& g, int n_mode) {
  const ModeBank bank = angular_decompose(g, n_mode);
  double best = 0.0;
  for (int n = -n_mode; n <= n_mode; ++n) {
    double s = 0.0;
    for (int j = 0; j < bank.n_boundary; ++j) s += std::norm(bank.at(j, n));
    best = std::max(best, std::sqrt(s / bank.n_boundary));
  }
  return best;
}

double max_residual(const RangeReport& r) {
  double m = std::max(r.residual_even, r.residual_odd);
  for (double v : r.residual_aug) m = std::max(m, v);
  return m;
}

void criterion1() {
  const auto t0 = Clock::now();
  RunConfig cfg = desk_nonatt();
  cfg.tol_range = 1e-3;
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sinogram g = forward_doppler(*random_bump_field(seed), nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
    const RangeReport r = check_range_nonatt(g, cfg);
    worst = std::max(worst, max_residual(r));
    ok = ok && r.pass() && r.residual_aug.size() == 8;
  }
  const double t = seconds_since(t0);
  report(1, ok && worst < 1e-3 && t < 300.0,
         fmt("non-attenuated range: max residual (even, odd, aug m<=8) over 5 fields %.2e < 1e-3; runtime %.1f s < 300 s",
             worst, t));
}

void criterion2(const IntegratingFactor& h) {
  RunConfig cfg = desk();
  cfg.tol_range = 1e-3;
  double worst = 0.0, worst_g0 = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sinogram g =
        forward_doppler(*random_bump_field(seed), h.attenuation().get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
    const RangeReport r = check_range_att(g, h, cfg);
    worst = std::max({worst, r.residual_even, r.residual_odd});
    worst_g0 = std::max(worst_g0, r.g0_defect);
    ok = ok && r.pass();
  }
  report(2, ok && worst < 1e-3 && worst_g0 < 5e-3,
         fmt("attenuated range: max residual (even, odd) %.2e < 1e-3; max g0 defect %.2e < 5e-3", worst, worst_g0));
}

void criterion3(const IntegratingFactor& h) {
  const RunConfig cfg = desk();
  const RunConfig na = desk_nonatt();
  const auto F = make_scenario("bump_pair", cfg).F;
  const Sinogram ga = forward_doppler(*F, h.attenuation().get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
  const Sinogram gn = forward_doppler(*F, nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
  const RangeReport clean_a = check_range_att(ga, h, cfg);
  const RangeReport clean_n = check_range_nonatt(gn, na);
  const double eps_a = 1e-2 * std::max(1.0, mode_scale(ga, cfg.n_mode));
  const double eps_n = 1e-2 * std::max(1.0, mode_scale(gn, cfg.n_mode));

  // Attenuated: every mode 0..N_mode, including g_0 through the boundary-limit check.
  double weakest_a = 1e300;
  int weakest_a_mode = -1;
  for (int n = 0; n <= cfg.n_mode; ++n) {
    const RangeReport r = check_range_att(perturb_mode(ga, n, eps_a), h, cfg);
    const double signal = std::max({r.residual_even, r.residual_odd, r.g0_defect});
    if (signal < weakest_a) weakest_a = signal, weakest_a_mode = n;
  }
  // Non-attenuated: modes 1..N_mode. g_0 enters no condition of the characterization.
  double weakest_n = 1e300;
  int weakest_n_mode = -1;
  for (int n = 1; n <= cfg.n_mode; ++n) {
    const double signal = max_residual(check_range_nonatt(perturb_mode(gn, n, eps_n), na));
    if (signal < weakest_n) weakest_n = signal, weakest_n_mode = n;
  }
  const double zero_mode = max_residual(check_range_nonatt(perturb_mode(gn, 0, eps_n), na));
  const double base_a = std::max({clean_a.residual_even, clean_a.residual_odd, clean_a.g0_defect});
  report(3, clean_a.pass() && clean_n.pass() && weakest_a > 1e-2 && weakest_n > 1e-2,
         fmt("negative controls: clean data pass (attenuated max %.1e, non-attenuated max %.1e); ", base_a,
             max_residual(clean_n)) +
             fmt("weakest perturbed signal attenuated %.2e (mode %g), non-attenuated %.2e (mode %g) > 1e-2", weakest_a,
                 weakest_a_mode, weakest_n, weakest_n_mode) +
             fmt("; non-attenuated g_0 perturbation stays in range (residual %.1e)", zero_mode));
}

void criterion4() {
  RunConfig cfg = desk_nonatt();
  cfg.tol_range = 1e-3;
  const Sinogram gx = forward_xray(*make_bump({0.2, -0.1}, 0.45, 1.0, BumpKind::polynomial), nullptr, cfg.n_boundary,
                                   cfg.n_angles, cfg.transport());
  const RangeReport rx = check_range_nonatt(gx, cfg);
  double aug_x = 0.0;
  for (double v : rx.residual_aug) aug_x = std::max(aug_x, v);
  bool aug_failed = false;
  for (const auto& f : rx.failed) aug_failed = aug_failed || f.rfind("augmented", 0) == 0;
  const double zt_x = zero_tensor_residual(gx, cfg);

  const Sinogram gd = forward_doppler(*random_bump_field(2), nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
  const double zt_d = zero_tensor_residual(gd, cfg);
  const Sinogram gg =
      forward_doppler(*make_gradient_field(random_potential(2)), nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
  const double zt_g = zero_tensor_residual(gg, cfg);

  const bool ok = aug_failed && aug_x > cfg.tol_range && zt_d > cfg.tol_range && zt_x < cfg.tol_range &&
                  zt_g < cfg.tol_range;
  report(4, ok,
         fmt("discrimination: X-ray aug residual %.2e and Doppler 0-tensor residual %.2e fail the 1e-3 gate; ", aug_x,
             zt_d) +
             fmt("controls pass it (X-ray 0-tensor %.2e, gradient Doppler 0-tensor %.2e)", zt_x, zt_g));
}

void criterion5(const ScalarFieldPtr& a) {
  const RunConfig cfg = desk();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ConfusionPair p = confusion_field(random_potential(seed), a);
    const Sinogram gd = forward_doppler(*p.F, a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
    const Sinogram gx = forward_xray(*p.f, a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
    for (std::size_t i = 0; i < gd.values.size(); ++i) worst = std::max(worst, std::abs(gd.values[i] - gx.values[i]));
  }
  report(5, worst < 1e-6, fmt("confusion: max sup |Doppler(-grad psi) - X-ray(a psi)| over 3 potentials %.2e < 1e-6", worst));
}

double attenuated_error(const RunConfig& cfg, const IntegratingFactor* desk_h, bool* accepted, double* g0) {
  const Scenario sc = make_scenario("bump_pair", cfg);
  const Sinogram g = forward_doppler(*sc.F, sc.a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
  const ReconstructionReport rep = desk_h ? reconstruct_att(g, *desk_h, cfg) : reconstruct_att(g, sc.a, cfg);
  if (accepted) *accepted = rep.accepted;
  if (g0) *g0 = rep.metrics.has("g0_defect") ? rep.metrics.get("g0_defect") : NAN;
  if (!rep.accepted) return INFINITY;
  return relative_l2_error(rep.F, sample(*sc.F, rep.F.grid), 1.0);
}

void criterion6(const IntegratingFactor& h) {
  bool accepted = false;
  double g0 = 0.0;
  const double desk_err = attenuated_error(desk(), &h, &accepted, &g0);

  // Levels (N_b, N_phi, pitch) = (128, 64, 1/32), (256, 128, 1/64), desk; N_mode = N_phi / 4, M_seq = N_mode / 2.
  // The coarse levels cannot meet the desk gates, so only their error is compared.
  std::vector<double> errs;
  for (int level = 0; level < 2; ++level) {
    RunConfig c = desk();
    c.n_boundary = 128 << level;
    c.n_angles = 64 << level;
    c.pitch = 1.0 / (32 << level);
    c.n_mode = c.n_angles / 4;
    c.m_seq = c.n_mode / 2;
    c.tol_range = 1e9;
    c.tol_g0 = 1e9;
    errs.push_back(attenuated_error(c, nullptr, nullptr, nullptr));
  }
  errs.push_back(desk_err);
  const bool decreasing = errs[1] < errs[0] && errs[2] < errs[1];
  report(6, accepted && desk_err <= 0.05 && decreasing,
         fmt("attenuated reconstruction: desk relative L2 error %.4f <= 0.05 (g0 defect %.2e); ", desk_err, g0) +
             fmt("levels %.4g > %.4g > %.4g", errs[0], errs[1], errs[2]));
}

void criterion7and8() {
  const RunConfig cfg = desk_nonatt();
  const Scenario sc = make_scenario("bump_pair", cfg);
  const Sinogram g = forward_doppler(*sc.F, nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
  const ReconstructionReport rep = reconstruct_nonatt(g, cfg);
  const double curl = rep.accepted ? curl_defect(rep.F, sample(*sc.F, rep.F.grid)) : INFINITY;

  const auto shifted = make_vector_sum({sc.F, make_gradient_field(random_potential(7))});
  const Sinogram gs = forward_doppler(*shifted, nullptr, cfg.n_boundary, cfg.n_angles, cfg.transport());
  const ReconstructionReport rep_s = reconstruct_nonatt(gs, cfg);
  const double gauge = rep.accepted && rep_s.accepted ? curl_defect(rep_s.F, rep.F) : INFINITY;
  report(7, curl <= 0.05 && gauge < 1e-4,
         fmt("non-attenuated reconstruction: curl defect %.2e <= 0.05; gauge curl defect %.2e < 1e-4", curl, gauge));

  const double conj = rep.accepted ? rep.metrics.get("conjugacy_defect") : INFINITY;
  report(8, conj < 1e-4, fmt("conjugation: conjugacy defect for m <= %g is %.2e < 1e-4", cfg.m_max, conj));
}

void criterion9(const IntegratingFactor& h) {
  const RunConfig cfg = desk();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> points;
  std::vector<int> dirs;
  for (int i = 0; i < 100; ++i) {
    points.push_back((1.0 - cfg.mask_margin) * std::sqrt(u(rng)) * unit(kTwoPi * u(rng)));
    dirs.push_back(static_cast<int>(rng() % static_cast<unsigned>(cfg.n_angles)));
  }
  const double ray = ray_derivative_defect(h, points, dirs);

  std::vector<double> rec;
  HModeField fine;
  HIdentityReport id;
  for (double pitch : {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0}) {
    fine = exp_h_modes(h, std::make_shared<InteriorGrid>(pitch, 1.0 - cfg.mask_margin), cfg.k_h);
    id = verify_h_identities(fine, *h.attenuation());
    rec.push_back(id.max_recurrence());
  }
  const double order1 = std::log2(rec[0] / rec[1]), order2 = std::log2(rec[1] / rec[2]);
  const double neg = std::max(fine.negative_alpha, fine.negative_beta);
  const bool ok = ray < 1e-3 && neg < 1e-4 && id.cauchy_product < 1e-6 && rec[2] < 5e-3 && order1 >= 1.5 &&
                  order2 >= 1.5;
  report(9, ok,
         fmt("h identities: ray defect %.2e < 1e-3; negative mass %.2e < 1e-4; convolution identity %.2e < 1e-6; ", ray,
             neg, id.cauchy_product) +
             fmt("recurrence defect %.2e < 5e-3 with observed orders %.2f, %.2f >= 1.5", rec[2], order1, order2));
}

void criterion10() {
  auto value = [](int which, cplx z, int s) -> cplx {
    switch (which) {
      case 0: return s == 0 ? cplx(1.0) : cplx(0.0);
      case 1: return s == 0 ? z : cplx(0.0);
      default: return s == 0 ? std::conj(z) : (s == 1 ? -z : cplx(0.0));
    }
  };
  const auto grid = std::make_shared<InteriorGrid>(1.0 / 32.0, 0.95);
  double err = 0.0, hil = 0.0;
  for (int which = 0; which < 3; ++which) {
    const SeqBoundary seq =
        trace_sequence(desk().n_boundary, 8, [&](cplx z, int s) { return value(which, z, s); });
    hil = std::max(hil, range_residual(seq));
    const TailField t = bukhgeim_cauchy(seq, grid, {});
    for (std::size_t idx : grid->nodes())
      for (int s = 0; s < 8; ++s) err = std::max(err, std::abs(t.value(idx, s) - value(which, grid->point(idx), s)));
  }
  report(10, err < 1e-8 && hil < 1e-5,
         fmt("operator oracles: Bukhgeim-Cauchy error %.2e < 1e-8; Hilbert residual %.2e < 1e-5", err, hil));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const RunConfig cfg = desk();
  const ScalarFieldPtr a = make_attenuation(cfg);
  const IntegratingFactor h(a, cfg.h_options());

  criterion1();
  criterion2(h);
  criterion3(h);
  criterion4();
  criterion5(a);
  criterion6(h);
  criterion7and8();
  criterion9(h);
  criterion10();

  std::printf("%d of 10 criteria failed (%.0f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
