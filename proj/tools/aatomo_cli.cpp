#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "aatomo/attenuation.hpp"
#include "aatomo/config.hpp"
#include "aatomo/reconstruct.hpp"
#include "aatomo/scenarios.hpp"
#include "aatomo/transport.hpp"

namespace fs = std::filesystem;
using namespace aatomo;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config;
  std::string out = "out";
  std::string scenario;
  std::string sinogram;
  long long seed = -1;
  bool flip_perp = false;
};

RunConfig load(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.scenario.empty()) cfg.scenario = o.scenario;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  cfg.validate();
  return cfg;
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

GridPtr mask(const RunConfig& cfg) { return std::make_shared<InteriorGrid>(cfg.pitch, 1.0 - cfg.mask_margin); }

void print_gate(const std::string& name, double value, double tol) {
  std::printf("%-22s %.6e  %s (tol %.1e)\n", name.c_str(), value, value < tol ? "PASS" : "FAIL", tol);
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = load(o);
  const Scenario sc = make_scenario(cfg);
  const TransportOptions t = cfg.transport();
  const GridPtr grid = mask(cfg);
  if (sc.F) {
    const Sinogram g = forward_doppler(*sc.F, sc.a.get(), cfg.n_boundary, cfg.n_angles, t);
    write_sinogram(out_path(o, sc.f ? "sinogram_doppler.csv" : "sinogram.csv"), g);
    write_vector_csv(out_path(o, "truth_F.csv"), sample(*sc.F, grid));
  }
  if (sc.f) {
    const Sinogram g = forward_xray(*sc.f, sc.a.get(), cfg.n_boundary, cfg.n_angles, t);
    write_sinogram(out_path(o, sc.F ? "sinogram_xray.csv" : "sinogram.csv"), g);
    write_scalar_csv(out_path(o, "truth_f.csv"), sample(sc.f, grid));
  }
  if (sc.psi) write_scalar_csv(out_path(o, "truth_psi.csv"), sample(sc.psi, grid));
  std::ofstream(out_path(o, "config.txt")) << dump_config(cfg);
  std::printf("scenario %s written to %s\n", sc.name.c_str(), o.out.c_str());
  return kPass;
}

int cmd_check_range(const Options& o) {
  const RunConfig cfg = load(o);
  const Sinogram g = read_sinogram(o.sinogram);
  RangeReport r;
  if (cfg.attenuated()) {
    const IntegratingFactor h(make_attenuation(cfg), cfg.h_options());
    r = check_range_att(g, h, cfg);
    print_gate("residual_even", r.residual_even, cfg.tol_range);
    print_gate("residual_odd", r.residual_odd, cfg.tol_range);
    print_gate("g0_defect", r.g0_defect, cfg.tol_g0);
  } else {
    r = check_range_nonatt(g, cfg);
    print_gate("residual_even", r.residual_even, cfg.tol_range);
    print_gate("residual_odd", r.residual_odd, cfg.tol_range);
    for (std::size_t m = 0; m < r.residual_aug.size(); ++m)
      print_gate("residual_aug_" + std::to_string(m + 1), r.residual_aug[m], cfg.tol_range);
  }
  write_metrics(out_path(o, "range_metrics.txt"), r.metrics());
  if (r.pass()) {
    std::printf("range check PASS\n");
    return kPass;
  }
  std::printf("range check FAIL:");
  for (const auto& f : r.failed) std::printf(" %s", f.c_str());
  std::printf("\n");
  return kFail;
}

int cmd_reconstruct(const Options& o) {
  const RunConfig cfg = load(o);
  const Sinogram g = read_sinogram(o.sinogram);
  const ReconstructionReport rep =
      cfg.attenuated() ? reconstruct_att(g, make_attenuation(cfg), cfg) : reconstruct_nonatt(g, cfg);
  Metrics m = rep.metrics;
  if (rep.accepted && !o.scenario.empty()) {
    const Scenario sc = make_scenario(cfg);
    if (sc.F) {
      const VectorFieldGrid truth = sample(*sc.F, rep.F.grid);
      m.set("relative_l2_error", relative_l2_error(rep.F, truth, 1.0));
      m.set("curl_defect", curl_defect(rep.F, truth));
    }
  }
  write_metrics(out_path(o, "metrics.txt"), m);
  std::fputs(m.str().c_str(), stdout);
  if (!rep.accepted) {
    std::printf("rejected: %s\n", rep.rejection.c_str());
    return kFail;
  }
  write_vector_csv(out_path(o, "F_rec.csv"), rep.F);
  write_scalar_csv(out_path(o, "u0.csv"), rep.u0);
  std::printf("reconstruction written to %s\n", o.out.c_str());
  return kPass;
}

int cmd_confuse(const Options& o) {
  const RunConfig cfg = load(o);
  const ScalarFieldPtr a = make_attenuation(cfg);
  if (!a) throw ConfigError("confuse needs an attenuation; set attenuation = canonical");
  const ConfusionPair pair = confusion_field(random_potential(cfg.seed), a);
  const TransportOptions t = cfg.transport();
  const Sinogram gd = forward_doppler(*pair.F, a.get(), cfg.n_boundary, cfg.n_angles, t);
  const Sinogram gx = forward_xray(*pair.f, a.get(), cfg.n_boundary, cfg.n_angles, t);
  double diff = 0.0;
  for (std::size_t i = 0; i < gd.values.size(); ++i) diff = std::max(diff, std::abs(gd.values[i] - gx.values[i]));
  write_sinogram(out_path(o, "sinogram_doppler.csv"), gd);
  write_sinogram(out_path(o, "sinogram_xray.csv"), gx);
  Metrics m;
  m.set("sup_difference", diff);
  write_metrics(out_path(o, "confusion_metrics.txt"), m);
  print_gate("sup_difference", diff, 1e-6);
  return diff < 1e-6 ? kPass : kFail;
}

int cmd_validate_h(const Options& o) {
  const RunConfig cfg = load(o);
  ScalarFieldPtr a = make_attenuation(cfg);
  if (!a) a = make_constant(0.0);
  HOptions ho = cfg.h_options();
  ho.flip_perp = o.flip_perp;
  const IntegratingFactor h(a, ho);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> points;
  std::vector<int> dirs;
  for (int i = 0; i < 100; ++i) {
    points.push_back((1.0 - cfg.mask_margin) * std::sqrt(u(rng)) * unit(kTwoPi * u(rng)));
    dirs.push_back(static_cast<int>(rng() % static_cast<unsigned>(cfg.n_angles)));
  }
  const double ray = ray_derivative_defect(h, points, dirs);
  const HModeField modes = exp_h_modes(h, mask(cfg), cfg.k_h);
  const HIdentityReport id = verify_h_identities(modes, *a);

  Metrics m;
  m.set("ray_derivative", ray);
  m.set("negative_mass_alpha", modes.negative_alpha);
  m.set("negative_mass_beta", modes.negative_beta);
  m.set("tail_mass", modes.tail);
  m.set("beta0", id.beta0);
  m.set("beta1", id.beta1);
  m.set("beta_recurrence", id.beta_recurrence);
  m.set("alpha0", id.alpha0);
  m.set("alpha1", id.alpha1);
  m.set("alpha_recurrence", id.alpha_recurrence);
  m.set("cauchy_product", id.cauchy_product);
  write_metrics(out_path(o, "h_metrics.txt"), m);

  struct Gate {
    const char* name;
    double value, tol;
  };
  const Gate gates[] = {{"ray_derivative", ray, 1e-3},
                        {"negative_mass_alpha", modes.negative_alpha, cfg.tol_h},
                        {"negative_mass_beta", modes.negative_beta, cfg.tol_h},
                        {"tail_mass", modes.tail, cfg.tol_h},
                        {"beta0", id.beta0, 1e-4},
                        {"beta1", id.beta1, 5e-3},
                        {"beta_recurrence", id.beta_recurrence, 5e-3},
                        {"alpha1", id.alpha1, 5e-3},
                        {"alpha_recurrence", id.alpha_recurrence, 5e-3},
                        {"cauchy_product", id.cauchy_product, 1e-6}};
  bool ok = true;
  for (const auto& g : gates) {
    print_gate(g.name, g.value, g.tol);
    ok = ok && g.value < g.tol;
  }
  std::printf("validate-h %s\n", ok ? "PASS" : "FAIL");
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attenuated Doppler and X-ray tomography on the unit disk"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "key = value configuration file");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--scenario", o.scenario, "scenario name (overrides the config)");
  app.add_option("--seed", o.seed, "random seed (overrides the config)");
  app.add_flag("--debug-flip-perp", o.flip_perp, "flip the sign of theta-perp inside h (validate-h only)");

  auto* sim = app.add_subcommand("simulate", "write sinograms and ground truth for a scenario");
  auto* chk = app.add_subcommand("check-range", "test a sinogram against the range conditions");
  chk->add_option("sinogram", o.sinogram, "sinogram CSV")->required();
  auto* rec = app.add_subcommand("reconstruct", "reconstruct the vector field from a sinogram");
  rec->add_option("sinogram", o.sinogram, "sinogram CSV")->required();
  auto* con = app.add_subcommand("confuse", "compare Doppler data of -grad psi with X-ray data of a psi");
  auto* val = app.add_subcommand("validate-h", "check the integrating-factor identities");
  auto* cfgcmd = app.add_subcommand("print-config", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (o.flip_perp && !val->parsed()) {
    std::cerr << "--debug-flip-perp only applies to validate-h\n";
    return kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (chk->parsed()) return cmd_check_range(o);
    if (rec->parsed()) return cmd_reconstruct(o);
    if (con->parsed()) return cmd_confuse(o);
    if (val->parsed()) return cmd_validate_h(o);
    if (cfgcmd->parsed()) {
      std::fputs(dump_config(load(o)).c_str(), stdout);
      return kPass;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
