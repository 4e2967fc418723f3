#include "aatomo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "aatomo/aanalytic.hpp"
#include "aatomo/parallel.hpp"
#include "aatomo/spectral.hpp"

namespace aatomo {

void Metrics::set(const std::string& key, double value) {
  for (auto& [k, v] : entries)
    if (k == key) {
      v = value;
      return;
    }
  entries.emplace_back(key, value);
}

double Metrics::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw ConfigError("no metric named " + key);
}

bool Metrics::has(const std::string& key) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
}

std::string Metrics::str() const {
  std::string out;
  char buf[64];
  for (const auto& [k, v] : entries) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += k + " = " + buf + "\n";
  }
  return out;
}

void write_metrics(const std::string& path, const Metrics& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << m.str();
}

Metrics RangeReport::metrics() const {
  Metrics m;
  m.set("residual_even", residual_even);
  m.set("residual_odd", residual_odd);
  for (std::size_t i = 0; i < residual_aug.size(); ++i) m.set("residual_aug_" + std::to_string(i + 1), residual_aug[i]);
  if (attenuated) m.set("g0_defect", g0_defect);
  m.set("range_pass", pass() ? 1.0 : 0.0);
  return m;
}

namespace {

GridPtr mask_grid(const RunConfig& cfg) { return std::make_shared<InteriorGrid>(cfg.pitch, 1.0 - cfg.mask_margin); }

GridPtr widened(const GridPtr& g, int rings) {
  return std::make_shared<InteriorGrid>(g->widened(rings, std::max(g->radius(), 0.985)));
}

void check_compatible(const Sinogram& g, const RunConfig& cfg) {
  if (g.n_boundary != cfg.n_boundary || g.n_angles != cfg.n_angles)
    throw ConfigError("sinogram grid " + std::to_string(g.n_boundary) + "x" + std::to_string(g.n_angles) +
                      " does not match the configuration");
}

/// Weighted boundary sequences and pointwise access to the attenuated u-system.
class AttenuatedSystem {
 public:
  AttenuatedSystem(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg)
      : h_(h),
        cfg_(cfg),
        bank_(angular_decompose(g, cfg.n_mode)),
        gamma_(weighted_data_modes(g, h, cfg.n_mode)),
        even_(make_sequence(gamma_, SeqKind::even, cfg.m_seq)),
        odd_(make_sequence(gamma_, SeqKind::odd, cfg.m_seq)),
        plain_slots_(cfg.k_h + 4),
        n_odd_((plain_slots_ + 1) / 2),
        n_even_(plain_slots_ / 2),
        bc_even_(even_, options(n_even_)),
        bc_odd_(odd_, options(n_odd_)) {}

  const ModeBank& bank() const { return bank_; }
  const ModeBank& gamma() const { return gamma_; }

  /// Boundary mismatch between u_n = sum_k beta_k v_{n-k}, with v traced by gamma, and g_n.
  double trace_defect() const {
    const int K = cfg_.k_h;
    const int n_check = std::min(16, cfg_.n_mode - K);
    if (n_check < 1) return 0.0;
    std::vector<double> err(n_check, 0.0), ref(n_check, 0.0);
    for (int j = 0; j < bank_.n_boundary; ++j) {
      const PointModes pm = exp_h_modes_at(h_, unit(kTwoPi * j / bank_.n_boundary), K);
      for (int i = 0; i < n_check; ++i) {
        const int n = -(i + 1);
        cplx u = 0.0;
        for (int k = 0; k <= K; ++k) u += pm.beta[k] * gamma_.at(j, n - k);
        err[i] += std::norm(u - bank_.at(j, n));
        ref[i] += std::norm(bank_.at(j, n));
      }
    }
    double e = 0.0, r = 0.0;
    for (int i = 0; i < n_check; ++i) {
      e = std::max(e, std::sqrt(err[i] / bank_.n_boundary));
      r = std::max(r, std::sqrt(ref[i] / bank_.n_boundary));
    }
    return e / std::max(1.0, r);
  }
  const SeqBoundary& even() const { return even_; }
  const SeqBoundary& odd() const { return odd_; }
  int plain_slots() const { return plain_slots_; }
  const BukhgeimCauchy& bc_even() const { return bc_even_; }
  const BukhgeimCauchy& bc_odd() const { return bc_odd_; }

  /// v_-1 .. v_-(K_h+4) on a grid with derivative planes.
  TailField v_tail(const GridPtr& grid) const {
    const TailField to = bc_odd_.on_grid(grid);
    const TailField te = bc_even_.on_grid(grid);
    TailField v(grid, plain_slots_, true);
    for (std::size_t idx = 0; idx < grid->size(); ++idx) {
      if (!to.ok(idx) || !te.ok(idx)) continue;
      for (int p = 0; p < plain_slots_; ++p) {
        const TailField& src = (p % 2 == 0) ? to : te;
        const std::size_t s = src.offset(idx, p / 2);
        const std::size_t o = v.offset(idx, p);
        v.values[o] = src.values[s];
        v.dbar[o] = src.dbar[s];
        v.d[o] = src.d[s];
      }
      v.valid[idx] = 1;
    }
    return v;
  }

  /// d u_-1 at an arbitrary interior point; beta derivatives by fourth-order differences.
  cplx du_minus1(cplx z) const {
    const int K = cfg_.k_h;
    std::vector<cplx> vo(n_odd_), vo_b(n_odd_), vo_d(n_odd_), ve(n_even_), ve_b(n_even_), ve_d(n_even_);
    bc_odd_.evaluate(z, n_odd_, vo.data(), vo_b.data(), vo_d.data());
    bc_even_.evaluate(z, n_even_, ve.data(), ve_b.data(), ve_d.data());
    auto v = [&](int p) { return p % 2 == 0 ? vo[p / 2] : ve[p / 2]; };
    auto dv = [&](int p) { return p % 2 == 0 ? vo_d[p / 2] : ve_d[p / 2]; };
    const double e = cfg_.g0_step;
    const PointModes c = exp_h_modes_at(h_, z, K);
    std::vector<cplx> dx(K + 1, 0.0), dy(K + 1, 0.0);
    const double w[4] = {1.0, -8.0, 8.0, -1.0};
    const double off[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int i = 0; i < 4; ++i) {
      const PointModes px = exp_h_modes_at(h_, z + off[i] * e, K);
      const PointModes py = exp_h_modes_at(h_, z + kI * (off[i] * e), K);
      for (int k = 0; k <= K; ++k) {
        dx[k] += w[i] * px.beta[k];
        dy[k] += w[i] * py.beta[k];
      }
    }
    cplx out = 0.0;
    for (int j = 0; j <= K && j < plain_slots_; ++j) {
      const cplx dbeta = 0.5 * (dx[j] - kI * dy[j]) / (12.0 * e);
      out += dbeta * v(j) + c.beta[j] * dv(j);
    }
    return out;
  }

 private:
  BcOptions options(int slots) const {
    BcOptions o = cfg_.bc_options();
    o.derivatives = true;
    o.slots_out = slots;
    return o;
  }

  const IntegratingFactor& h_;
  RunConfig cfg_;
  ModeBank bank_;
  ModeBank gamma_;
  SeqBoundary even_, odd_;
  int plain_slots_, n_odd_, n_even_;
  BukhgeimCauchy bc_even_, bc_odd_;
};

double g0_defect_of(const AttenuatedSystem& sys, const ScalarField& a, const RunConfig& cfg) {
  const int stride = std::max(1, cfg.n_boundary / cfg.g0_nodes);
  std::vector<int> nodes;
  for (int j = 0; j < cfg.n_boundary; j += stride) nodes.push_back(j);
  std::vector<double> defect(nodes.size(), 0.0);
  parallel_for(nodes.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const int j = nodes[i];
      const cplx zeta = unit(kTwoPi * j / cfg.n_boundary);
      double u[3];
      for (int r = 0; r < 3; ++r) {
        const cplx z = (cfg.g0_radius - r * cfg.g0_spacing) * zeta;
        const double av = a.value(z);
        if (!(av > 0.0)) throw DomainError("attenuation must be positive where u_0 is sampled");
        u[r] = -2.0 * sys.du_minus1(z).real() / av;
      }
      // Quadratic extrapolation from r0, r0 - dr, r0 - 2dr to the circle.
      const double t = (1.0 - cfg.g0_radius) / cfg.g0_spacing;
      const double l0 = (t + 1) * (t + 2) / 2.0, l1 = -t * (t + 2), l2 = t * (t + 1) / 2.0;
      const double limit = l0 * u[0] + l1 * u[1] + l2 * u[2];
      defect[i] = std::abs(limit - sys.bank().at(j, 0).real());
    }
  });
  return *std::max_element(defect.begin(), defect.end());
}

RangeReport attenuated_range(const AttenuatedSystem& sys, const ScalarField& a, const RunConfig& cfg) {
  RangeReport r;
  r.attenuated = true;
  r.residual_even = range_residual(sys.even());
  r.residual_odd = range_residual(sys.odd());
  r.g0_defect = g0_defect_of(sys, a, cfg);
  if (!(r.residual_even < cfg.tol_range)) r.failed.push_back("even");
  if (!(r.residual_odd < cfg.tol_range)) r.failed.push_back("odd");
  if (!(r.g0_defect < cfg.tol_g0)) r.failed.push_back("g0_limit");
  return r;
}

std::string describe_failure(const RangeReport& r) {
  std::string s = "data not in range; failed:";
  for (const auto& f : r.failed) s += " " + f;
  return s;
}

}  // namespace

RangeReport check_range_nonatt(const Sinogram& g, const RunConfig& cfg) {
  check_compatible(g, cfg);
  const ModeBank bank = angular_decompose(g, cfg.n_mode);
  const SequenceSet set = build_sequences(bank, cfg.m_max, cfg.m_seq);
  RangeReport r;
  r.residual_even = range_residual(set.even);
  r.residual_odd = range_residual(set.odd);
  if (!(r.residual_even < cfg.tol_range)) r.failed.push_back("even");
  if (!(r.residual_odd < cfg.tol_range)) r.failed.push_back("odd");
  for (std::size_t m = 0; m < set.augmented.size(); ++m) {
    r.residual_aug.push_back(range_residual(set.augmented[m]));
    if (!(r.residual_aug.back() < cfg.tol_range)) r.failed.push_back("augmented_" + std::to_string(m + 1));
  }
  return r;
}

RangeReport check_range_att(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg) {
  check_compatible(g, cfg);
  const AttenuatedSystem sys(g, h, cfg);
  return attenuated_range(sys, *h.attenuation(), cfg);
}

double g0_limit_defect(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg) {
  check_compatible(g, cfg);
  const AttenuatedSystem sys(g, h, cfg);
  return g0_defect_of(sys, *h.attenuation(), cfg);
}

double zero_tensor_residual(const Sinogram& g, const RunConfig& cfg) {
  check_compatible(g, cfg);
  const ModeBank bank = angular_decompose(g, cfg.n_mode);
  return range_residual(make_sequence(bank, SeqKind::zero_tensor, cfg.m_seq));
}

ReconstructionReport reconstruct_nonatt(const Sinogram& g, const RunConfig& cfg) {
  cfg.validate();
  ReconstructionReport rep;
  rep.range = check_range_nonatt(g, cfg);
  rep.metrics = rep.range.metrics();
  if (!rep.range.pass()) {
    rep.rejection = describe_failure(rep.range);
    return rep;
  }
  const GridPtr grid = mask_grid(cfg);
  const ModeBank bank = angular_decompose(g, cfg.n_mode);
  const SequenceSet set = build_sequences(bank, cfg.m_max, cfg.m_seq);

  BcOptions opt = cfg.bc_options();
  opt.derivatives = true;
  opt.slots_out = 1;
  const TailField u_even = bukhgeim_cauchy(set.even, grid, opt);
  const PoissonExtension u0(bank.mode(0));

  rep.F = VectorFieldGrid(grid);
  rep.u0 = ScalarFieldGrid(grid);
  for (std::size_t idx : grid->nodes()) {
    const cplx z = grid->point(idx);
    const cplx f1 = u0.dbar(z) + u_even.d[u_even.offset(idx, 0)];
    rep.F.set(idx, 2.0 * f1);
    rep.u0.set(idx, u0.value(z).real());
  }

  // Conjugation identity on a coarse lattice.
  const auto coarse = std::make_shared<InteriorGrid>(cfg.conjugacy_pitch, 1.0 - cfg.mask_margin);
  BcOptions head = cfg.bc_options();
  head.slots_out = 1;
  std::vector<TailField> heads;
  for (const auto& aug : set.augmented) heads.push_back(bukhgeim_cauchy(aug, coarse, head));
  BcOptions odd_opt = cfg.bc_options();
  odd_opt.slots_out = cfg.m_max;
  rep.metrics.set("conjugacy_defect", conjugacy_defect(heads, bukhgeim_cauchy(set.odd, coarse, odd_opt)));
  rep.metrics.set("nodes", static_cast<double>(rep.F.grid->nodes().size()));
  rep.accepted = true;
  return rep;
}

ReconstructionReport reconstruct_att(const Sinogram& g, const ScalarFieldPtr& a, const RunConfig& cfg) {
  if (!a) throw ConfigError("attenuated reconstruction needs an attenuation");
  HOptions ho = cfg.h_options();
  ho.n_angles = g.n_angles;
  const IntegratingFactor h(a, ho);
  return reconstruct_att(g, h, cfg);
}

ReconstructionReport reconstruct_att(const Sinogram& g, const IntegratingFactor& h, const RunConfig& cfg) {
  cfg.validate();
  check_compatible(g, cfg);
  const ScalarField& a = *h.attenuation();
  const GridPtr grid = mask_grid(cfg);
  for (std::size_t idx : grid->nodes())
    if (!(a.value(grid->point(idx)) > 0.0)) throw DomainError("attenuation must be positive on the mask");

  ReconstructionReport rep;
  const AttenuatedSystem sys(g, h, cfg);
  rep.range = attenuated_range(sys, a, cfg);
  rep.metrics = rep.range.metrics();
  if (!rep.range.pass()) {
    rep.rejection = describe_failure(rep.range);
    return rep;
  }

  const GridPtr grid_h = widened(grid, 5);
  const GridPtr grid_v = widened(grid, 3);
  const HModeField modes = exp_h_modes(h, grid_h, cfg.k_h);
  const HModeDerivatives dmodes = differentiate_modes(modes);
  const TailField v = sys.v_tail(grid_v);
  const TailField u = mode_convolution(v, modes, dmodes, ConvDirection::u_from_v, 4);

  ScalarFieldGrid u0_wide(grid_v);
  for (std::size_t idx = 0; idx < grid_v->size(); ++idx) {
    if (!u.ok(idx)) continue;
    const double av = a.value(grid_v->point(idx));
    if (!(av > 0.0)) continue;
    u0_wide.set(idx, -2.0 * u.d[u.offset(idx, 0)].real() / av);
  }
  const WirtingerResult du0 = wirtinger(u0_wide);

  rep.F = VectorFieldGrid(grid);
  rep.u0 = ScalarFieldGrid(grid);
  std::size_t dropped = 0;
  for (std::size_t idx : grid->nodes()) {
    if (!du0.dbar.ok(idx) || !u.ok(idx)) {
      ++dropped;
      continue;
    }
    const double av = a.value(grid->point(idx));
    const cplx f1 = du0.dbar.values[idx] + u.d[u.offset(idx, 1)] + av * u.values[u.offset(idx, 0)];
    rep.F.set(idx, 2.0 * f1);
    rep.u0.set(idx, u0_wide.values[idx]);
  }
  // dbar u_-n + d u_-n-2 + a u_-n-1 = 0 for n = 1, 2 on the mask.
  double system_defect = 0.0;
  for (std::size_t idx : grid->nodes()) {
    if (!u.ok(idx)) continue;
    const double av = a.value(grid->point(idx));
    for (int n = 0; n < 2; ++n)
      system_defect = std::max(system_defect, std::abs(u.dbar[u.offset(idx, n)] + u.d[u.offset(idx, n + 2)] +
                                                       av * u.values[u.offset(idx, n + 1)]));
  }
  rep.metrics.set("u_system_defect", system_defect);
  rep.metrics.set("trace_defect", sys.trace_defect());
  rep.metrics.set("negative_mass_alpha", modes.negative_alpha);
  rep.metrics.set("negative_mass_beta", modes.negative_beta);
  rep.metrics.set("h_tail_mass", modes.tail);
  rep.metrics.set("nodes", static_cast<double>(grid->nodes().size() - dropped));
  rep.metrics.set("dropped_nodes", static_cast<double>(dropped));
  rep.accepted = true;
  return rep;
}

ConfusionPair confusion_field(const ScalarFieldPtr& psi, const ScalarFieldPtr& a) {
  if (!psi || !a) throw ConfigError("confusion field needs both psi and the attenuation");
  const auto support = psi->support();
  if (support.empty()) throw ConfigError("f must factor as a * psi with psi compactly supported");
  for (const auto& d : support)
    if (std::abs(d.center) + d.radius > 1.0 + 1e-12) throw ConfigError("psi must be supported inside the disk");
  return {make_product(a, psi), make_gradient_field(psi, -1.0)};
}

double curl_defect(const VectorFieldGrid& F_a, const VectorFieldGrid& F_b) {
  if (!F_a.grid->same_lattice(*F_b.grid)) throw ConfigError("fields live on different lattices");
  ComplexFieldGrid diff(F_a.grid), base(F_a.grid);
  for (std::size_t idx = 0; idx < F_a.grid->size(); ++idx)
    if (F_a.ok(idx) && F_b.ok(idx)) {
      diff.set(idx, F_a.at(idx) - F_b.at(idx));
      base.set(idx, F_b.at(idx));
    }
  // curl G = Im(2 d G) for G packed as G1 + i G2.
  const WirtingerResult wd = wirtinger(diff);
  const WirtingerResult wb = wirtinger(base);
  double num = 0.0, den = 0.0;
  for (std::size_t idx = 0; idx < F_a.grid->size(); ++idx) {
    if (!wd.d.ok(idx)) continue;
    num += std::pow(2.0 * wd.d.values[idx].imag(), 2);
    den += std::pow(2.0 * wb.d.values[idx].imag(), 2);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num * F_a.grid->pitch() * F_a.grid->pitch());
}

double relative_l2_error(const VectorFieldGrid& F, const VectorFieldGrid& truth, double radius) {
  if (!F.grid->same_lattice(*truth.grid)) throw ConfigError("fields live on different lattices");
  double num = 0.0, den = 0.0;
  for (std::size_t idx = 0; idx < F.grid->size(); ++idx) {
    if (!F.ok(idx) || !truth.ok(idx) || std::abs(F.grid->point(idx)) > radius) continue;
    num += std::norm(F.at(idx) - truth.at(idx));
    den += std::norm(truth.at(idx));
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace aatomo
