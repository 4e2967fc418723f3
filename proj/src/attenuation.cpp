#include "aatomo/attenuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "aatomo/geometry.hpp"
#include "aatomo/parallel.hpp"
#include "quadrature.hpp"

namespace aatomo {

IntegratingFactor::IntegratingFactor(ScalarFieldPtr a, HOptions opt) : a_(std::move(a)), opt_(opt) {
  if (!a_) throw ConfigError("integrating factor needs an attenuation");
  if (opt_.n_angles < 8) throw ConfigError("too few directions for the integrating factor");
  radon_ = radon_transform(*a_, opt_.n_angles, opt_.radon_half_width, opt_.radon_samples, opt_.ray_step);
  hilbert_.assign(radon_.values.size(), 0.0);
  parallel_for(static_cast<std::size_t>(opt_.n_angles), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const auto row = line_hilbert(radon_.row(static_cast<int>(k)), opt_.hilbert_pad);
      std::copy(row.begin(), row.end(), hilbert_.begin() + static_cast<std::ptrdiff_t>(k * radon_.n_s));
    }
  });
}

cplx IntegratingFactor::h(cplx z, int k) const {
  const double phi = kTwoPi * k / opt_.n_angles;
  const cplx theta = unit(phi);
  double s = dot(z, kI * theta);
  if (opt_.flip_perp) s = -s;
  const double tau = chord_times(z, phi).tau_plus;
  const double da = tau > 0.0 ? detail::gauss_line(*a_, z, theta, 0.0, tau) : 0.0;
  const std::size_t off = static_cast<std::size_t>(k) * radon_.n_s;
  const std::span<const double> ra(radon_.values.data() + off, radon_.n_s);
  const std::span<const double> hra(hilbert_.data() + off, radon_.n_s);
  const double x0 = -radon_.half_width, dx = radon_.ds();
  return da - 0.5 * (cubic_interpolate(ra, x0, dx, s) - kI * cubic_interpolate(hra, x0, dx, s));
}

void IntegratingFactor::h_all(cplx z, std::span<cplx> out) const {
  for (int k = 0; k < opt_.n_angles; ++k) out[k] = h(z, k);
}

HField compute_h(const IntegratingFactor& h, std::span<const cplx> points) {
  HField out{{points.begin(), points.end()}, h.n_angles(), {}};
  out.values.assign(points.size() * static_cast<std::size_t>(h.n_angles()), 0.0);
  parallel_for(points.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p)
      h.h_all(points[p], std::span<cplx>(out.values.data() + p * h.n_angles(), h.n_angles()));
  });
  return out;
}

PointModes exp_h_modes(std::span<const cplx> h_row, int k_h) {
  const int n = static_cast<int>(h_row.size());
  if (n < 2 * k_h + 2) throw ConfigError("exp(h) modes need N_phi >= 2 K_h + 2");
  std::vector<cplx> em(n), ep(n);
  for (int k = 0; k < n; ++k) {
    em[k] = std::exp(-h_row[k]);
    ep[k] = std::exp(h_row[k]);
  }
  fft(em);
  fft(ep);
  PointModes pm;
  pm.alpha.resize(k_h + 1);
  pm.beta.resize(k_h + 1);
  const double inv = 1.0 / n;
  for (int k = 0; k <= k_h; ++k) {
    pm.alpha[k] = em[k] * inv;
    pm.beta[k] = ep[k] * inv;
  }
  for (int k = 1; k <= k_h; ++k) {
    pm.negative_alpha += std::abs(em[n - k]) * inv;
    pm.negative_beta += std::abs(ep[n - k]) * inv;
  }
  for (int k = k_h + 1; k <= n / 2; ++k) pm.tail += (std::abs(em[k]) + std::abs(ep[k])) * inv;
  return pm;
}

PointModes exp_h_modes_at(const IntegratingFactor& h, cplx z, int k_h) {
  std::vector<cplx> row(h.n_angles());
  h.h_all(z, row);
  return exp_h_modes(row, k_h);
}

namespace {

ComplexFieldGrid mode_plane(const HModeField& m, const std::vector<cplx>& v, int k) {
  ComplexFieldGrid out(m.grid);
  for (std::size_t idx = 0; idx < m.grid->size(); ++idx)
    if (m.ok(idx)) out.set(idx, v[m.offset(idx, k)]);
  return out;
}

}  // namespace

ComplexFieldGrid HModeField::alpha_plane(int k) const { return mode_plane(*this, alpha, k); }
ComplexFieldGrid HModeField::beta_plane(int k) const { return mode_plane(*this, beta, k); }

HModeField exp_h_modes(const IntegratingFactor& h, const GridPtr& grid, int k_h) {
  HModeField m;
  m.grid = grid;
  m.k_h = k_h;
  const std::size_t per = static_cast<std::size_t>(k_h + 1);
  m.alpha.assign(grid->size() * per, 0.0);
  m.beta.assign(grid->size() * per, 0.0);
  m.valid.assign(grid->size(), 0);
  const auto& nodes = grid->nodes();
  std::vector<double> neg_a(nodes.size()), neg_b(nodes.size()), tail(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t b, std::size_t e) {
    std::vector<cplx> row(h.n_angles());
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t idx = nodes[i];
      h.h_all(grid->point(idx), row);
      const PointModes pm = exp_h_modes(row, k_h);
      std::copy(pm.alpha.begin(), pm.alpha.end(), m.alpha.begin() + static_cast<std::ptrdiff_t>(idx * per));
      std::copy(pm.beta.begin(), pm.beta.end(), m.beta.begin() + static_cast<std::ptrdiff_t>(idx * per));
      neg_a[i] = pm.negative_alpha;
      neg_b[i] = pm.negative_beta;
      tail[i] = pm.tail;
      m.valid[idx] = 1;
    }
  });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    m.negative_alpha = std::max(m.negative_alpha, neg_a[i]);
    m.negative_beta = std::max(m.negative_beta, neg_b[i]);
    m.tail = std::max(m.tail, tail[i]);
  }
  return m;
}

std::vector<PointModes> exp_h_modes(const HField& h, int k_h) {
  std::vector<PointModes> out;
  out.reserve(h.points.size());
  for (std::size_t p = 0; p < h.points.size(); ++p)
    out.push_back(exp_h_modes(std::span<const cplx>(h.values.data() + p * h.n_angles, h.n_angles), k_h));
  return out;
}

HModeDerivatives differentiate_modes(const HModeField& modes) {
  HModeDerivatives d;
  d.grid = modes.grid;
  d.k_h = modes.k_h;
  const std::size_t per = static_cast<std::size_t>(modes.k_h + 1);
  const std::size_t n = modes.grid->size() * per;
  d.alpha_dbar.assign(n, 0.0);
  d.alpha_d.assign(n, 0.0);
  d.beta_dbar.assign(n, 0.0);
  d.beta_d.assign(n, 0.0);
  d.valid.assign(modes.grid->size(), 0);
  for (int k = 0; k <= modes.k_h; ++k) {
    const WirtingerResult wa = wirtinger(modes.alpha_plane(k));
    const WirtingerResult wb = wirtinger(modes.beta_plane(k));
    for (std::size_t idx = 0; idx < modes.grid->size(); ++idx) {
      if (!wa.dbar.ok(idx)) continue;
      const std::size_t off = modes.offset(idx, k);
      d.alpha_dbar[off] = wa.dbar.values[idx];
      d.alpha_d[off] = wa.d.values[idx];
      d.beta_dbar[off] = wb.dbar.values[idx];
      d.beta_d[off] = wb.d.values[idx];
      if (k == 0) d.valid[idx] = 1;
    }
  }
  return d;
}

double HIdentityReport::max_recurrence() const {
  return std::max({beta0, beta1, beta_recurrence, alpha0, alpha1, alpha_recurrence});
}

HIdentityReport verify_h_identities(const HModeField& modes, const ScalarField& a) {
  const HModeDerivatives d = differentiate_modes(modes);
  HIdentityReport r;
  const int K = modes.k_h;
  for (std::size_t idx = 0; idx < modes.grid->size(); ++idx) {
    if (!modes.ok(idx)) continue;
    const cplx* al = &modes.alpha[modes.offset(idx, 0)];
    const cplx* be = &modes.beta[modes.offset(idx, 0)];
    for (int k = 0; k <= std::min(5, K); ++k) {
      cplx s = 0.0;
      for (int m = 0; m <= k; ++m) s += al[m] * be[k - m];
      r.cauchy_product = std::max(r.cauchy_product, std::abs(s - (k == 0 ? 1.0 : 0.0)));
    }
    if (!d.ok(idx)) continue;
    const double av = a.value(modes.grid->point(idx));
    auto at = [&](const std::vector<cplx>& v, int k) { return v[modes.offset(idx, k)]; };
    r.beta0 = std::max(r.beta0, std::abs(at(d.beta_dbar, 0)));
    r.alpha0 = std::max(r.alpha0, std::abs(at(d.alpha_dbar, 0)));
    if (K >= 1) {
      r.beta1 = std::max(r.beta1, std::abs(at(d.beta_dbar, 1) + av * be[0]));
      r.alpha1 = std::max(r.alpha1, std::abs(at(d.alpha_dbar, 1) - av * al[0]));
    }
    for (int k = 0; k + 2 <= K; ++k) {
      r.beta_recurrence =
          std::max(r.beta_recurrence, std::abs(at(d.beta_dbar, k + 2) + at(d.beta_d, k) + av * be[k + 1]));
      r.alpha_recurrence =
          std::max(r.alpha_recurrence, std::abs(at(d.alpha_dbar, k + 2) + at(d.alpha_d, k) - av * al[k + 1]));
    }
  }
  return r;
}

double ray_derivative_defect(const IntegratingFactor& h, std::span<const cplx> points, std::span<const int> directions,
                             double eps) {
  if (points.size() != directions.size()) throw ConfigError("one direction per point expected");
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int k = directions[i];
    const cplx theta = unit(kTwoPi * k / h.n_angles());
    const cplx z = points[i];
    const cplx deriv = (h.h(z + eps * theta, k) - h.h(z - eps * theta, k)) / (2.0 * eps);
    worst = std::max(worst, std::abs(deriv + h.attenuation()->value(z)));
  }
  return worst;
}

namespace {

TailField convolve(const TailField& tail, const HModeField& modes, const HModeDerivatives* dm, ConvDirection dir,
                   int n_out) {
  if (!tail.grid->same_lattice(*modes.grid)) throw ConfigError("tail and modes live on different lattices");
  if (dm && !tail.has_derivatives) throw ConfigError("derivative convolution needs tail derivative planes");
  const int out_slots = n_out < 0 ? tail.slots : std::min(n_out, tail.slots);
  TailField out(tail.grid, out_slots, dm != nullptr);
  const std::vector<cplx>& c = dir == ConvDirection::u_from_v ? modes.beta : modes.alpha;
  const std::vector<cplx>* c_dbar = nullptr;
  const std::vector<cplx>* c_d = nullptr;
  if (dm) {
    c_dbar = dir == ConvDirection::u_from_v ? &dm->beta_dbar : &dm->alpha_dbar;
    c_d = dir == ConvDirection::u_from_v ? &dm->beta_d : &dm->alpha_d;
  }
  const int K = modes.k_h;
  for (std::size_t idx = 0; idx < tail.grid->size(); ++idx) {
    if (!tail.ok(idx) || !modes.ok(idx) || (dm && !dm->ok(idx))) continue;
    const std::size_t moff = modes.offset(idx, 0);
    for (int s = 0; s < out_slots; ++s) {
      cplx v = 0.0, vb = 0.0, vd = 0.0;
      for (int j = 0; j <= K && s + j < tail.slots; ++j) {
        const std::size_t t = tail.offset(idx, s + j);
        v += c[moff + j] * tail.values[t];
        if (dm) {
          vb += (*c_dbar)[moff + j] * tail.values[t] + c[moff + j] * tail.dbar[t];
          vd += (*c_d)[moff + j] * tail.values[t] + c[moff + j] * tail.d[t];
        }
      }
      const std::size_t o = out.offset(idx, s);
      out.values[o] = v;
      if (dm) {
        out.dbar[o] = vb;
        out.d[o] = vd;
      }
    }
    out.valid[idx] = 1;
  }
  return out;
}

}  // namespace

TailField mode_convolution(const TailField& tail, const HModeField& modes, ConvDirection dir, int n_out) {
  return convolve(tail, modes, nullptr, dir, n_out);
}

TailField mode_convolution(const TailField& tail, const HModeField& modes, const HModeDerivatives& dmodes,
                           ConvDirection dir, int n_out) {
  return convolve(tail, modes, &dmodes, dir, n_out);
}

ModeBank weighted_data_modes(const Sinogram& g, const IntegratingFactor& h, int n_mode) {
  if (g.n_angles != h.n_angles())
    throw ConfigError("sinogram and integrating factor use different direction grids");
  std::vector<cplx> weighted(g.values.size());
  parallel_for(static_cast<std::size_t>(g.n_boundary), [&](std::size_t b, std::size_t e) {
    std::vector<cplx> row(g.n_angles);
    for (std::size_t j = b; j < e; ++j) {
      h.h_all(unit(g.beta(static_cast<int>(j))), row);
      for (int k = 0; k < g.n_angles; ++k)
        weighted[j * g.n_angles + k] = std::exp(-row[k]) * g.at(static_cast<int>(j), k);
    }
  });
  return angular_decompose(weighted, g.n_boundary, g.n_angles, n_mode);
}

void write_hmode_field(const std::string& path, const HModeField& modes) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "x1,x2,k,alpha_re,alpha_im,beta_re,beta_im\n";
  char buf[200];
  for (std::size_t idx = 0; idx < modes.grid->size(); ++idx) {
    if (!modes.ok(idx)) continue;
    const cplx z = modes.grid->point(idx);
    for (int k = 0; k <= modes.k_h; ++k) {
      const cplx al = modes.alpha[modes.offset(idx, k)], be = modes.beta[modes.offset(idx, k)];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), k, al.real(),
                    al.imag(), be.real(), be.imag());
      out << buf;
    }
  }
}

}  // namespace aatomo
