#include "aatomo/aanalytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "aatomo/parallel.hpp"

namespace aatomo {

int slot_mode(SeqKind kind, int m, int slot) {
  switch (kind) {
    case SeqKind::plain:
      return -(slot + 1);
    case SeqKind::even:
      return -2 * (slot + 1);
    case SeqKind::odd:
      return -(2 * slot + 1);
    case SeqKind::augmented:
      return slot < m ? 2 * (m - slot) - 1 : -(2 * (slot - m) + 1);
    case SeqKind::zero_tensor:
      return -2 * slot;
  }
  return 0;
}

SeqBoundary::SeqBoundary(int n_boundary_, int slots_, SeqKind kind_, int m_)
    : n_boundary(n_boundary_), slots(slots_), kind(kind_), m(m_) {
  if (n_boundary < 8 || n_boundary % 2) throw ConfigError("boundary node count must be even and >= 8");
  if (slots < 1) throw ConfigError("a boundary sequence needs at least one slot");
  if (kind == SeqKind::augmented && (m < 1 || m > slots)) throw ConfigError("augmentation depth out of range");
  terms.assign(static_cast<std::size_t>(n_boundary) * slots, 0.0);
}

std::vector<cplx> SeqBoundary::slot(int s) const {
  std::vector<cplx> out(n_boundary);
  for (int j = 0; j < n_boundary; ++j) out[j] = at(j, s);
  return out;
}

void SeqBoundary::set_slot(int s, std::span<const cplx> values) {
  if (static_cast<int>(values.size()) != n_boundary) throw ConfigError("slot length mismatch");
  for (int j = 0; j < n_boundary; ++j) at(j, s) = values[j];
}

double SeqBoundary::slot_rms(int s) const {
  double acc = 0.0;
  for (int j = 0; j < n_boundary; ++j) acc += std::norm(at(j, s));
  return std::sqrt(acc / n_boundary);
}

double SeqBoundary::norm() const {
  double best = 0.0;
  for (int s = 0; s < slots; ++s) best = std::max(best, slot_rms(s));
  return best;
}

SeqBoundary make_sequence(const ModeBank& bank, SeqKind kind, int slots, int m) {
  SeqBoundary seq(bank.n_boundary, slots, kind, m);
  for (int s = 0; s < slots; ++s) {
    const int n = slot_mode(kind, m, s);
    if (std::abs(n) > bank.n_mode)
      throw ConfigError("mode " + std::to_string(n) + " lies outside a bank of width " + std::to_string(bank.n_mode));
    for (int j = 0; j < bank.n_boundary; ++j) seq.at(j, s) = bank.at(j, n);
  }
  return seq;
}

SequenceSet build_sequences(const ModeBank& bank, int m_max, int m_seq) {
  if (m_seq < 1 || m_max < 1) throw ConfigError("sequence length and augmentation depth must be positive");
  if (bank.n_mode < 2 * m_seq || bank.n_mode < 2 * m_max - 1)
    throw ConfigError("mode bank of width " + std::to_string(bank.n_mode) + " cannot supply " +
                      std::to_string(m_seq) + " slots with augmentation depth " + std::to_string(m_max));
  SequenceSet set;
  set.even = make_sequence(bank, SeqKind::even, m_seq);
  set.odd = make_sequence(bank, SeqKind::odd, m_seq);
  for (int m = 1; m <= m_max; ++m) set.augmented.push_back(make_sequence(bank, SeqKind::augmented, m_seq, m));
  return set;
}

SeqBoundary trace_sequence(int n_boundary, int slots, const std::function<cplx(cplx, int)>& value) {
  SeqBoundary seq(n_boundary, slots);
  for (int j = 0; j < n_boundary; ++j) {
    const cplx zeta = unit(kTwoPi * j / n_boundary);
    for (int s = 0; s < slots; ++s) seq.at(j, s) = value(zeta, s);
  }
  return seq;
}

TailField::TailField(GridPtr g, int slots_, bool with_derivatives)
    : grid(std::move(g)), slots(slots_), has_derivatives(with_derivatives) {
  const std::size_t n = grid->size() * static_cast<std::size_t>(slots);
  values.assign(n, 0.0);
  if (with_derivatives) {
    dbar.assign(n, 0.0);
    d.assign(n, 0.0);
  }
  valid.assign(grid->size(), 0);
}

namespace {

ComplexFieldGrid extract(const TailField& t, const std::vector<cplx>& plane, int s) {
  if (s < 0 || s >= t.slots) throw ConfigError("tail slot out of range");
  if (plane.empty()) throw ConfigError("tail carries no derivative planes");
  ComplexFieldGrid out(t.grid);
  for (std::size_t idx = 0; idx < t.grid->size(); ++idx)
    if (t.ok(idx)) out.set(idx, plane[t.offset(idx, s)]);
  return out;
}

}  // namespace

ComplexFieldGrid TailField::plane(int s) const { return extract(*this, values, s); }
ComplexFieldGrid TailField::dbar_plane(int s) const { return extract(*this, dbar, s); }
ComplexFieldGrid TailField::d_plane(int s) const { return extract(*this, d, s); }

BukhgeimCauchy::BukhgeimCauchy(SeqBoundary seq, BcOptions opt) : seq_(std::move(seq)), opt_(opt) {
  active_slots_ = 0;
  for (int s = seq_.slots - 1; s >= 0 && active_slots_ == 0; --s)
    for (int j = 0; j < seq_.n_boundary; ++j)
      if (seq_.at(j, s) != cplx{}) {
        active_slots_ = s + 1;
        break;
      }
  levels_.resize(opt_.max_level + 1);
}

int BukhgeimCauchy::level_for(cplx z) const {
  const double dist = 1.0 - std::abs(z);
  if (dist <= 0.0) throw DomainError("Bukhgeim-Cauchy evaluation point must lie inside the disk");
  const double need = (opt_.kappa * active_slots_ + opt_.c0) / dist;
  int l = 0;
  while (l < opt_.max_level && seq_.n_boundary * (1 << l) < need) ++l;
  return l;
}

const BukhgeimCauchy::Level& BukhgeimCauchy::level(int l) const {
  std::lock_guard guard(lock_);
  if (levels_[l]) return *levels_[l];
  auto lv = std::make_unique<Level>();
  const int factor = 1 << l;
  lv->n = seq_.n_boundary * factor;
  lv->x.resize(lv->n);
  lv->y.resize(lv->n);
  for (int q = 0; q < lv->n; ++q) {
    const cplx zeta = unit(kTwoPi * q / lv->n);
    lv->x[q] = zeta.real();
    lv->y[q] = zeta.imag();
  }
  const int M = active_slots_;
  const std::size_t n = static_cast<std::size_t>(lv->n);
  lv->re.assign(n * M, 0.0);
  lv->im.assign(n * M, 0.0);
  for (int s = 0; s < M; ++s) {
    const auto fine = upsample_periodic(seq_.slot(s), factor);
    for (std::size_t q = 0; q < n; ++q) {
      lv->re[s * n + q] = fine[q].real();
      lv->im[s * n + q] = fine[q].imag();
    }
  }
  levels_[l] = std::move(lv);
  return *levels_[l];
}

void BukhgeimCauchy::evaluate(cplx z, int n_out, cplx* value, cplx* dbar, cplx* d) const {
  const bool derivs = dbar != nullptr && d != nullptr;
  for (int n = 0; n < n_out; ++n) {
    value[n] = 0.0;
    if (derivs) dbar[n] = d[n] = 0.0;
  }
  const int M = active_slots_;
  if (M == 0) return;
  const Level& lv = level(level_for(z));
  const int out = std::min(n_out, M);
  const std::size_t N = static_cast<std::size_t>(lv.n);

  // Per-node kernel factors: c = 1/(zeta - z), w = conj(zeta - z) c, dzeta = i zeta.
  thread_local std::vector<double> buf;
  buf.assign(12 * N, 0.0);
  double* cr = buf.data();
  double* ci = cr + N;
  double* wr = ci + N;
  double* wi = wr + N;
  double* c2r = wi + N;
  double* c2i = c2r + N;
  double* Sr = c2i + N;
  double* Si = Sr + N;
  double* Pr = Si + N;
  double* Pi = Pr + N;
  const double* xs = lv.x.data();
  const double* ys = lv.y.data();
  for (std::size_t q = 0; q < N; ++q) {
    const double ur = xs[q] - z.real(), ui = ys[q] - z.imag();
    const double inv = 1.0 / (ur * ur + ui * ui);
    cr[q] = ur * inv;
    ci[q] = -ui * inv;
    wr[q] = (ur * ur - ui * ui) * inv;
    wi[q] = -2.0 * ur * ui * inv;
    c2r[q] = cr[q] * cr[q] - ci[q] * ci[q];
    c2i[q] = 2.0 * cr[q] * ci[q];
  }

  for (int n = M - 1; n >= 0; --n) {
    const double* gr = lv.re.data() + n * N;
    const double* gi = lv.im.data() + n * N;
    if (n >= out) {
      if (derivs) {
        for (std::size_t q = 0; q < N; ++q) {
          const double sr = Sr[q], si = Si[q], pr = Pr[q], pi = Pi[q];
          Sr[q] = gr[q] + wr[q] * sr - wi[q] * si;
          Si[q] = gi[q] + wr[q] * si + wi[q] * sr;
          Pr[q] = sr + wr[q] * pr - wi[q] * pi;
          Pi[q] = si + wr[q] * pi + wi[q] * pr;
        }
      } else {
        for (std::size_t q = 0; q < N; ++q) {
          const double sr = Sr[q], si = Si[q];
          Sr[q] = gr[q] + wr[q] * sr - wi[q] * si;
          Si[q] = gi[q] + wr[q] * si + wi[q] * sr;
        }
      }
      continue;
    }
    // A = S_n dzeta - S_{n+1} conj(dzeta); B likewise for S'.
    double vr = 0, vi = 0, dr = 0, di = 0, br = 0, bi = 0;
    for (std::size_t q = 0; q < N; ++q) {
      const double sr = Sr[q], si = Si[q];
      const double nr = gr[q] + wr[q] * sr - wi[q] * si;
      const double ni = gi[q] + wr[q] * si + wi[q] * sr;
      // i zeta = (-y, x); conj = (-y, -x)
      const double x = xs[q], y = ys[q];
      const double ar = (-y * nr - x * ni) - (-y * sr + x * si);
      const double ai = (x * nr - y * ni) - (-x * sr - y * si);
      vr += cr[q] * ar - ci[q] * ai;
      vi += cr[q] * ai + ci[q] * ar;
      Sr[q] = nr;
      Si[q] = ni;
      if (derivs) {
        const double pr = Pr[q], pi = Pi[q];
        const double mr = sr + wr[q] * pr - wi[q] * pi;
        const double mi = si + wr[q] * pi + wi[q] * pr;
        const double b_r = (-y * mr - x * mi) - (-y * pr + x * pi);
        const double b_i = (x * mr - y * mi) - (-x * pr - y * pi);
        const double tr = ar + wr[q] * b_r - wi[q] * b_i;
        const double ti = ai + wr[q] * b_i + wi[q] * b_r;
        dr += c2r[q] * tr - c2i[q] * ti;
        di += c2r[q] * ti + c2i[q] * tr;
        br -= c2r[q] * b_r - c2i[q] * b_i;
        bi -= c2r[q] * b_i + c2i[q] * b_r;
        Pr[q] = mr;
        Pi[q] = mi;
      }
    }
    value[n] = {vr, vi};
    if (derivs) {
      d[n] = {dr, di};
      dbar[n] = {br, bi};
    }
  }
  // (1 / 2 pi i) * (2 pi / N_q)
  const cplx scale = -kI / static_cast<double>(lv.n);
  for (int n = 0; n < out; ++n) {
    value[n] *= scale;
    if (derivs) {
      dbar[n] *= scale;
      d[n] *= scale;
    }
  }
}

TailField BukhgeimCauchy::on_grid(const GridPtr& grid) const {
  const int n_out = opt_.slots_out < 0 ? seq_.slots : std::min(opt_.slots_out, seq_.slots);
  TailField tail(grid, n_out, opt_.derivatives);
  const auto& nodes = grid->nodes();
  // Warm the quadrature levels serially so workers only read them.
  for (std::size_t idx : nodes) (void)level(level_for(grid->point(idx)));
  parallel_for(nodes.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t idx = nodes[i];
      const std::size_t off = tail.offset(idx, 0);
      if (opt_.derivatives)
        evaluate(grid->point(idx), n_out, &tail.values[off], &tail.dbar[off], &tail.d[off]);
      else
        evaluate(grid->point(idx), n_out, &tail.values[off], nullptr, nullptr);
      tail.valid[idx] = 1;
    }
  });
  return tail;
}

TailField bukhgeim_cauchy(const SeqBoundary& seq, const GridPtr& grid, const BcOptions& opt) {
  return BukhgeimCauchy(seq, opt).on_grid(grid);
}

SeqBoundary aanalytic_hilbert(const SeqBoundary& seq) {
  const int N = seq.n_boundary;
  const int M = seq.slots;
  // Data at the midpoints beta_q + pi / N_b.
  std::vector<cplx> mid(static_cast<std::size_t>(N) * M);
  for (int s = 0; s < M; ++s) {
    const auto shifted = shift_periodic(seq.slot(s), 0.5);
    for (int q = 0; q < N; ++q) mid[static_cast<std::size_t>(q) * M + s] = shifted[q];
  }
  std::vector<cplx> zeta(N);
  for (int q = 0; q < N; ++q) zeta[q] = unit(kTwoPi * (q + 0.5) / N);
  SeqBoundary out(N, M, seq.kind, seq.m);
  const double dbeta = kTwoPi / N;
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    std::vector<cplx> S(M + 1), acc(M);
    for (std::size_t i = b; i < e; ++i) {
      const cplx xi = unit(kTwoPi * static_cast<double>(i) / N);
      std::fill(acc.begin(), acc.end(), cplx{});
      for (int q = 0; q < N; ++q) {
        const cplx dz = kI * zeta[q] * dbeta;
        const cplx dzb = std::conj(dz);
        const cplx diff = zeta[q] - xi;
        const cplx c = 1.0 / diff;
        const cplx w = std::conj(diff) * c;
        const cplx bracket = dz * c - dzb / std::conj(diff);
        const cplx* g = &mid[static_cast<std::size_t>(q) * M];
        S[M] = 0.0;
        for (int n = M - 1; n >= 0; --n) S[n] = g[n] + w * S[n + 1];
        for (int n = 0; n < M; ++n) acc[n] += g[n] * c * dz + bracket * w * S[n + 1];
      }
      for (int n = 0; n < M; ++n) out.at(static_cast<int>(i), n) = acc[n] / kPi;
    }
  });
  return out;
}

SeqBoundary range_defect(const SeqBoundary& seq) {
  SeqBoundary h = aanalytic_hilbert(seq);
  for (std::size_t i = 0; i < h.terms.size(); ++i) h.terms[i] = seq.terms[i] + kI * h.terms[i];
  return h;
}

double range_residual(const SeqBoundary& seq) {
  return range_defect(seq).norm() / std::max(1.0, seq.norm());
}

double conjugacy_defect(const std::vector<TailField>& augmented_tails, const TailField& odd_tail) {
  double worst = 0.0;
  for (std::size_t mi = 0; mi < augmented_tails.size(); ++mi) {
    const TailField& aug = augmented_tails[mi];
    const int slot = static_cast<int>(mi);
    if (slot >= odd_tail.slots) throw ConfigError("odd tail too short for the augmentation depth");
    if (!aug.grid->same_lattice(*odd_tail.grid)) throw ConfigError("tails live on different lattices");
    for (std::size_t idx = 0; idx < aug.grid->size(); ++idx) {
      if (!aug.ok(idx) || !odd_tail.ok(idx)) continue;
      worst = std::max(worst, std::abs(aug.value(idx, 0) - std::conj(odd_tail.value(idx, slot))));
    }
  }
  return worst;
}

void write_tail_field(const std::string& path, const TailField& tail) {
  auto dump = [&](const std::string& p, const std::vector<cplx>& plane) {
    std::ofstream out(p);
    if (!out) throw FormatError("cannot write " + p);
    out << "x1,x2,slot,re,im\n";
    char buf[160];
    for (std::size_t idx = 0; idx < tail.grid->size(); ++idx) {
      if (!tail.ok(idx)) continue;
      const cplx z = tail.grid->point(idx);
      for (int s = 0; s < tail.slots; ++s) {
        const cplx v = plane[tail.offset(idx, s)];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g\n", z.real(), z.imag(), s, v.real(), v.imag());
        out << buf;
      }
    }
  };
  dump(path, tail.values);
  if (tail.has_derivatives) {
    dump(path + ".dbar", tail.dbar);
    dump(path + ".d", tail.d);
  }
}

}  // namespace aatomo
