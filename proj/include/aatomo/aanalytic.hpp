#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "aatomo/common.hpp"
#include "aatomo/geometry.hpp"
#include "aatomo/spectral.hpp"

namespace aatomo {

/// Which angular mode each slot of a boundary sequence carries.
///   plain:        g_-1, g_-2, g_-3, ...
///   even:         g_-2, g_-4, ...
///   odd:          g_-1, g_-3, ...
///   augmented(m): g_{2m-1}, ..., g_1, g_-1, g_-3, ...
///   zero_tensor:  g_0, g_-2, g_-4, ...
enum class SeqKind { plain, even, odd, augmented, zero_tensor };

int slot_mode(SeqKind kind, int m, int slot);

/// Sequence-valued boundary data, terms stored node-major.
struct SeqBoundary {
  int n_boundary = 0;
  int slots = 0;
  SeqKind kind = SeqKind::plain;
  int m = 0;
  std::vector<cplx> terms;

  SeqBoundary() = default;
  SeqBoundary(int n_boundary, int slots, SeqKind kind = SeqKind::plain, int m = 0);

  cplx& at(int j, int s) { return terms[static_cast<std::size_t>(j) * slots + s]; }
  cplx at(int j, int s) const { return terms[static_cast<std::size_t>(j) * slots + s]; }
  std::vector<cplx> slot(int s) const;
  void set_slot(int s, std::span<const cplx> values);
  int mode_of(int s) const { return slot_mode(kind, m, s); }
  /// Boundary RMS of one slot.
  double slot_rms(int s) const;
  /// Max over slots of the boundary RMS.
  double norm() const;
};

/// Slices a mode bank. Requires every addressed mode to lie inside the bank.
SeqBoundary make_sequence(const ModeBank& bank, SeqKind kind, int slots, int m = 0);

struct SequenceSet {
  SeqBoundary even;
  SeqBoundary odd;
  std::vector<SeqBoundary> augmented;  // m = 1 .. m_max
};

/// Needs N_mode >= 2 M_seq and N_mode >= 2 m_max - 1.
SequenceSet build_sequences(const ModeBank& bank, int m_max, int m_seq);

/// Boundary trace of a sequence given slot-wise by value(zeta, slot).
SeqBoundary trace_sequence(int n_boundary, int slots, const std::function<cplx(cplx, int)>& value);

/// Interior values of a truncated sequence-valued map, node-major.
struct TailField {
  GridPtr grid;
  int slots = 0;
  bool has_derivatives = false;
  std::vector<cplx> values, dbar, d;
  std::vector<std::uint8_t> valid;

  TailField() = default;
  TailField(GridPtr grid, int slots, bool with_derivatives);

  std::size_t offset(std::size_t idx, int s) const { return idx * static_cast<std::size_t>(slots) + s; }
  cplx value(std::size_t idx, int s) const { return values[offset(idx, s)]; }
  bool ok(std::size_t idx) const { return valid[idx] != 0; }
  /// Plane of one slot as a complex grid field.
  ComplexFieldGrid plane(int s) const;
  ComplexFieldGrid dbar_plane(int s) const;
  ComplexFieldGrid d_plane(int s) const;
};

struct BcOptions {
  /// Output slots; -1 means every slot of the sequence.
  int slots_out = -1;
  bool derivatives = false;
  /// Boundary quadrature refinement: N_q >= (kappa M + c0) / (1 - |z|).
  double kappa = 2.0;
  double c0 = 40.0;
  int max_level = 6;
};

/// Bukhgeim-Cauchy operator of a boundary sequence. Boundary data are refined by
/// trigonometric interpolation so the trapezoid rule resolves the kernel at
/// each evaluation point.
class BukhgeimCauchy {
 public:
  explicit BukhgeimCauchy(SeqBoundary seq, BcOptions opt = {});

  /// Slots [0, n_out) at z; dbar and d may be null when not wanted.
  void evaluate(cplx z, int n_out, cplx* value, cplx* dbar, cplx* d) const;
  TailField on_grid(const GridPtr& grid) const;

  int effective_slots() const { return active_slots_; }
  int level_for(cplx z) const;

 private:
  struct Level {
    int n = 0;
    std::vector<double> x, y;      // quadrature nodes
    std::vector<double> re, im;    // slot-major, n values per slot
  };
  const Level& level(int l) const;

  SeqBoundary seq_;
  BcOptions opt_;
  int active_slots_ = 0;
  mutable std::mutex lock_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

TailField bukhgeim_cauchy(const SeqBoundary& seq, const GridPtr& grid, const BcOptions& opt = {});

/// Hilbert transform for L-analytic boundary sequences, slot-relative.
SeqBoundary aanalytic_hilbert(const SeqBoundary& seq);

/// (I + iH) seq.
SeqBoundary range_defect(const SeqBoundary& seq);

/// Max over slots of the boundary RMS of (I + iH) seq, divided by max(1, norm(seq)).
double range_residual(const SeqBoundary& seq);

/// max over m and nodes of |head of augmented(m) tail - conj(slot m-1 of the odd tail)|.
double conjugacy_defect(const std::vector<TailField>& augmented_tails, const TailField& odd_tail);

void write_tail_field(const std::string& path, const TailField& tail);

}  // namespace aatomo
