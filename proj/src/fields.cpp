#include "aatomo/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace aatomo {

namespace {

std::string fmt_point(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", z.real(), z.imag());
  return buf;
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Bump final : public ScalarField {
 public:
  Bump(cplx c, double w, double amp, BumpKind kind) : c_(c), w_(w), amp_(amp), kind_(kind) {
    sigma2_ = (w / 3.0) * (w / 3.0);
  }

  double value(cplx z) const override {
    const double q = std::norm(z - c_) / (w_ * w_);
    if (q >= 1.0) return 0.0;
    const double s = 1.0 - q;
    double v = amp_ * s * s * s;
    if (kind_ == BumpKind::gaussian_truncated) v *= std::exp(-std::norm(z - c_) / (2.0 * sigma2_));
    return v;
  }

  cplx gradient(cplx z) const override {
    const cplx d = z - c_;
    const double q = std::norm(d) / (w_ * w_);
    if (q >= 1.0) return 0.0;
    const double s = 1.0 - q;
    // d/dz_k of s^3 = -6 s^2 d_k / w^2
    cplx g = amp_ * (-6.0 * s * s / (w_ * w_)) * d;
    if (kind_ == BumpKind::gaussian_truncated) {
      const double e = std::exp(-std::norm(d) / (2.0 * sigma2_));
      g = g * e + amp_ * s * s * s * e * (-d / sigma2_);
    }
    return g;
  }

  std::vector<SupportDisk> support() const override { return {{c_, w_}}; }

  std::string describe() const override {
    return std::string(kind_ == BumpKind::polynomial ? "bump_poly" : "bump_gauss") + fmt_point(c_) + ":w=" +
           fmt_num(w_) + ":amp=" + fmt_num(amp_);
  }

 private:
  cplx c_;
  double w_, amp_, sigma2_;
  BumpKind kind_;
};

class Constant final : public ScalarField {
 public:
  explicit Constant(double c) : c_(c) {}
  double value(cplx) const override { return c_; }
  cplx gradient(cplx) const override { return 0.0; }
  std::string describe() const override { return "constant:" + fmt_num(c_); }

 private:
  double c_;
};

class Sum final : public ScalarField {
 public:
  explicit Sum(std::vector<ScalarFieldPtr> t) : terms_(std::move(t)) {}
  double value(cplx z) const override {
    double v = 0.0;
    for (const auto& t : terms_) v += t->value(z);
    return v;
  }
  cplx gradient(cplx z) const override {
    cplx g = 0.0;
    for (const auto& t : terms_) g += t->gradient(z);
    return g;
  }
  std::vector<SupportDisk> support() const override {
    std::vector<SupportDisk> out;
    for (const auto& t : terms_) {
      auto s = t->support();
      if (s.empty()) return {};
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  std::string describe() const override {
    std::string s = "sum[";
    for (std::size_t i = 0; i < terms_.size(); ++i) s += (i ? ";" : "") + terms_[i]->describe();
    return s + "]";
  }

 private:
  std::vector<ScalarFieldPtr> terms_;
};

class Product final : public ScalarField {
 public:
  Product(ScalarFieldPtr a, ScalarFieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  double value(cplx z) const override { return a_->value(z) * b_->value(z); }
  cplx gradient(cplx z) const override {
    return a_->gradient(z) * b_->value(z) + a_->value(z) * b_->gradient(z);
  }
  std::vector<SupportDisk> support() const override {
    auto sa = a_->support();
    auto sb = b_->support();
    if (sa.empty()) return sb;
    if (sb.empty()) return sa;
    return sa.size() <= sb.size() ? sa : sb;
  }
  std::string describe() const override { return "product[" + a_->describe() + ";" + b_->describe() + "]"; }

 private:
  ScalarFieldPtr a_, b_;
};

class Function final : public ScalarField {
 public:
  Function(std::function<double(cplx)> v, std::function<cplx(cplx)> g, std::string d)
      : v_(std::move(v)), g_(std::move(g)), d_(std::move(d)) {}
  double value(cplx z) const override { return v_(z); }
  cplx gradient(cplx z) const override { return g_(z); }
  std::string describe() const override { return d_; }

 private:
  std::function<double(cplx)> v_;
  std::function<cplx(cplx)> g_;
  std::string d_;
};

class Bilinear final : public ScalarField {
 public:
  explicit Bilinear(const ScalarFieldGrid& g) : grid_(g.grid), values_(g.values), valid_(g.valid) {}

  double value(cplx z) const override {
    double fx, fy;
    int i0, j0;
    locate(z, i0, j0, fx, fy);
    return (1 - fx) * (1 - fy) * node(i0, j0) + fx * (1 - fy) * node(i0 + 1, j0) +
           (1 - fx) * fy * node(i0, j0 + 1) + fx * fy * node(i0 + 1, j0 + 1);
  }

  cplx gradient(cplx z) const override {
    double fx, fy;
    int i0, j0;
    locate(z, i0, j0, fx, fy);
    const double h = grid_->pitch();
    const double gx = ((1 - fy) * (node(i0 + 1, j0) - node(i0, j0)) + fy * (node(i0 + 1, j0 + 1) - node(i0, j0 + 1))) / h;
    const double gy = ((1 - fx) * (node(i0, j0 + 1) - node(i0, j0)) + fx * (node(i0 + 1, j0 + 1) - node(i0 + 1, j0))) / h;
    return {gx, gy};
  }

  std::string describe() const override { return "sampled_grid:pitch=" + fmt_num(grid_->pitch()); }

 private:
  void locate(cplx z, int& i0, int& j0, double& fx, double& fy) const {
    const double x = z.real() / grid_->pitch();
    const double y = z.imag() / grid_->pitch();
    i0 = static_cast<int>(std::floor(x));
    j0 = static_cast<int>(std::floor(y));
    fx = x - i0;
    fy = y - j0;
  }
  double node(int i, int j) const {
    if (!grid_->in_lattice(i, j)) return 0.0;
    const std::size_t idx = grid_->index(i, j);
    return valid_[idx] ? values_[idx] : 0.0;
  }

  GridPtr grid_;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

class BumpVector final : public VectorField {
 public:
  BumpVector(ScalarFieldPtr b, cplx dir) : b_(std::move(b)), dir_(dir) {}
  cplx value(cplx z) const override { return b_->value(z) * dir_; }
  std::vector<SupportDisk> support() const override { return b_->support(); }
  std::string describe() const override { return "vec" + fmt_point(dir_) + "*" + b_->describe(); }

 private:
  ScalarFieldPtr b_;
  cplx dir_;
};

class GradientField final : public VectorField {
 public:
  GradientField(ScalarFieldPtr psi, double scale, bool rotated) : psi_(std::move(psi)), scale_(scale), rotated_(rotated) {}
  cplx value(cplx z) const override {
    const cplx g = psi_->gradient(z);
    return scale_ * (rotated_ ? kI * g : g);
  }
  std::vector<SupportDisk> support() const override { return psi_->support(); }
  std::string describe() const override {
    return std::string(rotated_ ? "rotgrad:" : "grad:") + fmt_num(scale_) + "*" + psi_->describe();
  }

 private:
  ScalarFieldPtr psi_;
  double scale_;
  bool rotated_;
};

class VectorSum final : public VectorField {
 public:
  explicit VectorSum(std::vector<VectorFieldPtr> t) : terms_(std::move(t)) {}
  cplx value(cplx z) const override {
    cplx v = 0.0;
    for (const auto& t : terms_) v += t->value(z);
    return v;
  }
  std::vector<SupportDisk> support() const override {
    std::vector<SupportDisk> out;
    for (const auto& t : terms_) {
      auto s = t->support();
      if (s.empty()) return {};
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  std::string describe() const override {
    std::string s = "vsum[";
    for (std::size_t i = 0; i < terms_.size(); ++i) s += (i ? ";" : "") + terms_[i]->describe();
    return s + "]";
  }

 private:
  std::vector<VectorFieldPtr> terms_;
};

class VectorFunction final : public VectorField {
 public:
  VectorFunction(std::function<cplx(cplx)> v, std::string d) : v_(std::move(v)), d_(std::move(d)) {}
  cplx value(cplx z) const override { return v_(z); }
  std::string describe() const override { return d_; }

 private:
  std::function<cplx(cplx)> v_;
  std::string d_;
};

// Fourth-order centred first derivative along one lattice axis.
template <class T>
bool centred_derivative(const GridField<T>& f, int i, int j, int di, int dj, T& out) {
  const InteriorGrid& g = *f.grid;
  T s[4];
  const int offs[4] = {-2, -1, 1, 2};
  for (int k = 0; k < 4; ++k) {
    const int ii = i + offs[k] * di, jj = j + offs[k] * dj;
    if (!g.in_lattice(ii, jj)) return false;
    const std::size_t idx = g.index(ii, jj);
    if (!f.ok(idx)) return false;
    s[k] = f.values[idx];
  }
  out = (s[0] - 8.0 * s[1] + 8.0 * s[2] - s[3]) / (12.0 * g.pitch());
  return true;
}

template <class T>
WirtingerResult fd_wirtinger(const GridField<T>& f) {
  WirtingerResult r{ComplexFieldGrid(f.grid), ComplexFieldGrid(f.grid), 0, {}};
  for (std::size_t idx = 0; idx < f.grid->size(); ++idx) {
    if (!f.ok(idx)) continue;
    const int i = f.grid->column(idx), j = f.grid->row(idx);
    T dx{}, dy{};
    if (!centred_derivative(f, i, j, 1, 0, dx) || !centred_derivative(f, i, j, 0, 1, dy)) {
      ++r.dropped;
      continue;
    }
    const cplx cx = dx, cy = dy;
    r.dbar.set(idx, 0.5 * (cx + kI * cy));
    r.d.set(idx, 0.5 * (cx - kI * cy));
  }
  if (r.dropped) r.reason = "stencil reaches outside the valid node set";
  return r;
}

}  // namespace

ScalarFieldPtr make_bump(cplx center, double width, double amplitude, BumpKind kind) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  if (std::abs(center) + width > 1.0 + 1e-12) throw DomainError("bump support leaves the unit disk");
  return std::make_shared<Bump>(center, width, amplitude, kind);
}

ScalarFieldPtr make_canonical_attenuation(double scale) {
  return make_bump(0.0, 1.0, scale, BumpKind::polynomial);
}

ScalarFieldPtr make_constant(double c) { return std::make_shared<Constant>(c); }
ScalarFieldPtr make_sum(std::vector<ScalarFieldPtr> terms) { return std::make_shared<Sum>(std::move(terms)); }
ScalarFieldPtr make_product(ScalarFieldPtr a, ScalarFieldPtr b) {
  return std::make_shared<Product>(std::move(a), std::move(b));
}
ScalarFieldPtr make_function(std::function<double(cplx)> value, std::function<cplx(cplx)> gradient,
                             std::string description) {
  return std::make_shared<Function>(std::move(value), std::move(gradient), std::move(description));
}

VectorFieldPtr make_bump_vector(ScalarFieldPtr bump, cplx direction) {
  return std::make_shared<BumpVector>(std::move(bump), direction);
}
VectorFieldPtr make_gradient_field(ScalarFieldPtr psi, double scale) {
  return std::make_shared<GradientField>(std::move(psi), scale, false);
}
VectorFieldPtr make_rotated_gradient_field(ScalarFieldPtr psi, double scale) {
  return std::make_shared<GradientField>(std::move(psi), scale, true);
}
VectorFieldPtr make_vector_sum(std::vector<VectorFieldPtr> terms) {
  return std::make_shared<VectorSum>(std::move(terms));
}
VectorFieldPtr make_vector_function(std::function<cplx(cplx)> value, std::string description) {
  return std::make_shared<VectorFunction>(std::move(value), std::move(description));
}

ComplexSourceField to_complex_source(const VectorFieldGrid& field) {
  ComplexSourceField out{ComplexFieldGrid(field.grid)};
  for (std::size_t idx = 0; idx < field.grid->size(); ++idx)
    if (field.ok(idx)) out.f1.set(idx, 0.5 * field.at(idx));
  return out;
}

VectorFieldGrid from_complex_source(const ComplexSourceField& source) {
  VectorFieldGrid out(source.f1.grid);
  for (std::size_t idx = 0; idx < out.grid->size(); ++idx)
    if (source.f1.ok(idx)) out.set(idx, 2.0 * source.f1.values[idx]);
  return out;
}

ScalarFieldGrid sample(const ScalarFieldPtr& field, GridPtr grid) {
  ScalarFieldGrid out(std::move(grid));
  out.source = field;
  for (std::size_t idx : out.grid->nodes()) out.set(idx, field->value(out.grid->point(idx)));
  return out;
}

VectorFieldGrid sample(const VectorField& field, GridPtr grid) {
  VectorFieldGrid out(std::move(grid));
  for (std::size_t idx : out.grid->nodes()) out.set(idx, field.value(out.grid->point(idx)));
  return out;
}

ComplexFieldGrid sample_complex(const std::function<cplx(cplx)>& field, GridPtr grid) {
  ComplexFieldGrid out(std::move(grid));
  for (std::size_t idx : out.grid->nodes()) out.set(idx, field(out.grid->point(idx)));
  return out;
}

ScalarFieldPtr as_field(const ScalarFieldGrid& grid) {
  if (grid.source) return grid.source;
  return std::make_shared<Bilinear>(grid);
}

ScalarFieldGrid bump(cplx center, double width, double amplitude, BumpKind kind, GridPtr grid) {
  return sample(make_bump(center, width, amplitude, kind), std::move(grid));
}

WirtingerResult wirtinger(const ScalarFieldGrid& field) {
  if (!field.source) return fd_wirtinger(field);
  WirtingerResult r{ComplexFieldGrid(field.grid), ComplexFieldGrid(field.grid), 0, {}};
  for (std::size_t idx = 0; idx < field.grid->size(); ++idx) {
    if (!field.ok(idx)) continue;
    const cplx g = field.source->gradient(field.grid->point(idx));
    r.dbar.set(idx, 0.5 * g);
    r.d.set(idx, 0.5 * std::conj(g));
  }
  return r;
}

WirtingerResult wirtinger(const ComplexFieldGrid& field) { return fd_wirtinger(field); }

PoissonExtension::PoissonExtension(std::span<const cplx> boundary_values) {
  const int n = static_cast<int>(boundary_values.size());
  if (n < 2 || n % 2) throw ConfigError("boundary samples must be a positive even count");
  band_ = n / 2;
  positive_.assign(band_ + 1, 0.0);
  negative_.assign(band_, 0.0);
  for (int m = -band_; m <= band_; ++m) {
    cplx c = 0.0;
    for (int j = 0; j < n; ++j) c += boundary_values[j] * unit(-kTwoPi * m * j / n);
    c /= static_cast<double>(n);
    if (std::abs(m) == band_) c *= 0.5;  // split the Nyquist term evenly
    if (m >= 0)
      positive_[m] = c;
    else
      negative_[-m - 1] = c;
  }
}

cplx PoissonExtension::value(cplx z) const {
  cplx p = 0.0, q = 0.0;
  const cplx zb = std::conj(z);
  for (int m = band_; m >= 0; --m) p = p * z + positive_[m];
  for (int m = band_; m >= 1; --m) q = q * zb + negative_[m - 1];
  return p + q * zb;
}

cplx PoissonExtension::dbar(cplx z) const {
  cplx q = 0.0;
  const cplx zb = std::conj(z);
  for (int m = band_; m >= 1; --m) q = q * zb + static_cast<double>(m) * negative_[m - 1];
  return q;
}

cplx PoissonExtension::d(cplx z) const {
  cplx p = 0.0;
  for (int m = band_; m >= 1; --m) p = p * z + static_cast<double>(m) * positive_[m];
  return p;
}

ComplexFieldGrid PoissonExtension::sample(GridPtr grid) const {
  ComplexFieldGrid out(std::move(grid));
  for (std::size_t idx : out.grid->nodes()) out.set(idx, value(out.grid->point(idx)));
  return out;
}

PoissonExtension poisson_extension(std::span<const cplx> boundary_values) {
  return PoissonExtension(boundary_values);
}

void write_scalar_csv(const std::string& path, const ScalarFieldGrid& field) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "x1,x2,value\n";
  char buf[128];
  for (std::size_t idx = 0; idx < field.grid->size(); ++idx) {
    if (!field.ok(idx)) continue;
    const cplx z = field.grid->point(idx);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", z.real(), z.imag(), field.values[idx]);
    out << buf;
  }
}

void write_vector_csv(const std::string& path, const VectorFieldGrid& field) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "x1,x2,f1,f2\n";
  char buf[160];
  for (std::size_t idx = 0; idx < field.grid->size(); ++idx) {
    if (!field.ok(idx)) continue;
    const cplx z = field.grid->point(idx);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), field.f1[idx], field.f2[idx]);
    out << buf;
  }
}

void write_complex_csv(const std::string& path, const ComplexFieldGrid& field) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "x1,x2,re,im\n";
  char buf[160];
  for (std::size_t idx = 0; idx < field.grid->size(); ++idx) {
    if (!field.ok(idx)) continue;
    const cplx z = field.grid->point(idx);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), field.values[idx].real(),
                  field.values[idx].imag());
    out << buf;
  }
}

VectorFieldGrid read_vector_csv(const std::string& path, GridPtr grid) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,f1,f2") throw FormatError(path + ": expected header x1,x2,f1,f2");
  VectorFieldGrid out(grid);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[4];
    std::istringstream row(line);
    std::string cell;
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) throw FormatError(path + ": short row");
      x = std::strtod(cell.c_str(), nullptr);
    }
    const int i = static_cast<int>(std::lround(v[0] / grid->pitch()));
    const int j = static_cast<int>(std::lround(v[1] / grid->pitch()));
    if (!grid->in_lattice(i, j)) throw FormatError(path + ": node off the lattice");
    out.set(grid->index(i, j), {v[2], v[3]});
  }
  return out;
}

}  // namespace aatomo
