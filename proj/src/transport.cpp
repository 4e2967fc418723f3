#include "aatomo/transport.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aatomo/geometry.hpp"
#include "aatomo/parallel.hpp"
#include "json.hpp"
#include "quadrature.hpp"

namespace aatomo {

Sinogram::Sinogram(int n_boundary_, int n_angles_, SinogramTag tag_)
    : n_boundary(n_boundary_), n_angles(n_angles_), tag(tag_) {
  if (n_boundary < 8 || n_boundary % 2) throw ConfigError("boundary node count must be even and >= 8");
  if (n_angles < 4) throw ConfigError("direction count must be >= 4");
  values.assign(static_cast<std::size_t>(n_boundary) * n_angles, 0.0);
}

std::string to_string(SinogramTag tag) { return tag == SinogramTag::xray ? "xray" : "doppler"; }

double divergence_beam(const ScalarField* a, cplx x, double phi, double ray_step) {
  const ChordTimes t = chord_times(x, phi);
  if (!a || t.tau_plus <= 0.0) return 0.0;
  return detail::simpson_line(*a, x, unit(phi), 0.0, t.tau_plus, ray_step);
}

double attenuated_ray(const std::function<double(cplx)>& integrand, const std::vector<SupportDisk>& support,
                      const ScalarField* a, cplx zeta, double phi, double ray_step) {
  const cplx dir = -unit(phi);
  const double length = chord_times(zeta, phi).tau_minus;
  if (length <= 0.0) return 0.0;
  double A = 0.0, tcur = 0.0, total = 0.0;
  for (const auto& piece : detail::support_pieces(zeta, dir, 0.0, length, support)) {
    if (a && piece.t0 > tcur) A += detail::simpson_line(*a, zeta, dir, tcur, piece.t0, ray_step);
    const int n = detail::even_panels(piece.t1 - piece.t0, ray_step);
    const double h = (piece.t1 - piece.t0) / n;
    double a_prev = a ? a->value(zeta + piece.t0 * dir) : 0.0;
    double sum = integrand(zeta + piece.t0 * dir) * std::exp(-A);
    for (int i = 1; i <= n; ++i) {
      const double t = piece.t0 + i * h;
      if (a) {
        const double a_mid = a->value(zeta + (t - 0.5 * h) * dir);
        const double a_here = a->value(zeta + t * dir);
        A += h / 6.0 * (a_prev + 4.0 * a_mid + a_here);
        a_prev = a_here;
      }
      const double w = (i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * integrand(zeta + t * dir) * std::exp(-A);
    }
    total += sum * h / 3.0;
    tcur = piece.t1;
  }
  return total;
}

namespace {

template <class Integrand>
Sinogram forward(SinogramTag tag, const Integrand& make_integrand, const std::vector<SupportDisk>& support,
                 const ScalarField* a, int n_boundary, int n_angles, const TransportOptions& opt) {
  Sinogram g(n_boundary, n_angles, tag);
  g.attenuation = a ? a->describe() : "zero";
  g.ray_step = opt.ray_step;
  parallel_for(static_cast<std::size_t>(n_boundary), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const cplx zeta = unit(g.beta(static_cast<int>(j)));
      for (int k = 0; k < n_angles; ++k) {
        const double phi = g.phi(k);
        if (dot(unit(phi), zeta) <= opt.tangent_tol) continue;
        g.at(static_cast<int>(j), k) = attenuated_ray(make_integrand(phi), support, a, zeta, phi, opt.ray_step);
      }
    }
  });
  return g;
}

}  // namespace

Sinogram forward_xray(const ScalarField& f, const ScalarField* a, int n_boundary, int n_angles,
                      const TransportOptions& opt) {
  auto integrand = [&f](double) { return std::function<double(cplx)>([&f](cplx y) { return f.value(y); }); };
  return forward(SinogramTag::xray, integrand, f.support(), a, n_boundary, n_angles, opt);
}

Sinogram forward_doppler(const VectorField& F, const ScalarField* a, int n_boundary, int n_angles,
                         const TransportOptions& opt) {
  auto integrand = [&F](double phi) {
    const cplx theta = unit(phi);
    return std::function<double(cplx)>([&F, theta](cplx y) { return dot(theta, F.value(y)); });
  };
  return forward(SinogramTag::doppler, integrand, F.support(), a, n_boundary, n_angles, opt);
}

void write_sinogram(const std::string& path, const Sinogram& g) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "beta,phi,value\n";
  char buf[96];
  for (int j = 0; j < g.n_boundary; ++j)
    for (int k = 0; k < g.n_angles; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.beta(j), g.phi(k), g.at(j, k));
      out << buf;
    }
  nlohmann::json meta{{"n_boundary", g.n_boundary}, {"n_angles", g.n_angles}, {"tag", to_string(g.tag)},
                      {"attenuation", g.attenuation}, {"ray_step", g.ray_step}};
  std::ofstream side(path + ".meta");
  if (!side) throw FormatError("cannot write " + path + ".meta");
  side << meta.dump(2) << "\n";
}

Sinogram read_sinogram(const std::string& path) {
  std::ifstream side(path + ".meta");
  if (!side) throw FormatError("missing sidecar " + path + ".meta");
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const std::exception& e) {
    throw FormatError(path + ".meta: " + e.what());
  }
  Sinogram g;
  try {
    const std::string tag = meta.at("tag").get<std::string>();
    if (tag != "xray" && tag != "doppler") throw FormatError(path + ".meta: unknown tag " + tag);
    g = Sinogram(meta.at("n_boundary").get<int>(), meta.at("n_angles").get<int>(),
                 tag == "xray" ? SinogramTag::xray : SinogramTag::doppler);
    g.attenuation = meta.value("attenuation", "zero");
    g.ray_step = meta.value("ray_step", 1.0 / 512.0);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ".meta: " + e.what());
  }
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "beta,phi,value") throw FormatError(path + ": expected header beta,phi,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[3];
    std::istringstream row(line);
    std::string cell;
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) throw FormatError(path + ": short row");
      x = std::strtod(cell.c_str(), nullptr);
    }
    const int j = static_cast<int>(std::lround(v[0] / kTwoPi * g.n_boundary));
    const int k = static_cast<int>(std::lround(v[1] / kTwoPi * g.n_angles));
    if (j < 0 || j >= g.n_boundary || k < 0 || k >= g.n_angles) throw FormatError(path + ": sample off the grid");
    g.at(j, k) = v[2];
    ++rows;
  }
  if (rows != g.values.size()) throw FormatError(path + ": expected " + std::to_string(g.values.size()) + " rows");
  return g;
}

}  // namespace aatomo
