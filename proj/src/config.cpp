#include "aatomo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace aatomo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field member(T RunConfig::*ptr, const std::string& key) {
  Field f;
  f.set = [ptr, key](RunConfig& c, const std::string& v) {
    if constexpr (std::is_same_v<T, std::string>)
      c.*ptr = v;
    else
      c.*ptr = parse_number<T>(key, v);
  };
  f.get = [ptr](const RunConfig& c) {
    if constexpr (std::is_same_v<T, std::string>)
      return c.*ptr;
    else if constexpr (std::is_floating_point_v<T>)
      return fmt(c.*ptr);
    else
      return std::to_string(c.*ptr);
  };
  return f;
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"n_boundary", member(&RunConfig::n_boundary, "n_boundary")},
      {"n_angles", member(&RunConfig::n_angles, "n_angles")},
      {"n_mode", member(&RunConfig::n_mode, "n_mode")},
      {"m_seq", member(&RunConfig::m_seq, "m_seq")},
      {"m_max", member(&RunConfig::m_max, "m_max")},
      {"k_h", member(&RunConfig::k_h, "k_h")},
      {"pitch", member(&RunConfig::pitch, "pitch")},
      {"mask_margin", member(&RunConfig::mask_margin, "mask_margin")},
      {"ray_step", member(&RunConfig::ray_step, "ray_step")},
      {"tol_range", member(&RunConfig::tol_range, "tol_range")},
      {"tol_h", member(&RunConfig::tol_h, "tol_h")},
      {"tol_g0", member(&RunConfig::tol_g0, "tol_g0")},
      {"seed", member(&RunConfig::seed, "seed")},
      {"scenario", member(&RunConfig::scenario, "scenario")},
      {"attenuation", member(&RunConfig::attenuation, "attenuation")},
      {"attenuation_scale", member(&RunConfig::attenuation_scale, "attenuation_scale")},
      {"radon_samples", member(&RunConfig::radon_samples, "radon_samples")},
      {"hilbert_pad", member(&RunConfig::hilbert_pad, "hilbert_pad")},
      {"bc_kappa", member(&RunConfig::bc_kappa, "bc_kappa")},
      {"bc_c0", member(&RunConfig::bc_c0, "bc_c0")},
      {"g0_radius", member(&RunConfig::g0_radius, "g0_radius")},
      {"g0_spacing", member(&RunConfig::g0_spacing, "g0_spacing")},
      {"g0_nodes", member(&RunConfig::g0_nodes, "g0_nodes")},
      {"g0_step", member(&RunConfig::g0_step, "g0_step")},
      {"conjugacy_pitch", member(&RunConfig::conjugacy_pitch, "conjugacy_pitch")},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(n_boundary >= 8 && n_boundary % 2 == 0, "n_boundary must be even and >= 8");
  need(n_angles > 0 && n_mode > 0 && m_seq > 0 && m_max > 0 && k_h > 0, "counts must be positive");
  need(n_angles >= 2 * n_mode + 2, "n_angles must be >= 2 n_mode + 2");
  need(n_angles >= 2 * k_h + 2, "n_angles must be >= 2 k_h + 2");
  need(n_mode >= 2 * m_seq, "n_mode must be >= 2 m_seq");
  need(n_mode >= 2 * m_max - 1, "n_mode must be >= 2 m_max - 1");
  need(m_max <= m_seq, "m_max must not exceed m_seq");
  need(pitch > 0.0 && pitch < 0.5, "pitch must lie in (0, 0.5)");
  need(mask_margin > 0.0 && mask_margin < 0.5, "mask_margin must lie in (0, 0.5)");
  need(ray_step > 0.0, "ray_step must be positive");
  need(tol_range > 0.0 && tol_h > 0.0 && tol_g0 > 0.0, "tolerances must be positive");
  need(attenuation == "canonical" || attenuation == "none", "attenuation must be 'canonical' or 'none'");
  need(!attenuated() || attenuation_scale > 0.0, "attenuation_scale must be positive");
  need(radon_samples >= 8 && hilbert_pad >= 2, "radon_samples >= 8 and hilbert_pad >= 2 required");
  need(bc_kappa > 0.0 && bc_c0 >= 0.0, "bc_kappa must be positive and bc_c0 nonnegative");
  need(g0_radius < 1.0 && g0_radius - 2 * g0_spacing > 0.0 && g0_spacing > 0.0, "g0 radii must lie in (0, 1)");
  need(g0_nodes > 0 && g0_step > 0.0, "g0_nodes and g0_step must be positive");
  need(conjugacy_pitch > 0.0, "conjugacy_pitch must be positive");
}

TransportOptions RunConfig::transport() const {
  TransportOptions t;
  t.ray_step = ray_step;
  return t;
}

HOptions RunConfig::h_options() const {
  HOptions h;
  h.n_angles = n_angles;
  h.radon_samples = radon_samples;
  h.hilbert_pad = hilbert_pad;
  h.ray_step = ray_step;
  return h;
}

BcOptions RunConfig::bc_options() const {
  BcOptions b;
  b.kappa = bc_kappa;
  b.c0 = bc_c0;
  return b;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : fields())
    if (name == key) {
      field.set(cfg, value);
      return;
    }
  throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace aatomo
