#include "aatomo/scenarios.hpp"

#include <random>

#include "aatomo/reconstruct.hpp"

namespace aatomo {

std::vector<std::string> scenario_names() {
  return {"zero", "bump_pair", "random", "gradient", "xray", "confusion"};
}

ScalarFieldPtr make_attenuation(const RunConfig& cfg) {
  if (!cfg.attenuated()) return nullptr;
  return make_canonical_attenuation(cfg.attenuation_scale);
}

namespace {

struct BumpDraw {
  cplx center;
  double width, amplitude, angle;
};

BumpDraw draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BumpDraw b;
  b.width = 0.25 + 0.15 * u(rng);
  const double reach = 0.85 - b.width;
  b.center = reach * std::sqrt(u(rng)) * unit(kTwoPi * u(rng));
  b.amplitude = 0.5 + u(rng);
  b.angle = kTwoPi * u(rng);
  return b;
}

}  // namespace

VectorFieldPtr random_bump_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int count = 2 + static_cast<int>(rng() % 2);
  std::vector<VectorFieldPtr> terms;
  for (int i = 0; i < count; ++i) {
    const BumpDraw b = draw(rng);
    terms.push_back(
        make_bump_vector(make_bump(b.center, b.width, b.amplitude, BumpKind::gaussian_truncated), unit(b.angle)));
  }
  return make_vector_sum(std::move(terms));
}

ScalarFieldPtr random_potential(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const BumpDraw b = draw(rng);
  return make_bump(b.center, b.width, 0.3 * b.amplitude, BumpKind::polynomial);
}

Scenario make_scenario(const std::string& name, const RunConfig& cfg) {
  Scenario s;
  s.name = name;
  s.a = make_attenuation(cfg);
  if (name == "zero") {
    s.F = make_vector_function([](cplx) { return cplx{}; }, "zero");
  } else if (name == "bump_pair") {
    s.F = make_vector_sum(
        {make_bump_vector(make_bump({0.25, 0.1}, 0.4, 1.0, BumpKind::gaussian_truncated), {1.0, 0.5}),
         make_bump_vector(make_bump({-0.3, -0.2}, 0.35, 0.8, BumpKind::gaussian_truncated), {-0.3, 1.0})});
  } else if (name == "random") {
    s.F = random_bump_field(cfg.seed);
  } else if (name == "gradient") {
    s.psi = random_potential(cfg.seed);
    s.F = make_gradient_field(s.psi);
  } else if (name == "xray") {
    s.tag = SinogramTag::xray;
    s.f = make_bump({0.2, -0.1}, 0.45, 1.0, BumpKind::polynomial);
  } else if (name == "confusion") {
    if (!s.a) throw ConfigError("the confusion scenario needs an attenuation");
    s.psi = random_potential(cfg.seed);
    const ConfusionPair pair = confusion_field(s.psi, s.a);
    s.F = pair.F;
    s.f = pair.f;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

Scenario make_scenario(const RunConfig& cfg) { return make_scenario(cfg.scenario, cfg); }

}  // namespace aatomo
