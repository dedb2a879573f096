#include <vector>

#include "doctest.h"
#include "lbl/error.hpp"
#include "lbl/halfwidth.hpp"
#include "oracles.hpp"

using namespace lbl;

namespace {

SpectralLine line(double gf = 0.1, double gs = 0.2, double n = 0.75) {
  SpectralLine l;
  l.position = 2349.0;
  l.gamma_foreign_ref = gf;
  l.gamma_self_ref = gs;
  l.temp_exponent = n;
  return l;
}

BroadenerSpec helium(double p) {
  BroadenerSpec b;
  b.id = BroadenerId::He;
  b.scale_vs_n2 = 0.52;
  b.partial_pressure = p;
  return b;
}

}  // namespace

TEST_SUITE("halfwidth") {

TEST_CASE("conventional width is linear in pressure") {
  HalfwidthModel m;
  CHECK(conventional_halfwidth(line(), helium(1.0), 296.0, m) ==
        doctest::Approx(oracle::kConventionalHeOneAtm).epsilon(1e-14));
  CHECK(conventional_halfwidth(line(), helium(95.06), 296.0, m) ==
        doctest::Approx(95.06 * oracle::kConventionalHeOneAtm).epsilon(1e-14));
  m.gamma0 = 0.01;
  CHECK(conventional_halfwidth(line(), helium(0.0), 296.0, m) == 0.01);
  // (296/T)^n
  m.gamma0 = 0.0;
  CHECK(conventional_halfwidth(line(0.1, 0.2, 0.5), helium(1.0), 296.0 * 4.0, m) ==
        doctest::Approx(0.026).epsilon(1e-14));
}

TEST_CASE("self broadening uses the self coefficient and mixtures add") {
  HalfwidthModel m;
  BroadenerSpec self;
  self.id = BroadenerId::Self;
  self.partial_pressure = 2.0;
  CHECK(conventional_halfwidth(line(), self, 296.0, m) == doctest::Approx(0.4));
  const std::vector<BroadenerSpec> mix{self, helium(1.0)};
  CHECK(conventional_halfwidth(line(), mix, 296.0, m) == doctest::Approx(0.452));
}

TEST_CASE("saturation modes") {
  HalfwidthModel m;
  const double gs = saturated_halfwidth(m);
  CHECK(gs == doctest::Approx(oracle::kGammaSatNu3).epsilon(1e-15));

  m.mode = HalfwidthMode::Linear;
  CHECK(effective_halfwidth(10.0, m) == 10.0);

  m.mode = HalfwidthMode::Saturating;
  CHECK(effective_halfwidth(1e-6, m) == doctest::Approx(1e-6).epsilon(1e-10));
  CHECK(effective_halfwidth(1e3, m) == doctest::Approx(gs).epsilon(1e-14));
  m.hard_clamp = true;
  CHECK(effective_halfwidth(1.0, m) == 1.0);
  CHECK(effective_halfwidth(100.0, m) == gs);

  m.mode = HalfwidthMode::Combined;
  CHECK(effective_halfwidth(gs, m) == gs / 2.0);
  CHECK(effective_halfwidth(gs, m) == doctest::Approx(oracle::kCombinedAtEqualWidths));
  CHECK(effective_halfwidth(1e9 * gs, m) == doctest::Approx(gs).epsilon(1e-8));
  for (double g = 0.01; g < 100.0; g *= 1.7) CHECK(effective_halfwidth(g, m) <= gs);
}

TEST_CASE("mode names") {
  for (auto mode : {HalfwidthMode::Linear, HalfwidthMode::Saturating, HalfwidthMode::Combined}) {
    CHECK(halfwidth_mode_from_string(to_string(mode)) == mode);
  }
  CHECK_FALSE(halfwidth_mode_from_string("bogus").has_value());
}

TEST_CASE("critical pressure") {
  HalfwidthModel m;
  SpectralLine l = line(0.07);
  const double ps = critical_pressure(l, helium(0.0), 296.0, m);
  CHECK(ps == doctest::Approx(oracle::kCriticalPressureHe).epsilon(1e-13));
  CHECK(conventional_halfwidth(l, helium(ps), 296.0, m) ==
        doctest::Approx(saturated_halfwidth(m)).epsilon(1e-14));
  m.gamma0 = 10.0;
  CHECK(critical_pressure(l, helium(0.0), 296.0, m) == 0.0);
  m.gamma0 = 0.0;
  l.gamma_foreign_ref = 0.0;
  CHECK_THROWS_AS(critical_pressure(l, helium(0.0), 296.0, m), DomainError);
}

TEST_CASE("relaxation time") {
  CHECK(relaxation_time(0.12) == doctest::Approx(oracle::kRelaxationTime012).epsilon(1e-14));
  CHECK_THROWS_AS(relaxation_time(0.0), DomainError);
}

TEST_CASE("invalid inputs") {
  HalfwidthModel m;
  CHECK_THROWS_AS(conventional_halfwidth(line(), helium(1.0), 0.0, m), DomainError);
  CHECK_THROWS_AS(conventional_halfwidth(line(), helium(-1.0), 296.0, m), DomainError);
  BroadenerSpec b = helium(1.0);
  b.scale_vs_n2 = 3.0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  m.delta_omega_rot = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

}
