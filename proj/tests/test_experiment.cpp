#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "softdeco/decoherence.hpp"
#include "softdeco/experiment.hpp"
#include "support.hpp"

using namespace softdeco;
constexpr double kPi = std::numbers::pi;

namespace {

SlitGeometry slit(double ratio, double v = 0.01, double Q = 1.0) {
  SlitGeometry s;
  s.a_o = 2.0;
  s.L_o = 2.0 * ratio;
  s.b_o = 0.3;
  s.d_o = 1e-3;
  s.v_over_c = v;
  s.Q = Q;
  return s;
}

}  // namespace

TEST_CASE("slit acceleration") {
  const auto s = slit(1e4);
  CHECK(slit_acceleration(s, -0.5 * s.d_o, SlitPath::A, 1.0) == 0.0);
  CHECK(slit_acceleration(s, 0.5 * s.d_o, SlitPath::B, 1.0) == 0.0);
  CHECK(slit_acceleration(s, 0.0, SlitPath::A, 3.0) == -slit_acceleration(s, 0.0, SlitPath::B, 3.0));
  CHECK(test::rel(slit_acceleration(s, 0.0, SlitPath::A, 1.0), 5e-8) <= 1e-14);
  CHECK_THROWS_AS(slit_acceleration(s, 0.0, SlitPath::A, 0.0), std::invalid_argument);
}

TEST_CASE("two-slit dressed estimate") {
  CHECK(gamma_dressed_2slit(slit(1e4, 0.01, 0.0)) == 0.0);
  // Q^2 (16 alpha / 3 pi) v^2 ln 1e4, alpha = 1/137.035999, mpmath
  CHECK(test::rel(gamma_dressed_2slit(slit(1e4)), 1.1410110888279163155e-5) <= 1e-13);
  CHECK(test::rel(gamma_dressed_2slit(slit(1e4, 0.01, 2.0)), 4.0 * gamma_dressed_2slit(slit(1e4))) <= 1e-15);
}

TEST_CASE("two-slit hard estimate") {
  const auto unit = gamma_hard_2slit(slit(1.0));
  CHECK(test::rel(unit.bare, 0.5 * 8.0 * kFineStructure / (3.0 * kPi)) <= 1e-15);

  const auto h = gamma_hard_2slit(slit(10.0, 0.02));
  // (8 alpha / 3 pi) [2 ln 10 + 50], mpmath
  CHECK(test::rel(h.bare, 0.33823453951343863659) <= 1e-13);
  CHECK(test::rel(h.with_velocity, h.bare * 4e-4) <= 1e-15);
  CHECK(test::rel(h.half_coefficient, 0.5 * h.with_velocity) <= 1e-15);
  CHECK(test::rel(h.bare / h.with_velocity, h.bare_over_with_velocity) <= 1e-12);
  CHECK(test::rel(h.bare / h.half_coefficient, h.bare_over_half_coefficient) <= 1e-12);
  CHECK(test::rel(h.bare_over_with_velocity, 2500.0) <= 1e-12);
}

TEST_CASE("slit geometry validation") {
  auto s = slit(1e4);
  s.v_over_c = 1.0;
  CHECK_THROWS_AS(gamma_dressed_2slit(s), std::invalid_argument);
  s = slit(1e4);
  s.L_o = 0.5 * s.a_o;
  CHECK_THROWS_AS(gamma_dressed_2slit(s), std::invalid_argument);
  s = slit(1e4);
  s.b_o = 0.0;
  CHECK_THROWS_AS(gamma_hard_2slit(s), std::invalid_argument);
}

TEST_CASE("slit estimate against the dressed functional") {
  const QuadratureSpec spec;
  double prev = 1.0;
  for (double ratio : {1e4, 1e6}) {
    const auto s = slit(ratio);
    const auto m = slit_mapping(s);
    const double num = gamma_dressed(m.geometry, m.cutoffs, spec).value;
    const double r = gamma_dressed_2slit(s) / num;
    if (ratio == 1e4) CHECK(std::abs(r - 1.0) <= 0.1);
    CHECK(std::abs(r - 1.0) < prev);
    prev = std::abs(r - 1.0);
  }
}

TEST_CASE("van der Waals") {
  ParticleMirror p;
  p.r_o = 1.0;
  p.Z_o = 1.0;
  // -(9 / 16 pi) / 16, mpmath; Z = r sits outside the far regime and is flagged
  auto far = vdw_potential(p, VdwRegime::far);
  CHECK(test::rel(far.value, -0.011190581936148890796) <= 1e-14);
  CHECK_FALSE(far.regime_ok);
  CHECK_FALSE(far.warning.empty());

  p.Z_o = 1e3;
  far = vdw_potential(p, VdwRegime::far);
  CHECK(far.regime_ok);
  CHECK(far.value < 0.0);
  CHECK(std::abs(far.value) < 1e-12);
  p.Z_o = 2e3;
  CHECK(vdw_potential(p, VdwRegime::far).value / far.value == doctest::Approx(1.0 / 16.0).epsilon(1e-2));

  p.r_o = 2.0;
  p.Z_o = 1.0;
  const auto near = vdw_potential(p, VdwRegime::near);
  // (1/3 - 5/pi^2) pi^3 / 720, mpmath
  CHECK(test::rel(near.value, -0.0074618579275680918525) <= 1e-14);
  CHECK(near.regime_ok);
  p.Z_o = 3.0;
  CHECK_FALSE(vdw_potential(p, VdwRegime::near).regime_ok);
  p.Z_o = 0.5;
  CHECK(vdw_potential(p, VdwRegime::near).value == doctest::Approx(2.0 * near.value));
}

TEST_CASE("surface coupling") {
  ParticleMirror p;
  p.r_o = p.g_o = p.q = p.Z_o = 1.0;
  p.X_o = 0.0;
  // -(sqrt 2 pi^2 / 3) K_2(1), mpmath
  CHECK(test::rel(surface_coupling(p), -7.5596866799104709436) <= 1e-10);

  p.X_o = kPi / 2.0;
  CHECK(std::abs(surface_coupling(p)) <= 1e-15 * 7.56);

  p.X_o = 0.0;
  for (double z : {20.0, 40.0, 80.0, 160.0}) {
    p.Z_o = z;
    const double ratio = std::abs(surface_coupling(p)) / std::exp(-z);
    CHECK(ratio < 1.0);
  }

  // r^3 and q^2 K_2(qZ) / Z^2 scaling
  ParticleMirror a;
  a.r_o = 0.5;
  a.Z_o = 0.8;
  a.q = 1.7;
  a.g_o = 0.3;
  a.X_o = 0.2;
  ParticleMirror b = a;
  b.r_o = 1.0;
  CHECK(test::rel(surface_coupling(b), 8.0 * surface_coupling(a)) <= 1e-14);

  p.q = 0.0;
  CHECK_THROWS_AS(surface_coupling(p), std::domain_error);
}

TEST_CASE("rayleigh rate") {
  ParticleMirror p;
  p.r_o = 1.0;
  p.epsilon = 1.0;
  CHECK(rayleigh_rate(p, 2.0) == 0.0);
  p.epsilon = 4.0;
  CHECK(test::rel(rayleigh_rate(p, 2.0) / rayleigh_rate(p, 1.0), 16.0) <= 1e-14);
  p.r_o = 2.0;
  CHECK(test::rel(rayleigh_rate(p, 1.0), 64.0 * (8.0 * kPi / 3.0) * 0.25) <= 1e-14);
  p.r_o = 1.0;
  p.epsilon = 1e15;
  // 8 pi / 3, mpmath
  CHECK(test::rel(rayleigh_rate(p, 1.0), 8.3775804095727819692) <= 1e-13);
  p.epsilon = -2.0;
  CHECK_THROWS_AS(rayleigh_rate(p, 1.0), std::invalid_argument);
  p.epsilon = 3.0;
  CHECK_THROWS_AS(rayleigh_rate(p, 0.0), std::invalid_argument);
}
