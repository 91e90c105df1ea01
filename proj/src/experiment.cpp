#include "softdeco/experiment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "softdeco/numerics.hpp"

namespace softdeco {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

double hard_bracket(double r) { return 2.0 * std::log(r) + 0.5 * r * r; }

}  // namespace

void SlitGeometry::validate() const {
  if (!positive(a_o)) throw std::invalid_argument("a_o must be > 0");
  if (!positive(b_o)) throw std::invalid_argument("b_o must be > 0");
  if (!positive(d_o)) throw std::invalid_argument("d_o must be > 0");
  if (!positive(L_o)) throw std::invalid_argument("L_o must be > 0");
  if (!(L_o >= a_o)) throw std::invalid_argument("L_o must not be smaller than a_o");
  if (!(v_over_c > 0.0 && v_over_c < 1.0)) throw std::invalid_argument("v_over_c must lie in (0, 1)");
  if (!std::isfinite(Q)) throw std::invalid_argument("Q must be finite");
  if (!positive(alpha)) throw std::invalid_argument("alpha must be > 0");
}

double slit_acceleration(const SlitGeometry& s, double z_f, SlitPath path, double ell_o) {
  if (!positive(ell_o)) throw std::invalid_argument("ell_o must be > 0");
  const double sign = path == SlitPath::A ? 1.0 : -1.0;
  return s.v_over_c * s.v_over_c / ell_o * (z_f + sign * 0.5 * s.d_o);
}

double gamma_dressed_2slit(const SlitGeometry& s) {
  s.validate();
  return s.Q * s.Q * (16.0 * s.alpha / (3.0 * kPi)) * s.v_over_c * s.v_over_c * std::log(s.L_o / s.a_o);
}

HardSlitEstimate gamma_hard_2slit(const SlitGeometry& s) {
  s.validate();
  const double v2 = s.v_over_c * s.v_over_c;
  const double base = s.Q * s.Q * (8.0 * s.alpha / (3.0 * kPi)) * hard_bracket(s.L_o / s.a_o);
  HardSlitEstimate h;
  h.bare = base;
  h.with_velocity = base * v2;
  h.half_coefficient = 0.5 * base * v2;
  h.bare_over_with_velocity = 1.0 / v2;
  h.bare_over_half_coefficient = 2.0 / v2;
  return h;
}

SlitMapping slit_mapping(const SlitGeometry& s) {
  s.validate();
  SlitMapping m;
  const double e = std::abs(s.Q) * elementary_charge(s.alpha);
  m.geometry = interferometer_geometry(s.v_over_c, 1.0, e);
  m.cutoffs.lambda_ir = 0.0;
  m.cutoffs.omega_uv = s.L_o / s.a_o;
  return m;
}

void ParticleMirror::validate() const {
  if (!positive(r_o)) throw std::invalid_argument("r_o must be > 0");
  if (!positive(Z_o)) throw std::invalid_argument("Z_o must be > 0");
  if (!(std::isfinite(epsilon) && epsilon > 1.0)) throw std::invalid_argument("epsilon must be > 1");
}

VdwResult vdw_potential(const ParticleMirror& p, VdwRegime regime) {
  if (!positive(p.r_o)) throw std::invalid_argument("r_o must be > 0");
  if (!std::isfinite(p.Z_o) || p.Z_o == 0.0) throw std::invalid_argument("Z_o must be finite and non-zero");
  const double barrier = p.Z_o < 0.0 ? p.U_o : 0.0;
  VdwResult out;
  if (regime == VdwRegime::far) {
    const double r3 = p.r_o * p.r_o * p.r_o;
    out.value = barrier - (9.0 / (16.0 * kPi)) * r3 / std::pow(p.r_o + p.Z_o, 4);
    out.regime_ok = p.Z_o > p.r_o;
    if (!out.regime_ok) out.warning = "far-field form used with Z_o <= r_o";
  } else {
    const double c = (1.0 / 3.0 - 5.0 / (kPi * kPi)) * (kPi * kPi * kPi / 720.0);
    out.value = barrier + c / p.Z_o;
    out.regime_ok = p.Z_o < p.r_o;
    if (!out.regime_ok) out.warning = "near-field form used with Z_o >= r_o";
  }
  return out;
}

double surface_coupling(const ParticleMirror& p) {
  const double qz = p.q * p.Z_o;
  if (!(qz > 0.0)) throw std::domain_error("surface_coupling needs q Z_o > 0");
  const double r3 = p.r_o * p.r_o * p.r_o;
  return -(std::numbers::sqrt2 * kPi * kPi / 3.0) * r3 * p.g_o * (p.q * p.q) / (p.Z_o * p.Z_o) * bessel_k2(qz) *
         std::cos(p.q * p.X_o);
}

double rayleigh_rate(const ParticleMirror& p, double q_mag) {
  if (!(q_mag > 0.0)) throw std::invalid_argument("rayleigh_rate needs q_mag > 0");
  if (p.epsilon == -2.0) throw std::invalid_argument("rayleigh_rate: epsilon = -2 is a pole");
  const double f = (p.epsilon - 1.0) / (p.epsilon + 2.0);
  const double r2 = p.r_o * p.r_o;
  const double q2 = q_mag * q_mag;
  return (8.0 * kPi / 3.0) * f * f * r2 * r2 * r2 * q2 * q2;
}

}  // namespace softdeco
