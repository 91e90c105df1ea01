#include "softdeco/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace softdeco {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiCubed = 8.0 * kPi * kPi * kPi;

cplx coefficient(const DipoleCoefficients& c, CurrentParts p) {
  cplx out{};
  if (p.div) out += c.div;
  if (p.sub) out += c.sub;
  if (p.hard) out += c.hard;
  return out;
}

// coth(beta omega / 2); 1 at T = 0.
double thermal_factor(const CutoffSet& cut, double omega) {
  if (!cut.beta) return 1.0;
  const double h = 0.5 * *cut.beta * omega;
  if (h > 20.0) return 1.0;
  return 1.0 / std::tanh(h);
}

void require_finite_ir(const CutoffSet& cut, CurrentParts left, CurrentParts right) {
  if (left.div && right.div && cut.lambda_ir == 0.0)
    throw InfraredDivergenceError("leading soft current needs lambda_ir > 0: the integral diverges like ln(1/lambda)");
}

QuadratureEstimate frequency_factor(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                    CurrentParts left, CurrentParts right) {
  const double e2 = g.charge * g.charge;
  const double tau = g.tau;
  auto integrand = [&](double omega) {
    const auto c = dipole_coefficients(omega * tau);
    const double re = std::real(coefficient(c, left) * std::conj(coefficient(c, right)));
    return e2 * re / omega * thermal_factor(cut, omega) / (4.0 * kTwoPiCubed);
  };
  return freq_integrate(integrand, cut.lambda_ir, cut.omega_uv, tau, spec);
}

QuadratureEstimate product(const QuadratureEstimate& a, const QuadratureEstimate& b, const QuadratureSpec& spec) {
  QuadratureEstimate out;
  out.value = a.value * b.value;
  out.error = std::abs(a.value) * b.error + std::abs(b.value) * a.error;
  out.converged = a.converged && b.converged;
  (void)spec;
  return out;
}

}  // namespace

void CutoffSet::validate() const {
  if (!std::isfinite(lambda_ir) || lambda_ir < 0.0)
    throw std::invalid_argument("lambda_ir must be finite and >= 0");
  if (!std::isfinite(omega_uv) || !(omega_uv > lambda_ir))
    throw std::invalid_argument("omega_uv must be finite and greater than lambda_ir");
  if (beta && (!std::isfinite(*beta) || !(*beta > 0.0)))
    throw std::invalid_argument("beta must be finite and > 0");
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::dressed: return "dressed";
    case Variant::sub: return "sub";
    case Variant::hard: return "hard";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::full, Variant::dressed, Variant::sub, Variant::hard})
    if (variant_name(v) == name) return v;
  return std::nullopt;
}

CurrentParts CurrentParts::of(Variant v) {
  switch (v) {
    case Variant::full: return {true, true, true};
    case Variant::dressed: return {false, true, true};
    case Variant::sub: return {false, true, false};
    case Variant::hard: return {false, false, true};
  }
  return {};
}

double gamma_kernel(const ComplexFourCurrent& dj, const PhotonMomentum& q) {
  const Vec3 n = q.n_hat();
  const cplx nj = n.x * dj.x + n.y * dj.y + n.z * dj.z;
  const double total = std::norm(dj.x) + std::norm(dj.y) + std::norm(dj.z);
  return std::max(0.0, total - std::norm(nj));
}

QuadratureEstimate angular_integral(const InterferometerGeometry& g, const QuadratureSpec& spec) {
  auto f = [&](const Vec3& n) {
    const PhotonMomentum q(1.0, n);
    const FourVector b = velocity_bracket(g, q);
    return gamma_kernel(to_complex(b), q);
  };
  return sphere_integrate(f, spec);
}

QuadratureEstimate gamma_bilinear(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                  CurrentParts left, CurrentParts right) {
  cut.validate();
  spec.validate();
  require_finite_ir(cut, left, right);
  return product(angular_integral(g, spec), frequency_factor(g, cut, spec, left, right), spec);
}

QuadratureEstimate gamma_functional(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                    CurrentParts parts) {
  return gamma_bilinear(g, cut, spec, parts, parts);
}

QuadratureEstimate gamma_full(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec) {
  return gamma_functional(g, cut, spec, CurrentParts::of(Variant::full));
}

QuadratureEstimate gamma_dressed(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec) {
  return gamma_functional(g, cut, spec, CurrentParts::of(Variant::dressed));
}

QuadratureEstimate gamma_sub(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec) {
  return gamma_functional(g, cut, spec, CurrentParts::of(Variant::sub));
}

QuadratureEstimate gamma_hard(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec) {
  return gamma_functional(g, cut, spec, CurrentParts::of(Variant::hard));
}

QuadratureEstimate gamma_variant(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                 Variant v) {
  return gamma_functional(g, cut, spec, CurrentParts::of(v));
}

QuadratureEstimate gamma_direct(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                CurrentParts parts, CurrentApproximation approx, bool detector_vertex) {
  cut.validate();
  spec.validate();
  require_finite_ir(cut, parts, parts);
  const bool all = parts.div && parts.sub && parts.hard;
  if (approx == CurrentApproximation::exact && !all)
    throw std::invalid_argument("gamma_direct: the exact current has no soft split, use all parts");
  if (detector_vertex && !all)
    throw std::invalid_argument("gamma_direct: detector vertex only with the full current");

  bool inner_ok = true;
  auto at_omega = [&](double omega) {
    auto f = [&](const Vec3& n) {
      const PhotonMomentum q(omega, n);
      ComplexFourCurrent dj;
      if (all) {
        dj = delta_current(g, q, approx, detector_vertex);
      } else {
        const auto p = delta_current_parts(g, q);
        if (parts.div) dj += p.div;
        if (parts.sub) dj += p.sub;
        if (parts.hard) dj += p.hard;
      }
      return gamma_kernel(dj, q);
    };
    const auto s = sphere_integrate(f, spec);
    inner_ok = inner_ok && s.converged;
    return omega * s.value * thermal_factor(cut, omega) / (4.0 * kTwoPiCubed);
  };
  auto out = freq_integrate(at_omega, cut.lambda_ir, cut.omega_uv, g.tau, spec);
  out.converged = out.converged && inner_ok;
  return out;
}

ClosedForms closed_forms(const InterferometerGeometry& g, const CutoffSet& cut) {
  cut.validate();
  ClosedForms c;
  const double e2 = g.charge * g.charge;
  const double x = cut.omega_uv * g.tau;
  const double y = cut.lambda_ir * g.tau;
  const double v2 = g.v * g.v;

  c.v12 = relative_speed(g.Xdot_1, g.Xdot_2);
  c.angular_exact = 8.0 * kPi * atanh_over_x_minus_one(c.v12);
  c.angular_small_v = 16.0 * kPi * v2 / 3.0;

  c.freq_dressed = 2.0 * (cosine_integral_entire(x) - cosine_integral_entire(y));
  c.freq_dressed_asymptotic = 2.0 * std::log(x);
  c.freq_sub = 0.5 * (x - y) * (x + y);
  // cos y - cos x = 2 sin((x+y)/2) sin((x-y)/2)
  c.freq_hard = c.freq_dressed + c.freq_sub - 4.0 * std::sin(0.5 * (x + y)) * std::sin(0.5 * (x - y));
  c.freq_hard_asymptotic = 2.0 * std::log(x) + 0.5 * x * x;
  if (y > 0.0) c.freq_full = 5.0 * std::log(x / y) - 4.0 * (cosine_integral(x) - cosine_integral(y));

  c.dressed = e2 / kTwoPiCubed * c.freq_dressed * c.angular_exact;
  c.sub = e2 / kTwoPiCubed * c.freq_sub * c.angular_exact;
  c.hard = e2 / kTwoPiCubed * c.freq_hard * c.angular_exact;
  if (c.freq_full) c.full = e2 / (4.0 * kTwoPiCubed) * *c.freq_full * c.angular_exact;

  const double pref = e2 * v2 / (3.0 * kPi * kPi);
  c.dressed_asymptotic = 4.0 * pref * std::log(x);
  c.sub_asymptotic = pref * x * x;
  c.hard_two_e2 = 2.0 * pref * c.freq_hard_asymptotic;
  c.hard_one_e2 = pref * c.freq_hard_asymptotic;
  c.divergence_coefficient = e2 / (32.0 * kPi * kPi * kPi) * c.angular_exact;
  return c;
}

DivergenceFit divergence_coefficient(const InterferometerGeometry& g, const CutoffSet& cut,
                                     const QuadratureSpec& spec, Variant v, int points, double ratio) {
  if (!(cut.lambda_ir > 0.0)) throw std::invalid_argument("divergence fit needs lambda_ir > 0");
  if (points < 3) throw std::invalid_argument("divergence fit needs at least 3 points");
  if (!(ratio > 1.0)) throw std::invalid_argument("divergence fit needs ratio > 1");

  DivergenceFit fit;
  std::vector<double> xs;
  CutoffSet c = cut;
  double lam = cut.lambda_ir;
  for (int k = 0; k < points; ++k, lam /= ratio) {
    c.lambda_ir = lam;
    const auto r = gamma_variant(g, c, spec, v);
    fit.ok = fit.ok && r.converged;
    fit.lambdas.push_back(lam);
    fit.gammas.push_back(r.value);
    xs.push_back(std::log(1.0 / lam));
  }

  const double n = static_cast<double>(points);
  double mx = 0, my = 0;
  for (int k = 0; k < points; ++k) {
    mx += xs[k];
    my += fit.gammas[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int k = 0; k < points; ++k) {
    const double dx = xs[k] - mx, dy = fit.gammas[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (int k = 0; k < points; ++k) {
    const double r = fit.gammas[k] - (fit.intercept + fit.slope * xs[k]);
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.ok = fit.ok && fit.r_squared >= 1.0 - 1e-6;
  return fit;
}

const std::optional<QuadratureEstimate>& DecoherenceReport::get(Variant v) const {
  switch (v) {
    case Variant::full: return full;
    case Variant::dressed: return dressed;
    case Variant::sub: return sub;
    case Variant::hard: return hard;
  }
  return full;
}

bool DecoherenceReport::converged() const {
  if (!angular.converged) return false;
  for (const auto* r : {&full, &dressed, &sub, &hard})
    if (*r && !(*r)->converged) return false;
  return true;
}

DecoherenceReport compute_report(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                 std::span<const Variant> variants) {
  cut.validate();
  spec.validate();
  for (Variant v : variants)
    require_finite_ir(cut, CurrentParts::of(v), CurrentParts::of(v));

  DecoherenceReport rep;
  rep.angular = angular_integral(g, spec);
  rep.closed = closed_forms(g, cut);
  for (Variant v : variants) {
    const auto p = CurrentParts::of(v);
    const auto est = product(rep.angular, frequency_factor(g, cut, spec, p, p), spec);
    switch (v) {
      case Variant::full: rep.full = est; break;
      case Variant::dressed: rep.dressed = est; break;
      case Variant::sub: rep.sub = est; break;
      case Variant::hard: rep.hard = est; break;
    }
  }
  return rep;
}

}  // namespace softdeco
