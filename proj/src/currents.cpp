#include "softdeco/currents.hpp"

#include <cmath>
#include <stdexcept>

namespace softdeco {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

void require_positive_frequency(const PhotonMomentum& q) {
  if (!(q.omega() > 0.0)) throw std::domain_error("current requires omega > 0");
}

// e^{i phi} - 1 - i phi, accurate to full relative precision near phi = 0.
cplx expi_minus_linear(double phi) {
  const double s = std::sin(0.5 * phi);
  const double re = -2.0 * s * s;
  double im;
  if (std::abs(phi) < 0.5) {
    // sin(phi) - phi = sum_{k>=1} (-1)^k phi^{2k+1} / (2k+1)!
    const double p2 = phi * phi;
    double term = phi;
    im = 0.0;
    for (int k = 1; k < 12; ++k) {
      term *= -p2 / ((2.0 * k) * (2.0 * k + 1.0));
      im += term;
    }
  } else {
    im = std::sin(phi) - phi;
  }
  return {re, im};
}

FourVector over_q_dot(const FourVector& u, const FourVector& q4) {
  const double qu = minkowski_dot(q4, u);
  return u / qu;
}

ComplexFourVector scale(cplx s, const FourVector& a) { return s * to_complex(a); }

}  // namespace

ComplexFourCurrent current_fourier(const Worldline& w, const PhotonMomentum& q) {
  require_positive_frequency(q);
  const FourVector q4 = q.four();
  const auto segs = w.segments();
  ComplexFourCurrent j{};
  for (std::size_t k = 1; k < segs.size(); ++k) {
    const FourVector jump = over_q_dot(segs[k].velocity, q4) - over_q_dot(segs[k - 1].velocity, q4);
    const double phase = minkowski_dot(q4, segs[k].start_event);
    j += scale(std::polar(1.0, phase), jump);
  }
  return (kI * w.charge()) * j;
}

ComplexFourCurrent current_fourier_reflected(const Worldline& w, const PhotonMomentum& q) {
  const auto j = current_fourier(w, q);
  return {std::conj(j.t), std::conj(j.x), std::conj(j.y), std::conj(j.z)};
}

SoftCurrentTriple soft_decompose(const Worldline& w, const PhotonMomentum& q) {
  require_positive_frequency(q);
  const FourVector q4 = q.four();
  const double e = w.charge();

  auto leading = [&](const FourVector& u) { return over_q_dot(u, q4); };
  auto subleading = [&](const FourVector& x, const FourVector& u) {
    // X^a - Xdot^a (q.X) / (q.Xdot)
    return x - (minkowski_dot(q4, x) / minkowski_dot(q4, u)) * u;
  };

  SoftCurrentTriple out;
  out.div = scale(kI * e, leading(w.final_velocity()) - leading(w.initial_velocity()));
  out.sub = scale(e, subleading(w.final_event(), w.final_velocity()) -
                         subleading(w.initial_event(), w.initial_velocity()));

  const auto segs = w.segments();
  ComplexFourCurrent hard{};
  for (std::size_t k = 1; k < segs.size(); ++k) {
    const FourVector jump = leading(segs[k].velocity) - leading(segs[k - 1].velocity);
    hard += scale(expi_minus_linear(minkowski_dot(q4, segs[k].start_event)), jump);
  }
  out.hard = (kI * e) * hard;
  return out;
}

SoftFactors soft_factors(const PhotonMomentum& q, const FourVector& x, const FourVector& p) {
  const FourVector q4 = q.four();
  const double qp = minkowski_dot(q4, p);
  if (qp == 0.0 || !std::isfinite(qp)) throw std::domain_error("soft_factors: q.p must be non-zero");
  SoftFactors s;
  s.leading = p / qp;
  // q_b J^{ba} = (q.p) x^a - (q.x) p^a
  const FourVector qj = qp * x - minkowski_dot(q4, x) * p;
  s.subleading = scale(kI / qp, qj);
  return s;
}

FourVector velocity_bracket(const InterferometerGeometry& g, const PhotonMomentum& q) {
  const FourVector q4 = q.four();
  return over_q_dot(g.Xdot_1, q4) - over_q_dot(g.Xdot_2, q4);
}

ComplexFourCurrent delta_current(const InterferometerGeometry& g, const PhotonMomentum& q,
                                 CurrentApproximation mode, bool detector_vertex) {
  require_positive_frequency(q);
  const FourVector q4 = q.four();
  cplx phases;
  if (mode == CurrentApproximation::exact) {
    auto ph = [&](const FourVector& x) { return std::polar(1.0, minkowski_dot(q4, x)); };
    phases = ph(g.X_i) - ph(g.X_L) - ph(g.X_R);
    if (detector_vertex) phases += ph(g.X_D);
  } else {
    const double wt = q.omega() * g.tau;
    phases = 1.0 - 2.0 * std::polar(1.0, wt);
    if (detector_vertex) phases += std::polar(1.0, 2.0 * wt);
  }
  return scale(kI * g.charge * phases, velocity_bracket(g, q));
}

DipoleCoefficients dipole_coefficients(double omega_tau) {
  // 1 - e^{ix} + ix = -(e^{ix} - 1 - ix)
  return {-kI, cplx(2.0 * omega_tau, 0.0), -2.0 * kI * expi_minus_linear(omega_tau)};
}

SoftCurrentTriple delta_current_parts(const InterferometerGeometry& g, const PhotonMomentum& q) {
  require_positive_frequency(q);
  const auto c = dipole_coefficients(q.omega() * g.tau);
  const FourVector b = velocity_bracket(g, q);
  return {scale(g.charge * c.div, b), scale(g.charge * c.sub, b), scale(g.charge * c.hard, b)};
}

}  // namespace softdeco
