#pragma once

#include <complex>

#include "softdeco/kinematics.hpp"

namespace softdeco {

using ComplexFourCurrent = ComplexFourVector;

/// Leading (1/omega), sub-leading (omega^0) and hard (omega^1 and above)
/// pieces of a current at one photon momentum.
struct SoftCurrentTriple {
  ComplexFourCurrent div;
  ComplexFourCurrent sub;
  ComplexFourCurrent hard;

  ComplexFourCurrent total() const { return div + sub + hard; }
};

/// Fourier-space current j^a(q) = ie int ds e^{iq.X} d/ds (Xdot^a / q.Xdot)
/// of a piecewise-linear worldline. The derivative is supported on the
/// kinks, so the integral is the exact kink sum
///   ie sum_k e^{iq.X_k} [Xdot_after / q.Xdot_after - Xdot_before / q.Xdot_before].
/// The current is conserved, q_a j^a = 0. Throws for omega <= 0.
ComplexFourCurrent current_fourier(const Worldline& w, const PhotonMomentum& q);

/// j(-q) for a real position-space current: the complex conjugate of j(q).
ComplexFourCurrent current_fourier_reflected(const Worldline& w, const PhotonMomentum& q);

/// Split of current_fourier into endpoint pieces:
///   div  = ie  Delta[Xdot / q.Xdot]
///   sub  = e   Delta[q_b (X^a Xdot^b - Xdot^a X^b) / q.Xdot]
/// evaluated from the data at s_i and s_f only, and hard = full - div - sub.
/// The hard piece is assembled kink by kink as
///   ie sum_k (e^{i phi_k} - 1 - i phi_k) [jump in Xdot / q.Xdot]_k,  phi_k = q.X_k,
/// which equals full - div - sub identically but keeps its O(omega) size
/// without cancellation.
SoftCurrentTriple soft_decompose(const Worldline& w, const PhotonMomentum& q);

struct SoftFactors {
  FourVector leading;            ///< S0^a = p^a / (q.p)
  ComplexFourVector subleading;  ///< S1^a = i q_b J^{ba} / (q.p), J^{ab} = p^a x^b - p^b x^a
};

/// Soft factors of a particle with momentum p at position x. Throws if q.p = 0.
SoftFactors soft_factors(const PhotonMomentum& q, const FourVector& x, const FourVector& p);

/// Treatment of the spatial phases in the interferometer current difference.
enum class CurrentApproximation { exact, dipole };

/// Xdot_1 / q.Xdot_1 - Xdot_2 / q.Xdot_2, the common velocity factor of the
/// two-path current difference. Scales as 1/omega.
FourVector velocity_bracket(const InterferometerGeometry& g, const PhotonMomentum& q);

/// delta j = j_L - j_R for the two-path geometry with radiating vertices
/// X_i, X_L, X_R:
///   exact:  ie [e^{iq.X_i} - e^{iq.X_L} - e^{iq.X_R}] B
///   dipole: ie (1 - 2 e^{i omega tau}) B
/// With `detector_vertex` the recombination event adds + e^{iq.X_D} B
/// (dipole: + e^{2 i omega tau} B), which is what a particle that is at rest
/// before X_i and after X_D would produce.
ComplexFourCurrent delta_current(const InterferometerGeometry& g, const PhotonMomentum& q,
                                 CurrentApproximation mode, bool detector_vertex = false);

/// Scalar coefficients c with delta j_part = e c B in the dipole approximation:
///   div  = -i
///   sub  = 2 omega tau
///   hard = 2i (1 - e^{i omega tau} + i omega tau)
/// The hard coefficient is evaluated without cancellation for small omega tau.
struct DipoleCoefficients {
  std::complex<double> div;
  std::complex<double> sub;
  std::complex<double> hard;
};
DipoleCoefficients dipole_coefficients(double omega_tau);

/// Dipole split of delta_current into leading, sub-leading and hard pieces.
SoftCurrentTriple delta_current_parts(const InterferometerGeometry& g, const PhotonMomentum& q);

}  // namespace softdeco
