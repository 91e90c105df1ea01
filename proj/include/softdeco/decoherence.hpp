#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "softdeco/currents.hpp"
#include "softdeco/kinematics.hpp"
#include "softdeco/numerics.hpp"

namespace softdeco {

/// Frequency cutoffs and optional bath temperature.
struct CutoffSet {
  double lambda_ir = 0.0;       ///< IR cutoff, >= 0
  double omega_uv = 1.0;        ///< UV cutoff, the inverse size of the scattering regions
  std::optional<double> beta;   ///< inverse temperature; absent means T = 0

  void validate() const;
};

enum class Variant { full, dressed, sub, hard };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Which pieces of the dipole current difference couple to the field.
struct CurrentParts {
  bool div = false;
  bool sub = false;
  bool hard = false;

  static CurrentParts of(Variant v);
};

/// Thrown when the undressed functional is asked for at lambda_ir = 0.
class InfraredDivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// P_jk dj^j conj(dj^k) with P_jk = delta_jk - n_j n_k and P_0a = 0.
/// Real and non-negative.
double gamma_kernel(const ComplexFourCurrent& dj, const PhotonMomentum& q);

/// Angular integral of omega^2 P_ab B^a B^b over the sphere, where B is the
/// velocity bracket; independent of omega.
QuadratureEstimate angular_integral(const InterferometerGeometry& g, const QuadratureSpec& spec);

/// Bilinear decoherence integral in the dipole approximation,
///   1/(4 (2 pi)^3) int_lambda^Omega d omega omega coth(beta omega / 2)
///       oint dS^2 Re[P_ab dj_left^a conj(dj_right^b)],
/// with dj_left and dj_right assembled from the selected current parts. The
/// dipole current factorizes as e c(omega tau) B(omega, n), so the double
/// integral is the product of angular_integral and a one-dimensional
/// frequency integral of Re[c_left conj(c_right)] / omega.
QuadratureEstimate gamma_bilinear(const InterferometerGeometry& g, const CutoffSet& cut,
                                  const QuadratureSpec& spec, CurrentParts left, CurrentParts right);

/// gamma_bilinear(parts, parts). Every variant goes through this path, so
/// the dressed functional is literally the full one with j_div switched off.
QuadratureEstimate gamma_functional(const InterferometerGeometry& g, const CutoffSet& cut,
                                    const QuadratureSpec& spec, CurrentParts parts);

/// Undressed functional; diverges like ln(1/lambda). Physically meaningless
/// on its own and kept for the divergence study. Throws
/// InfraredDivergenceError for lambda_ir = 0.
QuadratureEstimate gamma_full(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec);
/// Dressed functional: j_div decoupled.
QuadratureEstimate gamma_dressed(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec);
/// Sub-leading soft current alone.
QuadratureEstimate gamma_sub(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec);
/// Hard current alone (both soft pieces decoupled).
QuadratureEstimate gamma_hard(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec);

QuadratureEstimate gamma_variant(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                 Variant v);

/// Unfactorized double integral: for every frequency node the sphere
/// integral of gamma_kernel is taken afresh. With CurrentApproximation::exact
/// the spatial phases are kept (full current only). Slow; meant for
/// cross-checks on small grids.
QuadratureEstimate gamma_direct(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                CurrentParts parts, CurrentApproximation approx = CurrentApproximation::dipole,
                                bool detector_vertex = false);

/// Closed-form evaluation of the functionals for the square geometry.
struct ClosedForms {
  double v12 = 0.0;                   ///< relative speed of the two arm velocities
  double angular_exact = 0.0;         ///< 8 pi [atanh(v12)/v12 - 1]
  double angular_small_v = 0.0;       ///< 16 pi v^2 / 3

  double freq_dressed = 0.0;          ///< 2 [Cin(Omega tau) - Cin(lambda tau)]
  double freq_dressed_asymptotic = 0.0;  ///< 2 ln(Omega tau)
  double freq_sub = 0.0;              ///< (Omega^2 - lambda^2) tau^2 / 2
  double freq_hard = 0.0;             ///< freq_dressed + freq_sub - 2 [cos(lambda tau) - cos(Omega tau)]
  double freq_hard_asymptotic = 0.0;  ///< 2 ln(Omega tau) + (Omega tau)^2 / 2
  std::optional<double> freq_full;    ///< 5 ln(Omega/lambda) - 4 [Ci(Omega tau) - Ci(lambda tau)], lambda > 0

  double dressed = 0.0;               ///< e^2/(2 pi)^3 freq_dressed angular_exact
  double sub = 0.0;
  double hard = 0.0;
  std::optional<double> full;         ///< e^2/(4 (2 pi)^3) freq_full angular_exact

  double dressed_asymptotic = 0.0;    ///< 4 e^2 v^2 / (3 pi^2) ln(Omega tau)
  double sub_asymptotic = 0.0;        ///< e^2 Omega^2 v^2 tau^2 / (3 pi^2) = e^2 (Omega l)^2 / (3 pi^2)
  double hard_two_e2 = 0.0;         ///< 2 e^2 v^2 / (3 pi^2) [2 ln(Omega tau) + (Omega tau)^2 / 2]
  double hard_one_e2 = 0.0;        ///< e^2 v^2 / (3 pi^2) [...], half of hard_two_e2
  double divergence_coefficient = 0.0;  ///< e^2/(32 pi^3) angular_exact, d Gamma_full / d ln(1/lambda)
};

/// T = 0 closed forms; a finite beta in `cut` is ignored here.
ClosedForms closed_forms(const InterferometerGeometry& g, const CutoffSet& cut);

/// Least-squares fit Gamma(lambda) = a + b ln(1/lambda) on lambda_k =
/// lambda_ir / ratio^k, k = 0 .. points-1.
struct DivergenceFit {
  double intercept = 0.0;
  double slope = 0.0;      ///< b
  double r_squared = 1.0;
  bool ok = true;          ///< r_squared >= 1 - 1e-6 and every point converged
  std::vector<double> lambdas;
  std::vector<double> gammas;
};

DivergenceFit divergence_coefficient(const InterferometerGeometry& g, const CutoffSet& cut,
                                     const QuadratureSpec& spec, Variant v = Variant::full, int points = 8,
                                     double ratio = 2.0);

struct DecoherenceReport {
  std::optional<QuadratureEstimate> full;
  std::optional<QuadratureEstimate> dressed;
  std::optional<QuadratureEstimate> sub;
  std::optional<QuadratureEstimate> hard;
  QuadratureEstimate angular;
  ClosedForms closed;

  const std::optional<QuadratureEstimate>& get(Variant v) const;
  bool converged() const;
};

/// Evaluate the requested variants. Throws InfraredDivergenceError if `full`
/// is requested with lambda_ir = 0.
DecoherenceReport compute_report(const InterferometerGeometry& g, const CutoffSet& cut, const QuadratureSpec& spec,
                                 std::span<const Variant> variants);

}  // namespace softdeco
