#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "softdeco/kinematics.hpp"

namespace softdeco {

/// Euler-Mascheroni constant to 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Grid sizes and tolerances shared by the angular and frequency integrators.
struct QuadratureSpec {
  int n_theta = 48;            ///< Gauss-Legendre nodes in cos(theta)
  int n_phi = 96;              ///< trapezoid nodes in phi
  int panels_per_period = 4;   ///< frequency panels per 2 pi / tau
  double abs_tol = 1e-300;
  double rel_tol = 1e-9;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// A quadrature result together with its grid-doubling error gauge.
struct QuadratureEstimate {
  double value = 0.0;
  double error = 0.0;       ///< |fine - coarse|
  bool converged = true;    ///< error <= max(abs_tol, rel_tol |value|)
};

struct GaussLegendreRule {
  std::vector<double> nodes;    ///< on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// ---- special functions --------------------------------------------------

/// Ci(x) = -int_x^inf cos t / t dt for x > 0; absolute error below 1e-12.
double cosine_integral(double x);

/// Cin(x) = int_0^x (1 - cos t) / t dt = gamma_EM + ln x - Ci(x), entire, x >= 0.
double cosine_integral_entire(double x);

/// atanh(x) / x on [0, 1), continuous at 0.
double atanh_over_x(double x);
/// atanh(x) / x - 1 without cancellation for small x.
double atanh_over_x_minus_one(double x);

/// Modified Bessel functions of the second kind, x > 0.
double bessel_k0(double x);
double bessel_k1(double x);
/// K_2(x) = K_0(x) + 2 K_1(x) / x. Below x = 1e-3 the result grows like
/// 2 / x^2 and overflows to +inf for x below roughly 1.5e-154.
double bessel_k2(double x);

// ---- quadrature engines -------------------------------------------------

using SphereIntegrand = std::function<double(const Vec3&)>;
using FrequencyIntegrand = std::function<double(double)>;

/// Integral over the unit sphere, Gauss-Legendre in cos(theta) times the
/// periodic trapezoid rule in phi. The value comes from the doubled grid
/// (2 n_theta x 2 n_phi); the error is its difference from the base grid.
QuadratureEstimate sphere_integrate(const SphereIntegrand& f, const QuadratureSpec& spec);

/// Integral of g over [lo, hi]. Panel edges sit on multiples of
/// 2 pi / (tau panels_per_period) so every panel sees at most a fraction of a
/// period of cos(omega tau); panels touching omega = 0 are graded
/// geometrically so 1/omega behaviour is resolved. Each panel uses a
/// fixed-order Gauss-Legendre rule; the estimate comes from the split panels
/// and the error from the difference with the unsplit ones.
QuadratureEstimate freq_integrate(const FrequencyIntegrand& g, double lo, double hi, double tau,
                                  const QuadratureSpec& spec);

/// Number of panels freq_integrate would use on its coarse pass.
std::size_t frequency_panel_count(double lo, double hi, double tau, const QuadratureSpec& spec);

}  // namespace softdeco
