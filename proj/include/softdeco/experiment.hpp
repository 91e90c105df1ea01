#pragma once

#include <string>

#include "softdeco/decoherence.hpp"
#include "softdeco/kinematics.hpp"

namespace softdeco {

/// Two-slit apparatus. Lengths share one (arbitrary) unit.
struct SlitGeometry {
  double a_o = 1.0;         ///< plate thickness
  double b_o = 1.0;         ///< slit width
  double d_o = 1.0;         ///< slit separation
  double L_o = 1e4;         ///< slit to screen distance
  double v_over_c = 0.01;
  double Q = 1.0;           ///< charge in units of e
  double alpha = kFineStructure;

  /// Lengths > 0, 0 < v/c < 1, L_o >= a_o, alpha > 0, Q finite.
  void validate() const;
};

enum class SlitPath { A, B };

/// a_j ~ (v^2 / ell_o) (z_f +- d_o / 2), + for path A. ell_o is the
/// longitudinal length scale of the deflection and must be > 0.
double slit_acceleration(const SlitGeometry& s, double z_f, SlitPath path, double ell_o);

/// Q^2 (16 alpha / 3 pi) (v/c)^2 ln(L_o / a_o).
double gamma_dressed_2slit(const SlitGeometry& s);

/// The hard-sector estimate in three normalizations. `bare` carries no
/// (v/c)^2; the two companions do, one with the 2 e^2 / 3 pi^2 coefficient
/// that quadrature supports and one with half of it.
struct HardSlitEstimate {
  double bare = 0.0;          ///< Q^2 (8 alpha / 3 pi) [2 ln r + r^2 / 2]
  double with_velocity = 0.0;    ///< Q^2 (8 alpha / 3 pi) (v/c)^2 [...]
  double half_coefficient = 0.0; ///< Q^2 (4 alpha / 3 pi) (v/c)^2 [...]
  double bare_over_with_velocity = 0.0;     ///< (c/v)^2
  double bare_over_half_coefficient = 0.0;  ///< 2 (c/v)^2
};

HardSlitEstimate gamma_hard_2slit(const SlitGeometry& s);

/// Interferometer parameters that reproduce the slit estimate: tau = 1,
/// l = v/c, Omega = L_o / a_o, e^2 = 4 pi alpha Q^2.
struct SlitMapping {
  InterferometerGeometry geometry;
  CutoffSet cutoffs;
};
SlitMapping slit_mapping(const SlitGeometry& s);

/// Polarizable sphere above a mirror.
struct ParticleMirror {
  double r_o = 1.0;      ///< radius
  double Z_o = 1.0;      ///< closest distance
  double epsilon = 2.0;  ///< dielectric constant
  double g_o = 1.0;      ///< surface coupling strength
  double q = 1.0;        ///< surface wavenumber
  double X_o = 0.0;      ///< lateral coordinate
  double U_o = 0.0;      ///< short-range barrier

  /// r_o > 0, Z_o > 0, epsilon > 1.
  void validate() const;
};

enum class VdwRegime { far, near };

struct VdwResult {
  double value = 0.0;
  bool regime_ok = true;   ///< far needs Z_o > r_o, near needs Z_o < r_o
  std::string warning;     ///< set when regime_ok is false
};

/// far:  U - (9 / 16 pi) r^3 / (r + Z)^4
/// near: U + (1/3 - 5/pi^2)(pi^3 / 720) / Z
/// with U = U_o for Z < 0 and 0 otherwise. A geometry outside the regime
/// still returns the asymptotic value, flagged.
VdwResult vdw_potential(const ParticleMirror& p, VdwRegime regime);

/// -(sqrt(2) pi^2 / 3) r^3 g (q^2 / Z^2) K_2(q Z) cos(q X). Needs q Z > 0.
double surface_coupling(const ParticleMirror& p);

/// (8 pi / 3) ((eps - 1) / (eps + 2))^2 r^6 |q|^4. Throws for eps = -2 or
/// q_mag <= 0.
double rayleigh_rate(const ParticleMirror& p, double q_mag);

}  // namespace softdeco
