#pragma once

#include <complex>
#include <type_traits>
#include <span>
#include <vector>

namespace softdeco {

/// Fine-structure constant used for all default couplings.
inline constexpr double kFineStructure = 1.0 / 137.035999;

/// Elementary charge in Heaviside-Lorentz natural units, e = sqrt(4 pi alpha).
double elementary_charge(double alpha = kFineStructure);

struct Vec3 {
  double x{}, y{}, z{};

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 a);

/// Four-component Minkowski vector (t, x, y, z). The same layout carries
/// positions, velocities, momenta (real) and Fourier-space currents (complex).
template <class T>
struct BasicFourVector {
  T t{}, x{}, y{}, z{};

  BasicFourVector& operator+=(const BasicFourVector& o) {
    t += o.t; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  BasicFourVector& operator-=(const BasicFourVector& o) {
    t -= o.t; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  friend BasicFourVector operator+(BasicFourVector a, const BasicFourVector& b) { return a += b; }
  friend BasicFourVector operator-(BasicFourVector a, const BasicFourVector& b) { return a -= b; }
  friend BasicFourVector operator-(const BasicFourVector& a) { return {-a.t, -a.x, -a.y, -a.z}; }
  friend BasicFourVector operator*(const T& s, const BasicFourVector& a) {
    return {s * a.t, s * a.x, s * a.y, s * a.z};
  }
  friend BasicFourVector operator*(const BasicFourVector& a, const T& s) { return s * a; }
  friend BasicFourVector operator/(const BasicFourVector& a, const T& s) {
    return {a.t / s, a.x / s, a.y / s, a.z / s};
  }

  Vec3 spatial() const requires std::is_same_v<T, double> { return {x, y, z}; }
};

using FourVector = BasicFourVector<double>;
using ComplexFourVector = BasicFourVector<std::complex<double>>;

/// Promote a real four-vector to the complex layout.
ComplexFourVector to_complex(const FourVector& a);

/// Signature (+,-,-,-) contraction. The complex overload contracts without
/// conjugation, so it is bilinear.
double minkowski_dot(const FourVector& a, const FourVector& b);
std::complex<double> minkowski_dot(const FourVector& a, const ComplexFourVector& b);
std::complex<double> minkowski_dot(const ComplexFourVector& a, const ComplexFourVector& b);

/// Euclidean component norm sqrt(sum |a^mu|^2); used only as a scale for tolerances.
double component_norm(const FourVector& a);
double component_norm(const ComplexFourVector& a);

/// gamma (1, v3) for |v3| < 1. Throws std::domain_error otherwise.
FourVector four_velocity(Vec3 v3);

/// Relative speed sqrt(1 - 1/(u1.u2)^2) of two unit timelike vectors,
/// evaluated through u1.u2 - 1 = -(u1 - u2).(u1 - u2) / 2.
double relative_speed(const FourVector& u1, const FourVector& u2);

/// Null photon four-momentum q = omega (1, n_hat).
class PhotonMomentum {
 public:
  /// `direction` is normalized; zero vectors and negative omega are rejected.
  PhotonMomentum(double omega, Vec3 direction);
  static PhotonMomentum from_angles(double omega, double cos_theta, double phi);

  double omega() const { return omega_; }
  Vec3 n_hat() const { return n_hat_; }
  FourVector four() const { return {omega_, omega_ * n_hat_.x, omega_ * n_hat_.y, omega_ * n_hat_.z}; }
  /// Same direction, different frequency.
  PhotonMomentum with_omega(double omega) const { return PhotonMomentum(omega, n_hat_); }

 private:
  double omega_;
  Vec3 n_hat_;
};

struct WorldlineSegment {
  FourVector start_event;
  FourVector velocity;  ///< unit, future-pointing
  double duration{};    ///< proper time, > 0

  FourVector end_event() const { return start_event + duration * velocity; }
};

/// Piecewise-linear timelike trajectory. Construction validates unit
/// velocities and continuity between consecutive segments.
class Worldline {
 public:
  Worldline(std::vector<WorldlineSegment> segments, double s_initial = 0.0, double charge = 1.0);

  /// Chain segments from `start` with the given velocities and proper durations.
  static Worldline from_velocities(const FourVector& start, std::span<const FourVector> velocities,
                                   std::span<const double> durations, double charge = 1.0);

  std::span<const WorldlineSegment> segments() const { return segments_; }
  double s_initial() const { return s_i_; }
  double s_final() const { return s_f_; }
  double charge() const { return charge_; }

  FourVector initial_event() const { return segments_.front().start_event; }
  FourVector final_event() const { return segments_.back().end_event(); }
  FourVector initial_velocity() const { return segments_.front().velocity; }
  FourVector final_velocity() const { return segments_.back().velocity; }

  /// Total proper time s_f - s_i.
  double proper_time() const { return s_f_ - s_i_; }

 private:
  std::vector<WorldlineSegment> segments_;
  double s_i_;
  double s_f_;
  double charge_;
};

/// The square two-path geometry: source at the origin, turning points after
/// one side of length l (coordinate time tau), recombination at (2 tau, l, l, 0).
struct InterferometerGeometry {
  double l{};
  double tau{};
  double v{};      ///< l / tau
  double gamma{};  ///< 1 / sqrt(1 - v^2)
  double charge{};
  FourVector X_i, X_L, X_R, X_D;
  FourVector Xdot_1;  ///< along y
  FourVector Xdot_2;  ///< along x
};

struct Interferometer {
  InterferometerGeometry geometry;
  Worldline left;   ///< X_i -> X_L -> X_D with Xdot_1 then Xdot_2
  Worldline right;  ///< X_i -> X_R -> X_D with Xdot_2 then Xdot_1
};

/// Requires l >= 0, tau > 0 and l / tau < 1. l = 0 gives the degenerate
/// geometry in which both arms coincide.
Interferometer build_interferometer(double l, double tau, double charge = elementary_charge());

/// Geometry only, for callers that never touch the worldlines.
InterferometerGeometry interferometer_geometry(double l, double tau, double charge = elementary_charge());

}  // namespace softdeco
