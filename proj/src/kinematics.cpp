#include "softdeco/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace softdeco {

namespace {

constexpr double kUnitTolerance = 1e-12;

void require_unit_timelike(const FourVector& u) {
  if (!(u.t > 0.0) || std::abs(minkowski_dot(u, u) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("worldline velocity must be unit timelike and future-pointing");
  }
}

bool events_match(const FourVector& a, const FourVector& b) {
  return std::abs(a.t - b.t) <= kUnitTolerance && std::abs(a.x - b.x) <= kUnitTolerance &&
         std::abs(a.y - b.y) <= kUnitTolerance && std::abs(a.z - b.z) <= kUnitTolerance;
}

}  // namespace

double elementary_charge(double alpha) { return std::sqrt(4.0 * std::numbers::pi * alpha); }

double norm(Vec3 a) { return std::hypot(a.x, a.y, a.z); }

ComplexFourVector to_complex(const FourVector& a) { return {a.t, a.x, a.y, a.z}; }

double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

std::complex<double> minkowski_dot(const FourVector& a, const ComplexFourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

std::complex<double> minkowski_dot(const ComplexFourVector& a, const ComplexFourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

double component_norm(const FourVector& a) {
  return std::sqrt(a.t * a.t + a.x * a.x + a.y * a.y + a.z * a.z);
}

double component_norm(const ComplexFourVector& a) {
  return std::sqrt(std::norm(a.t) + std::norm(a.x) + std::norm(a.y) + std::norm(a.z));
}

FourVector four_velocity(Vec3 v3) {
  const double v2 = dot(v3, v3);
  if (!(v2 < 1.0)) {
    throw std::domain_error("four_velocity: |v| must be below the speed of light");
  }
  const double gamma = 1.0 / std::sqrt(1.0 - v2);
  return {gamma, gamma * v3.x, gamma * v3.y, gamma * v3.z};
}

double relative_speed(const FourVector& u1, const FourVector& u2) {
  const FourVector d = u1 - u2;
  const double excess = std::max(0.0, -0.5 * minkowski_dot(d, d));  // u1.u2 - 1
  const double boost = 1.0 + excess;                                  // u1.u2
  return std::sqrt(excess * (boost + 1.0)) / boost;
}

PhotonMomentum::PhotonMomentum(double omega, Vec3 direction) : omega_(omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::domain_error("photon frequency must be finite and non-negative");
  }
  const double n = norm(direction);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("photon direction must be a non-zero finite vector");
  }
  n_hat_ = (1.0 / n) * direction;
}

PhotonMomentum PhotonMomentum::from_angles(double omega, double cos_theta, double phi) {
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  return PhotonMomentum(omega, {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta});
}

Worldline::Worldline(std::vector<WorldlineSegment> segments, double s_initial, double charge)
    : segments_(std::move(segments)), s_i_(s_initial), s_f_(s_initial), charge_(charge) {
  if (segments_.empty()) {
    throw std::invalid_argument("worldline needs at least one segment");
  }
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& seg = segments_[k];
    require_unit_timelike(seg.velocity);
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument("worldline segment " + std::to_string(k) + " has non-positive duration");
    }
    if (k > 0 && !events_match(segments_[k - 1].end_event(), seg.start_event)) {
      throw std::invalid_argument("worldline is discontinuous at segment " + std::to_string(k));
    }
    s_f_ += seg.duration;
  }
}

Worldline Worldline::from_velocities(const FourVector& start, std::span<const FourVector> velocities,
                                     std::span<const double> durations, double charge) {
  if (velocities.size() != durations.size()) {
    throw std::invalid_argument("velocities and durations differ in length");
  }
  std::vector<WorldlineSegment> segs;
  segs.reserve(velocities.size());
  FourVector at = start;
  for (std::size_t k = 0; k < velocities.size(); ++k) {
    segs.push_back({at, velocities[k], durations[k]});
    at = segs.back().end_event();
  }
  return Worldline(std::move(segs), 0.0, charge);
}

InterferometerGeometry interferometer_geometry(double l, double tau, double charge) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::domain_error("interferometer: tau must be positive");
  }
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw std::domain_error("interferometer: l must be non-negative");
  }
  const double v = l / tau;
  if (!(v < 1.0)) {
    throw std::domain_error("interferometer: l / tau must be below the speed of light");
  }
  InterferometerGeometry g;
  g.l = l;
  g.tau = tau;
  g.v = v;
  g.gamma = 1.0 / std::sqrt(1.0 - v * v);
  g.charge = charge;
  g.X_i = {0.0, 0.0, 0.0, 0.0};
  g.X_L = {tau, 0.0, l, 0.0};
  g.X_R = {tau, l, 0.0, 0.0};
  g.X_D = {2.0 * tau, l, l, 0.0};
  g.Xdot_1 = four_velocity({0.0, v, 0.0});
  g.Xdot_2 = four_velocity({v, 0.0, 0.0});
  return g;
}

Interferometer build_interferometer(double l, double tau, double charge) {
  auto g = interferometer_geometry(l, tau, charge);
  const double leg = tau / g.gamma;
  const FourVector left_v[] = {g.Xdot_1, g.Xdot_2};
  const FourVector right_v[] = {g.Xdot_2, g.Xdot_1};
  const double durations[] = {leg, leg};
  auto left = Worldline::from_velocities(g.X_i, left_v, durations, charge);
  auto right = Worldline::from_velocities(g.X_i, right_v, durations, charge);
  return {g, std::move(left), std::move(right)};
}

}  // namespace softdeco
