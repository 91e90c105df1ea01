#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "softdeco/checks.hpp"
#include "softdeco/currents.hpp"
#include "softdeco/decoherence.hpp"
#include "support.hpp"

using namespace softdeco;
using cplx = std::complex<double>;

namespace {

const cplx I{0.0, 1.0};

double max_abs_diff(const ComplexFourVector& a, const ComplexFourVector& b) { return component_norm(a - b); }

// Rapidity-interpolated kink of width ds centred on the origin, integrated
// as a Riemann-Stieltjes sum of e^{iq.X} d(Xdot / q.Xdot). Independent of
// the kink-sum code.
ComplexFourVector smoothed_kink_current(Vec3 v_before, Vec3 v_after, const PhotonMomentum& q, double ds, int n) {
  const FourVector q4 = q.four();
  auto vel = [&](double s) {
    double t = std::clamp(s / ds + 0.5, 0.0, 1.0);
    const Vec3 v = v_before + t * (v_after - v_before);
    return four_velocity(v);
  };
  auto A = [&](double s) {
    const FourVector u = vel(s);
    return u / minkowski_dot(q4, u);
  };
  // X(s) by midpoint integration from X(0) = 0 outward
  const double h = ds / n;
  std::vector<FourVector> X(n + 1);
  const int mid = n / 2;
  X[mid] = {};
  for (int k = mid; k < n; ++k) X[k + 1] = X[k] + h * vel(-0.5 * ds + (k + 0.5) * h);
  for (int k = mid; k > 0; --k) X[k - 1] = X[k] - h * vel(-0.5 * ds + (k - 0.5) * h);
  ComplexFourVector j{};
  for (int k = 0; k < n; ++k) {
    const double s0 = -0.5 * ds + k * h;
    const FourVector xm = 0.5 * (X[k] + X[k + 1]);
    j += std::polar(1.0, minkowski_dot(q4, xm)) * to_complex(A(s0 + h) - A(s0));
  }
  return I * j;
}

}  // namespace

TEST_CASE("straight worldline carries no current") {
  const std::vector<FourVector> v{four_velocity({0.3, 0.1, 0})};
  const std::vector<double> d{5.0};
  const auto w = Worldline::from_velocities({}, v, d);
  const auto j = current_fourier(w, PhotonMomentum(1.3, {1, 1, 0}));
  CHECK(component_norm(j) == 0.0);
}

TEST_CASE("single kink to rest") {
  const double v = 0.3, omega = 2.0, e = 0.7;
  const std::vector<FourVector> vel{four_velocity({v, 0, 0}), {1, 0, 0, 0}};
  const std::vector<double> dur{1.0, 1.0};
  const FourVector start = -1.0 * vel[0];  // kink at the origin
  const auto w = Worldline::from_velocities(start, vel, dur, e);
  const PhotonMomentum q(omega, {0, 0, 1});
  const auto j = current_fourier(w, q);
  const ComplexFourVector want{0.0, -I * e * v / omega, 0.0, 0.0};
  CHECK(max_abs_diff(j, want) <= 1e-15);

  // smoothed-kink quadrature oracle
  const PhotonMomentum q1(1.0, {0, 0, 1});
  const auto jk = current_fourier(Worldline::from_velocities(start, vel, dur, 1.0), q1);
  const auto js = smoothed_kink_current({v, 0, 0}, {0, 0, 0}, q1, 1e-4, 20000);
  CHECK(max_abs_diff(jk, js) <= 1e-6 * component_norm(jk));
}

TEST_CASE("smoothed kink oracle at an oblique photon") {
  const Vec3 vb{0.2, -0.1, 0.3}, va{-0.4, 0.2, 0.1};
  const std::vector<FourVector> vel{four_velocity(vb), four_velocity(va)};
  const std::vector<double> dur{1.0, 1.0};
  const auto w = Worldline::from_velocities(-1.0 * vel[0], vel, dur);
  const PhotonMomentum q(1.0, {0.3, 0.5, -0.8});
  const auto jk = current_fourier(w, q);
  const auto js = smoothed_kink_current(vb, va, q, 1e-6, 20000);
  CHECK(max_abs_diff(jk, js) <= 1e-6 * component_norm(jk));
}

TEST_CASE("rejects non-positive frequency") {
  std::mt19937_64 rng(1);
  const auto w = checks::random_worldline(rng, 2);
  CHECK_THROWS_AS(current_fourier(w, PhotonMomentum(0.0, {0, 0, 1})), std::domain_error);
  CHECK_THROWS_AS(soft_decompose(w, PhotonMomentum(0.0, {0, 0, 1})), std::domain_error);
  const auto g = interferometer_geometry(0.1, 1.0);
  CHECK_THROWS_AS(delta_current(g, PhotonMomentum(0.0, {0, 0, 1}), CurrentApproximation::dipole),
                  std::domain_error);
}

TEST_CASE("conservation on random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> kinks(1, 6);
  std::uniform_real_distribution<double> lw(std::log(0.1), std::log(10.0));
  for (int i = 0; i < 1000; ++i) {
    const auto w = checks::random_worldline(rng, kinks(rng));
    const PhotonMomentum q(std::exp(lw(rng)), checks::random_direction(rng));
    const FourVector q4 = q.four();
    const auto full = current_fourier(w, q);
    const auto p = soft_decompose(w, q);
    for (const auto* j : {&full, &p.div, &p.sub, &p.hard}) {
      CHECK(std::abs(minkowski_dot(q4, *j)) <= 1e-12 * q.omega() * component_norm(*j));
    }
    CHECK(max_abs_diff(p.total(), full) <= 1e-10 * component_norm(full));
  }
}

TEST_CASE("identical endpoint velocities give no leading piece") {
  const FourVector a = four_velocity({0.2, 0, 0}), b = four_velocity({0, 0.4, 0});
  const std::vector<FourVector> vel{a, b, a};
  const std::vector<double> dur{1.0, 0.5, 1.0};
  const auto w = Worldline::from_velocities({}, vel, dur);
  const auto p = soft_decompose(w, PhotonMomentum(0.7, {0.1, 0.2, 1}));
  CHECK(component_norm(p.div) == 0.0);
}

TEST_CASE("leading piece of the left arm scales as 1/omega") {
  const auto ifm = build_interferometer(0.1, 1.0);
  const auto a = soft_decompose(ifm.left, PhotonMomentum(1e-6, {0, 0, 1})).div;
  const auto b = soft_decompose(ifm.left, PhotonMomentum(1e-7, {0, 0, 1})).div;
  CHECK(max_abs_diff(1e-6 * a, 1e-7 * b) <= 1e-4 * component_norm(1e-7 * b));
}

TEST_CASE("endpoint pieces ignore interior kinks") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 50; ++i) {
    const auto base = checks::random_worldline(rng, 1);
    const auto s = base.segments();
    // same endpoints and endpoint velocities, one extra detour before the kink
    const FourVector M = s[0].start_event + 0.5 * s[0].duration * s[0].velocity;
    const FourVector K = s[1].start_event;
    FourVector Y = 0.5 * (M + K);
    Y.x += u(rng) * 0.2 * (K.t - M.t);
    Y.y += u(rng) * 0.2 * (K.t - M.t);
    auto leg = [](const FourVector& from, const FourVector& to) {
      const FourVector d = to - from;
      const double tau = std::sqrt(minkowski_dot(d, d));
      return std::pair{d / tau, tau};
    };
    const auto [u1, d1] = leg(M, Y);
    const auto [u2, d2] = leg(Y, K);
    const std::vector<FourVector> vel{s[0].velocity, u1, u2, s[1].velocity};
    const std::vector<double> dur{0.5 * s[0].duration, d1, d2, s[1].duration};
    const auto detour = Worldline::from_velocities(s[0].start_event, vel, dur);

    const PhotonMomentum q(0.5 + i * 0.05, checks::random_direction(rng));
    const auto a = soft_decompose(base, q), b = soft_decompose(detour, q);
    CHECK(max_abs_diff(a.div, b.div) <= 1e-12 * component_norm(a.div));
    CHECK(max_abs_diff(a.sub, b.sub) <= 1e-12 * std::max(1.0, component_norm(a.sub)));
    // the full current does change
    CHECK(max_abs_diff(current_fourier(base, q), current_fourier(detour, q)) > 1e-6);
  }
}

TEST_CASE("soft exponents") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const auto w = checks::random_worldline(rng, 3);
    const Vec3 n = checks::random_direction(rng);
    std::vector<double> ws, d, s, h;
    for (int k = 0; k <= 16; ++k) {
      const double omega = std::pow(10.0, -8.0 + 0.25 * k);
      const auto p = soft_decompose(w, PhotonMomentum(omega, n));
      ws.push_back(omega);
      d.push_back(component_norm(p.div));
      s.push_back(component_norm(p.sub));
      h.push_back(component_norm(p.hard));
    }
    CHECK(checks::loglog_slope(ws, d) == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(std::abs(checks::loglog_slope(ws, s)) <= 0.01);
    CHECK(checks::loglog_slope(ws, h) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("soft factors") {
  const PhotonMomentum q(2.0, {0, 0, 1});
  const auto s = soft_factors(q, {0, 0, 0, 0}, {3.0, 0, 0, 0});
  CHECK(s.leading.t == doctest::Approx(0.5));  // m cancels: p/(q.p) = 1/omega
  CHECK(s.leading.x == 0.0);
  CHECK(component_norm(s.subleading) == 0.0);

  const auto s2 = soft_factors(q, {0.3, 1, 2, 3}, four_velocity({0.1, 0.2, 0}));
  const auto s3 = soft_factors(q, {0.3, 1, 2, 3}, 5.0 * four_velocity({0.1, 0.2, 0}));
  CHECK(component_norm(s2.leading - s3.leading) <= 1e-15);
  CHECK(max_abs_diff(s2.subleading, s3.subleading) <= 1e-14);

  CHECK_THROWS_AS(soft_factors(q, {}, {1, 0, 0, 1}), std::domain_error);
}

TEST_CASE("endpoint soft factors reproduce i j(-q) to O(omega)") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 25; ++i) {
    const auto w = checks::random_worldline(rng, 2, 0.9, 0.4);
    const Vec3 n = checks::random_direction(rng);
    std::vector<double> ws, res;
    for (int k = 0; k <= 8; ++k) {
      const PhotonMomentum q(std::pow(10.0, -5.0 + 0.25 * k), n);
      const auto si = soft_factors(q, w.initial_event(), w.initial_velocity());
      const auto sf = soft_factors(q, w.final_event(), w.final_velocity());
      const auto boundary = w.charge() * (to_complex(sf.leading - si.leading) + (sf.subleading - si.subleading));
      ws.push_back(q.omega());
      res.push_back(component_norm(I * current_fourier_reflected(w, q) - boundary));
    }
    CHECK(checks::loglog_slope(ws, res) == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("reflected current is the conjugate") {
  std::mt19937_64 rng(4);
  const auto w = checks::random_worldline(rng, 3);
  const PhotonMomentum q(1.1, {1, 0, 0});
  const auto j = current_fourier(w, q), r = current_fourier_reflected(w, q);
  CHECK(r.x == std::conj(j.x));
  CHECK(r.t == std::conj(j.t));
}

TEST_CASE("current difference vanishes for coincident arms") {
  const auto g = interferometer_geometry(0.0, 1.0);
  const PhotonMomentum q(0.8, {0.2, 0.3, 0.9});
  CHECK(component_norm(delta_current(g, q, CurrentApproximation::exact)) == 0.0);
  CHECK(component_norm(delta_current(g, q, CurrentApproximation::dipole)) == 0.0);
}

TEST_CASE("dipole against exact current difference") {
  const auto g = interferometer_geometry(0.01, 1.0);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const PhotonMomentum q(0.1, checks::random_direction(rng));  // omega l = 1e-3
    const auto ex = delta_current(g, q, CurrentApproximation::exact);
    const auto dp = delta_current(g, q, CurrentApproximation::dipole);
    CHECK(max_abs_diff(ex, dp) <= 2e-3 * component_norm(dp));
  }
}

TEST_CASE("dipole prefactor gives 5 - 4 cos") {
  const auto g = interferometer_geometry(0.2, 1.0);
  for (double w : {0.05, 0.7, 2.0, 13.0}) {
    const PhotonMomentum q(w, {0.3, -0.4, 0.5});
    const double k = gamma_kernel(delta_current(g, q, CurrentApproximation::dipole), q);
    const double b = gamma_kernel(to_complex(velocity_bracket(g, q)), q);
    CHECK(k / (g.charge * g.charge * b) == doctest::Approx(5.0 - 4.0 * std::cos(w)).epsilon(1e-12));
  }
}

TEST_CASE("dipole parts add up") {
  const auto g = interferometer_geometry(0.3, 1.5);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const PhotonMomentum q(0.01 + 0.2 * i, checks::random_direction(rng));
    const auto p = delta_current_parts(g, q);
    const auto d = delta_current(g, q, CurrentApproximation::dipole);
    CHECK(max_abs_diff(p.total(), d) <= 1e-12 * component_norm(d));
  }
}

TEST_CASE("dipole coefficients") {
  // hard ~ x^2 (1 + x^2/18) with no cancellation loss
  for (double x : {1e-3, 1e-6, 1e-9}) {
    const auto c = dipole_coefficients(x);
    CHECK(std::abs(c.hard) / (x * x) == doctest::Approx(1.0).epsilon(x * x + 1e-14));
    // so the hard integrand |c|^2 / omega starts at x^3
    CHECK(std::norm(c.hard) / x / (x * x * x) == doctest::Approx(1.0).epsilon(x * x + 1e-14));
  }
  for (double x : {0.3, 1.0, 4.0, 25.0}) {
    const auto c = dipole_coefficients(x);
    const cplx want = 2.0 * I * (1.0 - std::polar(1.0, x) + I * x);
    CHECK(std::abs(c.hard - want) <= 1e-13 * std::abs(want));
    CHECK(c.sub == cplx(2.0 * x, 0.0));
    CHECK(c.div == -I);
    CHECK(std::norm(c.sub + c.hard) == doctest::Approx(8.0 * (1.0 - std::cos(x))).epsilon(1e-12));
    CHECK(std::norm(c.div + c.sub + c.hard) == doctest::Approx(5.0 - 4.0 * std::cos(x)).epsilon(1e-12));
  }
}

TEST_CASE("sub-leading difference magnitude") {
  // |B| at v = 0.1, omega = 1, n = z, extended precision: sqrt(2) v
  const auto g = interferometer_geometry(0.1, 1.0);
  const PhotonMomentum q(1.0, {0, 0, 1});
  CHECK(test::rel(component_norm(velocity_bracket(g, q)), 0.14142135623730950488) <= 1e-14);
  const auto p = delta_current_parts(g, q);
  CHECK(test::rel(component_norm(p.sub), 2.0 * g.charge * 0.14142135623730950488) <= 1e-14);
}

TEST_CASE("vertex forms match worldlines with rest legs") {
  const double l = 0.4, tau = 1.0;
  const auto ifm = build_interferometer(l, tau, 0.9);
  const auto& g = ifm.geometry;
  const FourVector rest{1, 0, 0, 0};
  const double d = tau / g.gamma;
  auto arm = [&](const FourVector& first, const FourVector& second, bool stop) {
    std::vector<FourVector> v{rest, first, second};
    std::vector<double> t{1.0, d, d};
    if (stop) {
      v.push_back(rest);
      t.push_back(1.0);
    }
    return Worldline::from_velocities(g.X_i - rest, v, t, g.charge);
  };
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const PhotonMomentum q(0.2 + 0.3 * i, checks::random_direction(rng));
    const auto three = current_fourier(arm(g.Xdot_1, g.Xdot_2, false), q) -
                       current_fourier(arm(g.Xdot_2, g.Xdot_1, false), q);
    const auto four = current_fourier(arm(g.Xdot_1, g.Xdot_2, true), q) -
                      current_fourier(arm(g.Xdot_2, g.Xdot_1, true), q);
    const auto want3 = delta_current(g, q, CurrentApproximation::exact);
    const auto want4 = delta_current(g, q, CurrentApproximation::exact, true);
    CHECK(max_abs_diff(three, want3) <= 1e-12 * component_norm(want3));
    CHECK(max_abs_diff(four, want4) <= 1e-12 * component_norm(want4));
  }
}
