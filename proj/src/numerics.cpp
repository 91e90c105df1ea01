#include "softdeco/numerics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace softdeco {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-panel Gauss-Legendre order in freq_integrate.
constexpr std::size_t kPanelOrder = 10;
// Geometric grading steps toward omega = 0 when the lower limit is zero.
constexpr int kZeroGradingSteps = 48;
constexpr std::size_t kMaxPanels = std::size_t{1} << 26;

// Power series of Cin(x) = -sum_{k>=1} (-x^2)^k / (2k (2k)!), used for x <= 4.
double cin_series(double x) {
  const double x2 = x * x;
  double term = 1.0;  // (-1)^k x^{2k} / (2k)!
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = term / (2.0 * k);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return -sum;
}

// E1(i x) for x > 2 by the modified Lentz continued fraction.
std::complex<double> exp_integral_e1_imag(double x) {
  using C = std::complex<double>;
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  C b(1.0, x);
  C c(1.0 / tiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  return C(std::cos(x), -std::sin(x)) * h;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_theta < 8) throw std::invalid_argument("quadrature.n_theta must be >= 8");
  if (n_phi < 16) throw std::invalid_argument("quadrature.n_phi must be >= 16");
  if (panels_per_period < 4) throw std::invalid_argument("quadrature.panels_per_period must be >= 4");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature.abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature.rel_tol must be > 0");
}

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double cosine_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("cosine_integral: x must be positive");
  if (std::isinf(x)) return 0.0;
  if (x <= 4.0) return kEulerGamma + std::log(x) - cin_series(x);
  return -exp_integral_e1_imag(x).real();
}

double cosine_integral_entire(double x) {
  if (!(x >= 0.0)) throw std::domain_error("cosine_integral_entire: x must be non-negative");
  if (x <= 4.0) return cin_series(x);
  return kEulerGamma + std::log(x) + exp_integral_e1_imag(x).real();
}

double atanh_over_x(double x) {
  if (!(x >= 0.0) || !(x < 1.0)) throw std::domain_error("atanh_over_x: requires 0 <= x < 1");
  if (x < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 * (1.0 / 3.0 + x2 / 5.0);
  }
  return std::atanh(x) / x;
}

double atanh_over_x_minus_one(double x) {
  if (!(x >= 0.0) || !(x < 1.0)) throw std::domain_error("atanh_over_x_minus_one: requires 0 <= x < 1");
  if (x < 0.1) {
    // sum_{k>=1} x^{2k} / (2k + 1)
    const double x2 = x * x;
    double power = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 30; ++k) {
      power *= x2;
      sum += power / (2.0 * k + 1.0);
    }
    return sum;
  }
  return std::atanh(x) / x - 1.0;
}

namespace {

struct BesselK01 {
  double k0;
  double k1;
};

BesselK01 bessel_k01(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be positive");
  if (std::isinf(x)) return {0.0, 0.0};
  if (x <= 2.0) {
    // Ascending series.
    const double y = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);
    double t0 = 1.0;        // y^k / (k!)^2
    double t1 = 1.0;        // y^k / (k! (k+1)!)
    double harmonic = 0.0;  // H_k
    double i0 = 1.0;
    double s0 = 0.0;
    double s1 = t1 * (log_half + kEulerGamma - 0.5 * (0.0 + 1.0));
    for (int k = 1; k < 200; ++k) {
      t0 *= y / (static_cast<double>(k) * k);
      t1 *= y / (static_cast<double>(k) * (k + 1));
      harmonic += 1.0 / k;
      const double next_harmonic = harmonic + 1.0 / (k + 1);
      i0 += t0;
      s0 += harmonic * t0;
      const double add1 = t1 * (log_half + kEulerGamma - 0.5 * (harmonic + next_harmonic));
      s1 += add1;
      if (t0 < 1e-18 * i0 && std::abs(add1) < 1e-18 * std::abs(s1)) break;
    }
    return {-(log_half + kEulerGamma) * i0 + s0, 1.0 / x + 0.5 * x * s1};
  }
  // Steed's continued fraction CF2 with Temme's normalization sum, order 0.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-16) break;
  }
  h *= a1;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace

double bessel_k0(double x) { return bessel_k01(x).k0; }
double bessel_k1(double x) { return bessel_k01(x).k1; }

double bessel_k2(double x) {
  const auto k = bessel_k01(x);
  return k.k0 + 2.0 * k.k1 / x;
}

QuadratureEstimate sphere_integrate(const SphereIntegrand& f, const QuadratureSpec& spec) {
  spec.validate();
  auto integrate = [&f](int n_theta, int n_phi) {
    const auto rule = gauss_legendre(static_cast<std::size_t>(n_theta));
    const double dphi = 2.0 * kPi / n_phi;
    std::vector<double> ring(static_cast<std::size_t>(n_phi));
    std::vector<double> rings(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i) {
      const double c = rule.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < n_phi; ++j) {
        const double phi = dphi * j;
        ring[j] = f(Vec3{s * std::cos(phi), s * std::sin(phi), c});
      }
      rings[i] = rule.weights[i] * dphi * pairwise_sum(ring);
    }
    return pairwise_sum(rings);
  };
  const double coarse = integrate(spec.n_theta, spec.n_phi);
  const double fine = integrate(2 * spec.n_theta, 2 * spec.n_phi);
  QuadratureEstimate out;
  out.value = fine;
  out.error = std::abs(fine - coarse);
  out.converged = std::isfinite(fine) && out.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine));
  return out;
}

namespace {

std::vector<double> frequency_edges(double lo, double hi, double tau, const QuadratureSpec& spec) {
  if (!(tau > 0.0)) throw std::domain_error("freq_integrate: tau must be positive");
  if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw std::domain_error("freq_integrate: requires 0 <= lo <= hi < inf");
  }
  std::vector<double> edges;
  if (hi == lo) return edges;
  const double h = 2.0 * kPi / (tau * spec.panels_per_period);
  const double periods = (hi - lo) / h;
  if (periods > static_cast<double>(kMaxPanels)) {
    throw std::invalid_argument("freq_integrate: " + std::to_string(periods) +
                                " panels exceed the supported grid size");
  }
  // First aligned edge strictly above lo.
  double k = std::floor(lo / h) + 1.0;
  const double first = std::min(k * h, hi);

  // Geometric grading of [lo, first] toward omega = 0.
  std::vector<double> graded;
  if (lo == 0.0) {
    double e = first;
    for (int i = 0; i < kZeroGradingSteps; ++i) {
      e *= 0.5;
      graded.push_back(e);
    }
  } else {
    double e = 0.5 * first;
    while (e > 2.0 * lo) {
      graded.push_back(e);
      e *= 0.5;
    }
  }
  edges.push_back(lo);
  for (auto it = graded.rbegin(); it != graded.rend(); ++it) edges.push_back(*it);
  edges.push_back(first);
  for (k += 1.0; k * h < hi; k += 1.0) edges.push_back(k * h);
  if (edges.back() < hi) edges.push_back(hi);
  return edges;
}

}  // namespace

std::size_t frequency_panel_count(double lo, double hi, double tau, const QuadratureSpec& spec) {
  const auto edges = frequency_edges(lo, hi, tau, spec);
  return edges.empty() ? 0 : edges.size() - 1;
}

QuadratureEstimate freq_integrate(const FrequencyIntegrand& g, double lo, double hi, double tau,
                                  const QuadratureSpec& spec) {
  spec.validate();
  const auto edges = frequency_edges(lo, hi, tau, spec);
  if (edges.size() < 2) return {};
  const auto rule = gauss_legendre(kPanelOrder);

  auto panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < kPanelOrder; ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
    return half * s;
  };

  const std::size_t n = edges.size() - 1;
  std::vector<double> coarse(n);
  std::vector<double> fine(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    const double m = 0.5 * (a + b);
    coarse[p] = panel(a, b);
    fine[p] = panel(a, m) + panel(m, b);
  }
  QuadratureEstimate out;
  out.value = pairwise_sum(fine);
  const double coarse_value = pairwise_sum(coarse);
  out.error = std::abs(out.value - coarse_value);
  out.converged =
      std::isfinite(out.value) && out.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  return out;
}

}  // namespace softdeco
