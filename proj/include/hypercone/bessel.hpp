#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hypercone {
namespace detail {

/// Power series for log I_nu(x), summed around the peak term so that only
/// O(sqrt(peak)) terms contribute. All terms are positive, so the sum is
/// stable at every (nu, x).
inline double bessel_series_log(double nu, double x) {
  const double lh = std::log(0.5 * x);
  const auto log_term = [&](double k) {
    return nu * lh + 2.0 * k * lh - std::lgamma(k + 1.0) - std::lgamma(nu + k + 1.0);
  };
  const double kpeak =
      std::max(0.0, std::floor(0.5 * (std::sqrt(nu * nu + x * x) - nu)));
  const double log_peak = log_term(kpeak);
  const double quarter_x2 = 0.25 * x * x;

  double sum = 1.0;  // the peak term, in units of exp(log_peak)
  double u = 1.0;
  for (double k = kpeak; u > 1e-20; ++k) {
    u *= quarter_x2 / ((k + 1.0) * (nu + k + 1.0));
    sum += u;
    if (k > kpeak + 4e6) throw std::runtime_error("bessel_i: series did not converge");
  }
  u = 1.0;
  for (double k = kpeak; k > 0.0 && u > 1e-20; --k) {
    u *= k * (nu + k) / quarter_x2;
    sum += u;
  }
  return log_peak + std::log(sum);
}

/// Large-argument (Hankel) expansion of e^{-x} I_nu(x). Returns false when
/// the asymptotic tail cannot be certified below 1e-15 relative.
inline bool bessel_hankel_scaled(double nu, double x, double& out) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k <= 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * x * k);
    if (std::abs(term) >= prev) return false;  // divergence onset
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-16 * std::abs(sum)) {
      out = sum / std::sqrt(2.0 * std::numbers::pi * x);
      return true;
    }
  }
  return false;
}

/// Coefficient tables of the Debye polynomials u_k(t), generated once from
/// u_0 = 1, u_{k+1} = t^2(1-t^2)/2 u_k' + (1/8) int_0^t (1-5 s^2) u_k ds.
inline const std::vector<std::vector<double>>& debye_polynomials() {
  static const std::vector<std::vector<double>> polys = [] {
    std::vector<std::vector<double>> u;
    u.push_back({1.0});
    for (int k = 0; k < 12; ++k) {
      const auto& a = u.back();
      std::vector<double> next(a.size() + 3, 0.0);
      for (std::size_t m = 0; m < a.size(); ++m) {
        if (m >= 1) {
          next[m + 1] += 0.5 * double(m) * a[m];
          next[m + 3] -= 0.5 * double(m) * a[m];
        }
        next[m + 1] += a[m] / (8.0 * double(m + 1));
        next[m + 3] -= 5.0 * a[m] / (8.0 * double(m + 3));
      }
      u.push_back(std::move(next));
    }
    return u;
  }();
  return polys;
}

/// Uniform large-order (Debye) expansion of e^{-x} I_nu(x).
inline double bessel_debye_scaled(double nu, double x) {
  const auto& polys = debye_polynomials();
  const double z = x / nu;
  const double s = std::sqrt(1.0 + z * z);
  const double t = 1.0 / s;
  // nu*eta - x, with s - z written as 1/(s+z) to avoid cancellation.
  const double expo = nu * (1.0 / (s + z) + std::log(z / (1.0 + s)));
  double poly = 0.0;
  double scale = 1.0;
  for (const auto& coeffs : polys) {
    double val = 0.0;
    for (std::size_t m = coeffs.size(); m-- > 0;) val = val * t + coeffs[m];
    poly += val * scale;
    scale /= nu;
  }
  return std::exp(expo) * poly / std::sqrt(2.0 * std::numbers::pi * nu * s);
}

}  // namespace detail

/// Scaled modified Bessel function e^{-x} I_nu(x), nu >= 0, x >= 0.
inline double bessel_i_scaled(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("bessel_i: nu >= 0 and x >= 0 required");
  }
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (nu >= 100.0 && x > nu * nu / 20.0) return detail::bessel_debye_scaled(nu, x);
  if (x >= 40.0 + nu * nu) {
    double out = 0.0;
    if (detail::bessel_hankel_scaled(nu, x, out)) return out;
  }
  return std::exp(detail::bessel_series_log(nu, x) - x);
}

/// Modified Bessel function of the first kind I_nu(x); the scaled variant
/// returns e^{-x} I_nu(x) and never overflows.
inline double bessel_i(double nu, double x, bool scaled = false) {
  const double v = bessel_i_scaled(nu, x);
  return scaled ? v : v * std::exp(x);
}

}  // namespace hypercone
