#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "hypercone/bessel.hpp"
#include "hypercone/spaces.hpp"

namespace hypercone {

/// Heat kernel of R^n: (4 pi t)^{-n/2} e^{-d^2/(4t)}.
inline double euclidean_kernel(int n, double d, double t) {
  if (n < 1 || d < 0.0 || !(t > 0.0)) throw std::invalid_argument("euclidean_kernel: bad inputs");
  return std::exp(-0.5 * n * std::log(4.0 * std::numbers::pi * t) - d * d / (4.0 * t));
}

/// Tip-centered heat kernel of an N-cone: AVR^{-1} (4 pi s)^{-N/2} e^{-r^2/(4s)}.
inline double tip_kernel(const ConeSpace& cone, double r, double s) {
  if (r < 0.0 || !(s > 0.0)) throw std::invalid_argument("tip_kernel: bad inputs");
  return std::exp(-std::log(cone.avr()) - 0.5 * cone.N * std::log(4.0 * std::numbers::pi * s) -
                  r * r / (4.0 * s));
}

/// Radial (Bessel) heat kernel K_t(r, r'), a probability density against
/// r'^{N-1} dr'. The tip column r = 0 uses the analytic limit.
inline double radial_kernel(double N, double r, double rp, double t) {
  if (!(N > 1.0) || r < 0.0 || rp < 0.0 || !(t > 0.0)) {
    throw std::invalid_argument("radial_kernel: bad inputs");
  }
  if (r == 0.0 || rp == 0.0) {
    const double rr = std::max(r, rp);
    return 2.0 * std::exp(-0.5 * N * std::log(4.0 * t) - rr * rr / (4.0 * t) -
                          std::lgamma(0.5 * N));
  }
  const double gap = (r - rp) * (r - rp) / (4.0 * t);
  if (gap > 740.0) return 0.0;
  const double z = r * rp / (2.0 * t);
  return (0.5 / t) * std::pow(r * rp, 1.0 - 0.5 * N) * std::exp(-gap) *
         bessel_i_scaled(0.5 * N - 1.0, z);
}

/// One kernel evaluation with its certified truncation data.
struct KernelEval {
  double value = 0.0;
  double t = 0.0;
  int series_terms_used = 0;
  double truncation_error_bound = 0.0;
  bool converged = false;
};

/// Heat kernel of a 2-D cone of full angle theta <= 2 pi, by the classical
/// angular Bessel series. The tail is certified through the log-concavity
/// of nu -> I_nu(z): successive ratios are non-increasing, so beyond any
/// index with ratio < 1 the tail is dominated by a geometric series.
inline KernelEval carslaw_kernel(const ConeSpace& cone, const ConePoint& x, const ConePoint& y,
                                 double t) {
  if (!cone.is_two_dimensional()) {
    throw std::invalid_argument("carslaw_kernel: 2-D cones only");
  }
  if (!(t > 0.0)) throw std::invalid_argument("carslaw_kernel: t > 0 required");
  const double theta = cone.theta();
  const double z = x.r * y.r / (2.0 * t);
  const double gap = (x.r - y.r) * (x.r - y.r) / (4.0 * t);
  const double prefactor = gap > 740.0 ? 0.0 : std::exp(-gap) / (2.0 * theta * t);
  const double dphi = x.phi - y.phi;

  KernelEval out;
  out.t = t;

  double partial = bessel_i_scaled(0.0, z);
  double prev_term = partial;  // magnitude of I_{nu_k}(z), scaled
  int consecutive_ok = 0;
  int k = 1;
  double bound = 0.0;
  for (; k < 200000; ++k) {
    const double nu = 2.0 * std::numbers::pi * k / theta;
    const double ik = bessel_i_scaled(nu, z);
    partial += 2.0 * ik * std::cos(nu * dphi);
    const double ratio = prev_term > 0.0 ? ik / prev_term : 0.0;
    prev_term = ik;
    bound = (ratio < 1.0 && ik > 0.0) ? 2.0 * ik * ratio / (1.0 - ratio) : (ik > 0.0 ? HUGE_VAL : 0.0);
    const double reference = std::max(std::abs(partial), 1e-300);
    if (bound <= 1e-14 * reference) {
      if (++consecutive_ok >= 3) break;
    } else {
      consecutive_ok = 0;
    }
  }
  if (consecutive_ok < 3) throw std::runtime_error("carslaw_kernel: series tail not certified");

  // Rounding can leave a vanishing negative residue where the kernel is
  // numerically zero; the certified bound covers the clamp.
  if (partial < 0.0 && -partial <= 10.0 * bound + 1e-13) partial = 0.0;
  out.value = prefactor * partial;
  out.series_terms_used = k + 1;
  out.truncation_error_bound = prefactor * bound;
  out.converged = true;
  return out;
}

/// Two-sided Gaussian-estimate audit over a random sample of points and
/// times: reports the smallest C >= 1 making both comparisons with
/// m(B_sqrt(t)(x)) hold on the sample.
struct GaussianBoundReport {
  double C = 1.0;
  double C_upper = 1.0;
  double C_lower = 1.0;
  double eps = 1.0;
  int samples = 0;
  bool finite = false;
};

inline GaussianBoundReport gaussian_bound_check(const ConeSpace& cone, double eps, int samples,
                                                std::uint64_t seed = 0) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("gaussian_bound_check: eps in (0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double theta = cone.theta();

  GaussianBoundReport rep;
  rep.eps = eps;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const ConePoint x{std::exp(std::lerp(std::log(0.05), std::log(5.0), unif(rng))),
                      theta * unif(rng)};
    const ConePoint y{std::exp(std::lerp(std::log(0.05), std::log(5.0), unif(rng))),
                      theta * unif(rng)};
    // Keep the Gaussian exponents within the range the series can certify:
    // deep-tail pairs cancel below double precision.
    const double d0 = cone_distance(cone, x, y);
    const double t_lo = std::max(0.1, d0 * d0 / 60.0);
    const double t = std::exp(std::lerp(std::log(t_lo), std::log(10.0 * t_lo), unif(rng)));
    const double h = carslaw_kernel(cone, x, y, t).value;
    const double ball = cone_ball_volume(cone, x, std::sqrt(t));
    const double d = cone_distance(cone, x, y);
    const double up = h * ball * std::exp(d * d / ((4.0 + eps) * t));
    const double lo = std::exp(-d * d / ((4.0 - eps) * t)) / (h * ball);
    rep.C_upper = std::max(rep.C_upper, up);
    rep.C_lower = std::max(rep.C_lower, lo);
  }
  rep.C = std::max(rep.C_upper, rep.C_lower);
  rep.finite = std::isfinite(rep.C);
  return rep;
}

}  // namespace hypercone
