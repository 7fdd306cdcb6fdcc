#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypercone/exponents.hpp"

namespace hypercone {

/// Volume of the unit ball of dimension N (real N >= 1), via log-Gamma.
inline double omega_n(double N) {
  if (!(N >= 1.0)) throw std::invalid_argument("omega_n: N >= 1 required");
  return std::exp(0.5 * N * std::log(std::numbers::pi) - std::lgamma(0.5 * N + 1.0));
}

/// The Bakry--Gentil--Ledoux exponent constant M(p, q).
///
/// Evaluated in log space; the boundary cases p = q, p = 1, q = inf are
/// exact branches rather than floating-point limits of the generic formula.
inline double m_constant(const ExponentPair& pair) {
  if (pair.effectively_equal()) return 1.0;
  const bool p_is_one = !pair.p.is_infinite() && pair.p.value() == 1.0;
  if (p_is_one && pair.q.is_infinite()) return 1.0;
  if (p_is_one) {
    const double q = pair.q.value();
    return std::exp(-std::log(q) / q);
  }
  const double ip = pair.p.reciprocal();  // 1/p
  const double cp = 1.0 - ip;             // 1/p'
  if (pair.q.is_infinite()) return std::exp(cp * std::log(cp));
  const double head = ip * std::log(pair.p.value()) + cp * std::log(cp);
  const double iq = pair.q.reciprocal();
  const double cq = 1.0 - iq;
  const double gap = ip - iq;
  return std::exp(head - iq * std::log(pair.q.value()) - cq * std::log(cq) + gap * std::log(gap));
}

/// Inputs of the sharp hypercontractivity bound.
struct SharpBoundInputs {
  ExponentPair pair;
  double N;    // dimension parameter, > 1
  double avr;  // asymptotic volume ratio, in (0, 1]
  double t;    // time, > 0

  SharpBoundInputs(ExponentPair pair_, double N_, double avr_, double t_)
      : pair(pair_), N(N_), avr(avr_), t(t_) {
    if (!(N > 1.0)) throw std::invalid_argument("SharpBoundInputs: N > 1 required");
    if (!(avr > 0.0 && avr <= 1.0)) throw std::invalid_argument("SharpBoundInputs: avr in (0,1] required");
    if (!(t > 0.0)) throw std::invalid_argument("SharpBoundInputs: t > 0 required");
  }
};

/// M(p,q)^{N/2} * AVR^{1/q-1/p} * (4 pi t)^{-(N/2)(1/p-1/q)}.
inline double sharp_bound(const SharpBoundInputs& in) {
  if (in.pair.effectively_equal()) return 1.0;
  const double gap = in.pair.reciprocal_gap();
  const double log_m = std::log(m_constant(in.pair));
  return std::exp(0.5 * in.N * log_m - gap * std::log(in.avr) -
                  0.5 * in.N * gap * std::log(4.0 * std::numbers::pi * in.t));
}

namespace detail {
inline void require_interior_pair(const ExponentPair& pair, const char* who) {
  if (pair.p.is_infinite() || pair.q.is_infinite() || pair.p.value() <= 1.0 ||
      pair.effectively_equal()) {
    throw std::invalid_argument(std::string(who) + ": requires 1 < p < q < inf");
  }
}
}  // namespace detail

/// Dilation factor of the extremal Gaussian e^{-alpha0 d^2} at time t0.
inline double extremizer_alpha(const ExponentPair& pair, double t0) {
  detail::require_interior_pair(pair, "extremizer_alpha");
  if (!(t0 > 0.0)) throw std::invalid_argument("extremizer_alpha: t0 > 0 required");
  const double p = pair.p.value();
  return (1.0 / (4.0 * t0)) * (p / (p - 1.0)) * pair.reciprocal_gap();
}

/// Dilation factor of the evolved Gaussian at time t0; equals
/// alpha0 / (1 + 4 alpha0 t0).
inline double extremizer_beta(const ExponentPair& pair, double t0) {
  detail::require_interior_pair(pair, "extremizer_beta");
  if (!(t0 > 0.0)) throw std::invalid_argument("extremizer_beta: t0 > 0 required");
  const double q = pair.q.value();
  return (1.0 / (4.0 * t0)) * (q / (q - 1.0)) * pair.reciprocal_gap();
}

/// The auxiliary time shift with 1/(4 beta0) = t0 + tshift.
inline double gaussian_time_shift(const ExponentPair& pair, double t0) {
  detail::require_interior_pair(pair, "gaussian_time_shift");
  if (!(t0 > 0.0)) throw std::invalid_argument("gaussian_time_shift: t0 > 0 required");
  const double p = pair.p.value();
  const double q = pair.q.value();
  return t0 * q * (p - 1.0) / (q - p);
}

/// Unique maximizer a of h(a) = (1+a)^{1/q-1} / a^{1/p-1}; for q = inf the
/// analytic limit p - 1.
inline double optimal_a(const ExponentPair& pair) {
  if (pair.p.is_infinite() || pair.p.value() <= 1.0 || pair.effectively_equal()) {
    throw std::invalid_argument("optimal_a: requires 1 < p < q <= inf");
  }
  const double p = pair.p.value();
  if (pair.q.is_infinite()) return p - 1.0;
  const double q = pair.q.value();
  return q * (p - 1.0) / (q - p);
}

}  // namespace hypercone
