#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypercone/constants.hpp"
#include "hypercone/semigroup.hpp"
#include "hypercone/spaces.hpp"

namespace hypercone {

/// The entropy-energy profile Phi(s) = (N/2) log(2 s AVR^{-2/N} / (N pi e)).
inline double phi_profile(double s, double N, double avr) {
  if (!(s > 0.0)) throw std::invalid_argument("phi_profile: s > 0 required");
  return 0.5 * N *
         (std::log(2.0 * s / (N * std::numbers::pi)) - 1.0 - (2.0 / N) * std::log(avr));
}

/// Optimal gauge v(s) = lambda s^2 / (s - 1).
inline double v_opt(double s, double lambda) {
  if (!(s > 1.0)) throw std::invalid_argument("v_opt: s > 1 required");
  return lambda * s * s / (s - 1.0);
}

/// Blow-up horizon of the exponent flow.
inline double flow_horizon(double lambda, double p, double N) { return N / (8.0 * lambda * p); }

/// Exponent flow p(t) = N p / (N - 8 lambda p t), increasing on [0, T_lambda).
inline double p_of_t(double t, double lambda, double p, double N) {
  const double T = flow_horizon(lambda, p, N);
  if (!(t >= 0.0 && t < T)) {
    throw std::domain_error("p_of_t: t outside [0, T_lambda)");
  }
  return N * p / (N - 8.0 * lambda * p * t);
}

/// Gauge m(t) along the flow, m(0) = 0.
inline double m_of_t(double t, double lambda, double p, double N, double avr) {
  const double pt = p_of_t(t, lambda, p, N);
  const double gap = 1.0 / p - 1.0 / pt;
  const double head = std::log(2.0 * lambda / (N * std::numbers::pi)) - (2.0 / N) * std::log(avr);
  const double mp = (1.0 / p) * std::log(p) + (1.0 - 1.0 / p) * std::log(1.0 - 1.0 / p);
  const double mq = (1.0 / pt) * std::log(pt) + (1.0 - 1.0 / pt) * std::log(1.0 - 1.0 / pt);
  return 0.5 * N * (head * gap + mp - mq);
}

/// The parameter lambda for which the flow reaches q exactly at time t.
inline double lambda_for_target(const ExponentPair& pair, double t, double N) {
  if (!(t > 0.0)) throw std::invalid_argument("lambda_for_target: t > 0 required");
  return (N / (8.0 * t)) * pair.reciprocal_gap();
}

struct FlowSample {
  double t = 0.0;
  double p = 0.0;
  double m = 0.0;
  double V = 0.0;
};

struct FlowTrace {
  double lambda = 0.0;
  double N = 0.0;
  double avr = 0.0;
  double p_start = 0.0;
  double horizon = 0.0;  // T_lambda
  std::vector<FlowSample> samples;
  bool monotone = false;
  bool exponent_capped = false;   // p(t) hit the 1e3 evaluation cap near T_lambda
  double max_increase = 0.0;      // worst V(t_{k+1}) - V(t_k), relative to V(0)
  double ode_residual_m = 0.0;    // worst relative defect of the gauge ODE
  double ode_residual_v = 0.0;    // worst relative defect of the exponent ODE
};

/// Runs the monotone functional V(t) = e^{-m(t)} ||H_t f||_{p(t)} along the
/// exponent flow from p to q over [0, t_target], evolving f with the exact
/// cone kernel in uniform steps. The two defining ODEs are re-verified from
/// the sampled p and m by high-order finite differences.
inline FlowTrace integrate_flow(const ConeSpace& cone, const RadialFunction& f,
                                const ExponentPair& pair, double t_target, int steps) {
  if (pair.p.is_infinite() || pair.q.is_infinite() || pair.p.value() < 2.0 ||
      pair.effectively_equal()) {
    throw std::invalid_argument("integrate_flow: requires 2 <= p < q < inf");
  }
  if (!(t_target > 0.0) || steps < 8) {
    throw std::invalid_argument("integrate_flow: t_target > 0 and steps >= 8 required");
  }
  for (double v : f.values) {
    if (v < 0.0) throw std::invalid_argument("integrate_flow: f must be non-negative");
  }

  const double p = pair.p.value();
  const double N = cone.N;
  const double avr = cone.avr();
  FlowTrace trace;
  trace.lambda = lambda_for_target(pair, t_target, N);
  trace.N = N;
  trace.avr = avr;
  trace.p_start = p;
  trace.horizon = flow_horizon(trace.lambda, p, N);

  const double dt = t_target / steps;
  ConeHeatOperator op(N, *f.grid, dt);
  std::vector<double> state = f.values;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    FlowSample s;
    s.t = t;
    s.p = p_of_t(t, trace.lambda, p, N);
    s.m = m_of_t(t, trace.lambda, p, N, avr);
    if (s.p > 1e3) trace.exponent_capped = true;
    s.V = std::exp(-s.m) * lp_norm(cone, *f.grid, state, Exponent::finite(std::min(s.p, 1e3)));
    trace.samples.push_back(s);
    if (k < steps) state = op.apply(state);
  }

  const double v0 = trace.samples.front().V;
  trace.monotone = true;
  for (std::size_t k = 0; k + 1 < trace.samples.size(); ++k) {
    const double rise = trace.samples[k + 1].V - trace.samples[k].V;
    trace.max_increase = std::max(trace.max_increase, rise / v0);
    if (rise > 1e-8 * v0) trace.monotone = false;
  }

  // Five-point central differences of the sampled p and m against the
  // defining relations m' = (p'/p^2)(Phi(v(p)) - N/2) and N/(8 v(p)) = (p-1)/p'.
  auto d5 = [&](auto&& get, std::size_t k) {
    return (-get(k + 2) + 8.0 * get(k + 1) - 8.0 * get(k - 1) + get(k - 2)) / (12.0 * dt);
  };
  for (std::size_t k = 2; k + 2 < trace.samples.size(); ++k) {
    const double pk = trace.samples[k].p;
    const double dp = d5([&](std::size_t i) { return trace.samples[i].p; }, k);
    const double dm = d5([&](std::size_t i) { return trace.samples[i].m; }, k);
    const double v = v_opt(pk, trace.lambda);
    const double want_dm = dp / (pk * pk) * (phi_profile(v, N, avr) - 0.5 * N);
    trace.ode_residual_m =
        std::max(trace.ode_residual_m, std::abs(dm - want_dm) / std::max(1.0, std::abs(want_dm)));
    const double lhs = N / (8.0 * v);
    const double rhs = (pk - 1.0) / dp;
    trace.ode_residual_v = std::max(trace.ode_residual_v, std::abs(lhs - rhs) / lhs);
  }
  return trace;
}

struct LogSobolevReport {
  double entropy_side = 0.0;  // E(u^2) / ||u||_2^2
  double energy_side = 0.0;   // (N/2) log(...)
  double deficit = 0.0;       // energy_side - entropy_side
  double dirichlet = 0.0;
  double l2_norm = 0.0;
};

/// Deficit of the sharp logarithmic Sobolev inequality for a grid function.
inline LogSobolevReport logsobolev_check(const ConeSpace& cone, const RadialGrid& grid,
                                         std::span<const double> u) {
  LogSobolevReport rep;
  rep.l2_norm = lp_norm(cone, grid, u, Exponent::finite(2.0));
  if (!(rep.l2_norm > 0.0)) throw std::invalid_argument("logsobolev_check: u must be non-zero");
  std::vector<double> usq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) usq[i] = u[i] * u[i];
  rep.dirichlet = dirichlet_energy(cone, grid, u);
  const double l2sq = rep.l2_norm * rep.l2_norm;
  rep.entropy_side = entropy(cone, grid, usq) / l2sq;
  rep.energy_side = 0.5 * cone.N *
                    std::log((2.0 / (cone.N * std::numbers::pi * std::numbers::e)) *
                             std::pow(cone.avr(), -2.0 / cone.N) * rep.dirichlet / l2sq);
  rep.deficit = rep.energy_side - rep.entropy_side;
  return rep;
}

struct LinearizedLogSobolevReport {
  double entropy_value = 0.0;  // E(u^2)
  double bound = 0.0;          // ||u||^2 (Phi(v) - N/2) + (N / 2v) Dirichlet
  double slack = 0.0;          // bound - entropy_value
  double matched_v = 0.0;      // Dirichlet / ||u||^2, the tangency point
};

/// The tangent-line form of the log-Sobolev inequality at gauge v.
inline LinearizedLogSobolevReport linearized_logsobolev_check(const ConeSpace& cone,
                                                              const RadialGrid& grid,
                                                              std::span<const double> u,
                                                              double v) {
  if (!(v > 0.0)) throw std::invalid_argument("linearized_logsobolev_check: v > 0 required");
  LinearizedLogSobolevReport rep;
  const double l2 = lp_norm(cone, grid, u, Exponent::finite(2.0));
  if (!(l2 > 0.0)) throw std::invalid_argument("linearized_logsobolev_check: u must be non-zero");
  std::vector<double> usq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) usq[i] = u[i] * u[i];
  const double dirichlet = dirichlet_energy(cone, grid, u);
  rep.entropy_value = entropy(cone, grid, usq);
  rep.bound = l2 * l2 * (phi_profile(v, cone.N, cone.avr()) - 0.5 * cone.N) +
              0.5 * cone.N / v * dirichlet;
  rep.slack = rep.bound - rep.entropy_value;
  rep.matched_v = dirichlet / (l2 * l2);
  return rep;
}

}  // namespace hypercone
