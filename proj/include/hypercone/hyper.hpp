#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercone/constants.hpp"
#include "hypercone/semigroup.hpp"
#include "hypercone/spaces.hpp"
#include "hypercone/surface_heat.hpp"

namespace hypercone {

/// Closed-form operator norm ||H_t||_{p,q} on an N-cone.
inline double sharp_constant_cone(const ConeSpace& cone, const ExponentPair& pair, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("sharp_constant_cone: t > 0 required");
  if (pair.effectively_equal()) return 1.0;
  const double gap = pair.reciprocal_gap();
  return std::exp(0.5 * cone.N * std::log(m_constant(pair)) - gap * std::log(cone.avr()) -
                  0.5 * cone.N * gap * std::log(4.0 * std::numbers::pi * t));
}

/// ||h(tip, ., s)||_p on a cone, in closed form.
inline double tip_kernel_lp_norm(const ConeSpace& cone, double s, const Exponent& p) {
  if (p.is_infinite()) return tip_kernel(cone, 0.0, s);
  const double pe = p.value();
  return std::exp((1.0 / pe - 1.0) * std::log(cone.avr()) +
                  0.5 * cone.N * (1.0 / pe - 1.0) * std::log(4.0 * std::numbers::pi * s) -
                  0.5 * cone.N * std::log(pe) / pe);
}

/// The extremal Gaussian datum of the pair at time t, sampled on a grid:
/// the tip kernel at time a t with a the optimal dilation.
inline RadialFunction extremizer(const ConeSpace& cone, const RadialGrid& grid,
                                 const ExponentPair& pair, double t) {
  const double a = optimal_a(pair);
  return RadialFunction::sample(grid, [&](double r) { return tip_kernel(cone, r, a * t); });
}

struct NormEstimate {
  double value = 0.0;
  double t = 0.0;
  int iterations = 0;
  double residual = 0.0;
  /// Disagreement between independent starting data (multi-start audit);
  /// zero when a single start was used.
  double multistart_gap = 0.0;
  std::vector<double> extremal;
};

struct PowerIterationOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;
  double monotonicity_slack = 1e-12;
  bool multistart = false;
};

namespace detail {

/// Elementwise x^e for non-negative data, evaluated through logs with the
/// exponent capped to avoid overflow near degenerate p.
inline std::vector<double> stable_power(std::span<const double> x, double e) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) out[i] = std::exp(std::min(700.0, e * std::log(x[i])));
  }
  return out;
}

template <typename Apply, typename Norm>
double power_iteration(std::vector<double> f, const ExponentPair& pair, const Apply& apply,
                       const Norm& norm, const PowerIterationOptions& opts, int& iterations,
                       double& residual, std::vector<double>* extremal) {
  const double p = pair.p.value();
  const double q = pair.q.value();
  const double np = norm(f, pair.p);
  if (!(np > 0.0)) throw std::invalid_argument("power_iteration: zero start");
  for (double& v : f) v /= np;

  double ratio = 0.0;
  iterations = 0;
  residual = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    std::vector<double> g = apply(f);
    const double val = norm(g, pair.q);
    if (val < ratio * (1.0 - opts.monotonicity_slack)) {
      throw std::runtime_error("power_iteration: Rayleigh ratio decreased (grid inadequate)");
    }
    residual = std::abs(val - ratio) / std::max(val, 1e-300);
    ratio = val;
    iterations = it + 1;
    if (residual < opts.tolerance) break;

    std::vector<double> back = apply(detail::stable_power(g, q - 1.0));
    f = detail::stable_power(back, 1.0 / (p - 1.0));
    const double nf = norm(f, pair.p);
    if (!(nf > 0.0)) throw std::runtime_error("power_iteration: iterate collapsed to zero");
    for (double& v : f) v /= nf;
  }
  if (extremal) *extremal = std::move(f);
  return ratio;
}

}  // namespace detail

/// Numerical operator norm ||H_t||_{p,q} on a cone. Boundary exponents use
/// the exact kernel characterizations (the sup sits at the tip); interior
/// pairs run the nonlinear power iteration on non-negative radial data.
inline NormEstimate estimate_operator_norm(const ConeSpace& cone, const RadialGrid& grid,
                                           const ExponentPair& pair, double t,
                                           const PowerIterationOptions& opts = {}) {
  NormEstimate est;
  est.t = t;
  const bool p_one = !pair.p.is_infinite() && pair.p.value() == 1.0;
  if (p_one && pair.q.is_infinite()) {
    est.value = tip_kernel(cone, 0.0, t);  // sup of the kernel
    return est;
  }
  if (p_one) {
    est.value = tip_kernel_lp_norm(cone, t, pair.q);
    return est;
  }
  if (pair.q.is_infinite()) {
    est.value = tip_kernel_lp_norm(cone, t, pair.p.conjugate());
    return est;
  }

  ConeHeatOperator op(cone.N, grid, t);
  auto apply = [&](std::span<const double> f) { return op.apply(f); };
  auto norm = [&](std::span<const double> f, const Exponent& e) {
    return lp_norm(cone, grid, f, e);
  };

  std::vector<double> start;
  if (pair.p.value() > 1.0 && !pair.effectively_equal()) {
    start = extremizer(cone, grid, pair, t).values;
  } else {
    start = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); }).values;
  }
  est.value = detail::power_iteration(start, pair, apply, norm, opts, est.iterations,
                                      est.residual, &est.extremal);
  if (opts.multistart) {
    int it2 = 0;
    double res2 = 0.0;
    auto alt = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r / 4.0); });
    const double v2 =
        detail::power_iteration(alt.values, pair, apply, norm, opts, it2, res2, nullptr);
    est.multistart_gap = std::abs(v2 - est.value) / est.value;
  }
  return est;
}

/// Numerical operator norm on a surface of revolution via Crank--Nicolson
/// applications. Boundary exponents use the pole kernel column.
inline NormEstimate estimate_operator_norm(const SurfaceSpace& space, const SurfaceGrid& grid,
                                           const ExponentPair& pair, double t,
                                           const PowerIterationOptions& opts = {}) {
  NormEstimate est;
  est.t = t;
  SurfaceHeatSolver solver(grid);
  const bool p_one = !pair.p.is_infinite() && pair.p.value() == 1.0;
  if (p_one || pair.q.is_infinite()) {
    const std::vector<double> column = solver.kernel_from_pole(t);
    if (p_one && pair.q.is_infinite()) {
      est.value = column[0];
    } else if (p_one) {
      est.value = lp_norm(grid, column, pair.q);
    } else {
      est.value = lp_norm(grid, column, pair.p.conjugate());
    }
    return est;
  }

  auto apply = [&](std::span<const double> f) {
    std::vector<double> u(f.begin(), f.end());
    solver.evolve(u, 0.0, t);
    return u;
  };
  auto norm = [&](std::span<const double> f, const Exponent& e) { return lp_norm(grid, f, e); };

  auto start = [&](double width) {
    const auto& r = grid.nodes();
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) u[i] = std::exp(-r[i] * r[i] / width);
    return u;
  };
  est.value = detail::power_iteration(start(1.0), pair, apply, norm, opts, est.iterations,
                                      est.residual, &est.extremal);
  if (opts.multistart) {
    int it2 = 0;
    double res2 = 0.0;
    const double v2 =
        detail::power_iteration(start(4.0), pair, apply, norm, opts, it2, res2, nullptr);
    est.multistart_gap = std::abs(v2 - est.value) / est.value;
  }
  return est;
}

struct NormTraceRow {
  double t = 0.0;
  double estimate = 0.0;
  /// (4 pi t)^{(N/2)(1/p - 1/q)} estimate: constant on cones, converging to
  /// the cone value elsewhere.
  double scaled = 0.0;
};

inline double ambient_dimension(const ConeSpace& cone) { return cone.N; }
inline double ambient_dimension(const SurfaceSpace&) { return 2.0; }

template <typename SpaceT, typename GridT>
std::vector<NormTraceRow> scaled_norm_trace(const SpaceT& space, const GridT& grid,
                                            const ExponentPair& pair,
                                            const std::vector<double>& times,
                                            const PowerIterationOptions& opts = {}) {
  std::vector<NormTraceRow> rows;
  const double dim = ambient_dimension(space);
  for (double t : times) {
    NormTraceRow row;
    row.t = t;
    row.estimate = estimate_operator_norm(space, grid, pair, t, opts).value;
    row.scaled = std::pow(4.0 * std::numbers::pi * t, 0.5 * dim * pair.reciprocal_gap()) *
                 row.estimate;
    rows.push_back(row);
  }
  return rows;
}

struct TwoSidedBoundReport {
  double lower = 0.0;     // 1 / inf_x nu_x
  double upper = 0.0;     // 1 / AVR
  double middle = 0.0;    // (4 pi t)^{N/2} C(1, inf, t)
  bool equality = false;  // both sides met within 1e-8 (cones)
};

/// On a cone the infimum of the volume density sits at the tip and equals
/// AVR, so both sides of the two-sided bound coincide.
inline TwoSidedBoundReport two_sided_bound_check(const ConeSpace& cone, double t) {
  TwoSidedBoundReport rep;
  const double avr = cone.avr();
  rep.lower = 1.0 / std::min(avr, 1.0);
  rep.upper = 1.0 / avr;
  rep.middle = std::pow(4.0 * std::numbers::pi * t, 0.5 * cone.N) * tip_kernel(cone, 0.0, t);
  rep.equality = std::abs(rep.middle - rep.upper) <= 1e-8 * rep.upper &&
                 std::abs(rep.middle - rep.lower) <= 1e-8 * rep.lower;
  return rep;
}

struct LiLimitRow {
  double t = 0.0;
  double kernel = 0.0;
  double ball_times_kernel = 0.0;
  double t_pow_kernel = 0.0;  // t^{N/2} h(x, y, t)
};

struct LiLimitReport {
  std::vector<LiLimitRow> rows;
  double limit_expected = 0.0;  // omega_N (4 pi)^{-N/2}
  bool converged = false;       // within 1% at the largest time
};

/// Large-time trace m(B_sqrt(t)(z)) h(x, y, t) on a 2-D cone.
inline LiLimitReport li_limit_trace(const ConeSpace& cone, const ConePoint& x, const ConePoint& y,
                                    const ConePoint& z, const std::vector<double>& times) {
  LiLimitReport rep;
  rep.limit_expected = omega_n(cone.N) * std::pow(4.0 * std::numbers::pi, -0.5 * cone.N);
  for (double t : times) {
    LiLimitRow row;
    row.t = t;
    row.kernel = carslaw_kernel(cone, x, y, t).value;
    row.ball_times_kernel = cone_ball_volume(cone, z, std::sqrt(t)) * row.kernel;
    row.t_pow_kernel = std::pow(t, 0.5 * cone.N) * row.kernel;
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) {
    rep.converged =
        std::abs(rep.rows.back().ball_times_kernel / rep.limit_expected - 1.0) <= 0.01;
  }
  return rep;
}

/// Large-time trace on a surface, pole-centered.
inline LiLimitReport li_limit_trace(const SurfaceSpace& space, const SurfaceGrid& grid,
                                    const std::vector<double>& times) {
  LiLimitReport rep;
  rep.limit_expected = omega_n(2.0) / (4.0 * std::numbers::pi);
  SurfaceHeatSolver solver(grid);
  for (double t : times) {
    LiLimitRow row;
    row.t = t;
    row.kernel = solver.kernel_from_pole(t)[0];
    row.ball_times_kernel = space.ball_area(std::sqrt(t)) * row.kernel;
    row.t_pow_kernel = t * row.kernel;
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) {
    rep.converged =
        std::abs(rep.rows.back().ball_times_kernel / rep.limit_expected - 1.0) <= 0.01;
  }
  return rep;
}

struct RescalingCheckReport {
  double lhs = 0.0;  // C on the rescaled cone at time t
  double rhs = 0.0;  // tau^{1/q - 1/p} C at time t / r^2
  double deviation = 0.0;
};

/// The metric-measure rescaling identity for the closed-form constant.
inline RescalingCheckReport rescaling_identity_check(const ConeSpace& cone,
                                                     const ExponentPair& pair, double t, double r,
                                                     double tau) {
  if (!(r > 0.0 && tau > 0.0)) throw std::invalid_argument("rescaling_identity_check: bad scale");
  RescalingCheckReport rep;
  const ConeSpace rescaled(cone.N, cone.sigma * tau / std::pow(r, cone.N));
  rep.lhs = sharp_constant_cone(rescaled, pair, t);
  rep.rhs = std::exp(-pair.reciprocal_gap() * std::log(tau)) *
            sharp_constant_cone(cone, pair, t / (r * r));
  rep.deviation = std::abs(rep.lhs / rep.rhs - 1.0);
  return rep;
}

}  // namespace hypercone
