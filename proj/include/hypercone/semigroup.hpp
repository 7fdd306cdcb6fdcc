#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypercone/exponents.hpp"
#include "hypercone/kernels.hpp"
#include "hypercone/quadrature.hpp"
#include "hypercone/spaces.hpp"
#include "hypercone/surface_heat.hpp"

namespace hypercone {

/// Samples of a radial function on a quadrature grid.
struct RadialFunction {
  const RadialGrid* grid = nullptr;
  std::vector<double> values;

  static RadialFunction sample(const RadialGrid& g, const std::function<double(double)>& f) {
    RadialFunction out;
    out.grid = &g;
    out.values.reserve(g.size());
    for (double r : g.nodes()) out.values.push_back(f(r));
    return out;
  }
};

/// Discretized heat semigroup H_t on radial functions of an N-cone: the
/// exact Bessel kernel against the grid's radial weights, folded into a
/// dense matrix so repeated applications are matrix-vector products.
class ConeHeatOperator {
 public:
  ConeHeatOperator(double N, const RadialGrid& grid, double t) : grid_(&grid), t_(t) {
    grid.check_time(t);
    const auto& r = grid.nodes();
    const auto& w = grid.weights();
    const std::size_t n = r.size();
    matrix_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double k = radial_kernel(N, r[i], r[j], t);
        matrix_[i * n + j] = k * w[j];
        matrix_[j * n + i] = k * w[i];
      }
    }
  }

  double time() const { return t_; }
  const RadialGrid& grid() const { return *grid_; }

  std::vector<double> apply(std::span<const double> f) const {
    const std::size_t n = grid_->size();
    if (f.size() != n) throw std::invalid_argument("ConeHeatOperator: size mismatch");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = matrix_.data() + i * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * f[j];
      out[i] = acc;
    }
    return out;
  }

 private:
  const RadialGrid* grid_;
  double t_;
  std::vector<double> matrix_;
};

inline RadialFunction apply_heat(const ConeSpace& cone, const RadialFunction& f, double t) {
  ConeHeatOperator op(cone.N, *f.grid, t);
  RadialFunction out;
  out.grid = f.grid;
  out.values = op.apply(f.values);
  return out;
}

/// L^p norm against the cone measure sigma r^{N-1} dr; p = inf is the sup
/// over nodes. Stable under large p: powers are taken relative to the max.
inline double lp_norm(const ConeSpace& cone, const RadialGrid& grid,
                      std::span<const double> values, const Exponent& p) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  if (p.is_infinite()) return m;
  const double pe = p.value();
  double s = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]) / m;
    if (a > 0.0) s += w[i] * std::exp(pe * std::log(a));
  }
  return m * std::exp(std::log(cone.sigma * s) / pe);
}

inline double lp_norm(const ConeSpace& cone, const RadialFunction& f, const Exponent& p) {
  return lp_norm(cone, *f.grid, f.values, p);
}

/// L^p norm on a surface grid (cell-mass weights).
inline double lp_norm(const SurfaceGrid& grid, std::span<const double> values, const Exponent& p) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  if (p.is_infinite()) return m;
  const double pe = p.value();
  double s = 0.0;
  const auto& w = grid.cell_measure();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]) / m;
    if (a > 0.0) s += w[i] * std::exp(pe * std::log(a));
  }
  return m * std::exp(std::log(s) / pe);
}

/// Entropy of a non-negative u: int u log u dm - (int u dm) log(int u dm),
/// with values below 1e-300 treated as exact zeros.
inline double entropy(const ConeSpace& cone, const RadialGrid& grid,
                      std::span<const double> u) {
  double ulogu = 0.0, mass = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) throw std::invalid_argument("entropy: negative input");
    if (u[i] < 1e-300) continue;
    ulogu += w[i] * u[i] * std::log(u[i]);
    mass += w[i] * u[i];
  }
  ulogu *= cone.sigma;
  mass *= cone.sigma;
  if (mass <= 0.0) throw std::invalid_argument("entropy: zero mass");
  return ulogu - mass * std::log(mass);
}

/// Dirichlet energy int (u')^2 dm, the derivative taken panel-wise on the
/// quadrature grid.
inline double dirichlet_energy(const ConeSpace& cone, const RadialGrid& grid,
                               std::span<const double> u) {
  const std::vector<double> du = grid.derivative(u);
  double s = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < du.size(); ++i) s += w[i] * du[i] * du[i];
  return cone.sigma * s;
}

/// One row of the log-convexity diagnostic of E(s) = ||H_s f||_2^2.
struct ConvexityRow {
  double s = 0.0;
  double energy = 0.0;
  double log_energy = 0.0;
  /// Chord-above-graph slack at interior rows; >= 0 when log E is convex.
  double convexity_slack = 0.0;
};

/// Evaluates E(s) along increasing times and the discrete convexity slack of
/// log E. Consecutive gaps reuse one heat operator per distinct step.
inline std::vector<ConvexityRow> energy_log_convexity_trace(const ConeSpace& cone,
                                                            const RadialFunction& f,
                                                            const std::vector<double>& times) {
  if (times.size() < 3) throw std::invalid_argument("energy_log_convexity_trace: >= 3 times");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw std::invalid_argument("energy_log_convexity_trace: times must increase");
    }
  }
  std::vector<ConvexityRow> rows(times.size());
  std::map<double, ConeHeatOperator> ops;
  std::vector<double> state = f.values;
  double at = 0.0;
  const Exponent two = Exponent::finite(2.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double gap = times[i] - at;
    if (gap > 0.0) {
      auto it = ops.find(gap);
      if (it == ops.end()) it = ops.emplace(gap, ConeHeatOperator(cone.N, *f.grid, gap)).first;
      state = it->second.apply(state);
      at = times[i];
    }
    const double norm = lp_norm(cone, *f.grid, state, two);
    rows[i].s = times[i];
    rows[i].energy = norm * norm;
    rows[i].log_energy = 2.0 * std::log(norm);
  }
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double w = (times[i + 1] - times[i]) / (times[i + 1] - times[i - 1]);
    rows[i].convexity_slack =
        w * rows[i - 1].log_energy + (1.0 - w) * rows[i + 1].log_energy - rows[i].log_energy;
  }
  return rows;
}

/// Result of the direct-quadrature Fourier verification of the Gaussian
/// evolution law.
struct FourierCheckReport {
  double beta_fit = 0.0;
  double beta_expected = 0.0;
  double amplitude_fit = 0.0;
  double amplitude_expected = 0.0;
  double fit_residual = 0.0;
  bool pass = false;
};

/// Convolves e^{-alpha0 |x|^2} with the Euclidean kernel of time t0 in
/// dimension n (1 or 2) by direct quadrature, independent of the semigroup
/// machinery, and fits a Gaussian to the result.
inline FourierCheckReport fourier_gaussian_check(double alpha0, double t0, int n) {
  if (!(alpha0 > 0.0 && t0 > 0.0) || (n != 1 && n != 2)) {
    throw std::invalid_argument("fourier_gaussian_check: bad inputs");
  }
  const double beta = alpha0 / (1.0 + 4.0 * alpha0 * t0);
  const double sig_conv = std::sqrt(0.5 / beta);  // width of the convolved Gaussian

  // Quadrature over the source variable: panels sized for the narrower of
  // the two Gaussians, windowed to where their product is non-negligible.
  const int order = 16;
  const GaussLegendreRule rule(order);
  const double h = 0.7 * std::min(std::sqrt(2.0 * t0), 1.0 / std::sqrt(2.0 * alpha0));
  auto panelize = [&](double lo, double hi, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    if (!(hi > lo)) return;
    const int panels = std::min(400, static_cast<int>(std::ceil((hi - lo) / h)));
    for (int p = 0; p < panels; ++p) {
      const double a = lo + (hi - lo) * p / panels;
      const double b = lo + (hi - lo) * (p + 1) / panels;
      for (int i = 0; i < order; ++i) {
        nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i]);
        weights.push_back(0.5 * (b - a) * rule.weights[i]);
      }
    }
  };
  const double kernel_reach = std::sqrt(800.0 * t0);
  const double data_reach = std::sqrt(200.0 / alpha0);

  auto convolved = [&](double x) {
    std::vector<double> ynodes, yweights;
    panelize(std::max(x - kernel_reach, -data_reach), std::min(x + kernel_reach, data_reach),
             ynodes, yweights);
    double acc = 0.0;
    if (n == 1) {
      for (std::size_t i = 0; i < ynodes.size(); ++i) {
        const double y = ynodes[i];
        acc += yweights[i] * euclidean_kernel(1, std::abs(x - y), t0) * std::exp(-alpha0 * y * y);
      }
    } else {
      std::vector<double> znodes, zweights;
      const double zreach = std::min(kernel_reach, data_reach);
      panelize(-zreach, zreach, znodes, zweights);
      for (std::size_t i = 0; i < ynodes.size(); ++i) {
        for (std::size_t j = 0; j < znodes.size(); ++j) {
          const double y1 = ynodes[i], y2 = znodes[j];
          const double d = std::hypot(x - y1, y2);
          acc += yweights[i] * zweights[j] * euclidean_kernel(2, d, t0) *
                 std::exp(-alpha0 * (y1 * y1 + y2 * y2));
        }
      }
    }
    return acc;
  };

  // Least-squares fit of log g = log A - beta x^2 on a modest x range.
  const int m = 17;
  double s0 = 0, s1 = 0, s2 = 0, sy = 0, sxy = 0;
  std::vector<double> xs(m), gs(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = 2.0 * sig_conv * i / (m - 1);
    gs[i] = convolved(xs[i]);
    const double u = xs[i] * xs[i];
    const double v = std::log(gs[i]);
    s0 += 1.0;
    s1 += u;
    s2 += u * u;
    sy += v;
    sxy += u * v;
  }
  const double det = s0 * s2 - s1 * s1;
  const double log_amp = (s2 * sy - s1 * sxy) / det;
  FourierCheckReport rep;
  rep.beta_fit = -(s0 * sxy - s1 * sy) / det;
  rep.amplitude_fit = std::exp(log_amp);
  rep.beta_expected = beta;
  rep.amplitude_expected = std::pow(1.0 + 4.0 * alpha0 * t0, -0.5 * n);
  for (int i = 0; i < m; ++i) {
    const double model = rep.amplitude_fit * std::exp(-rep.beta_fit * xs[i] * xs[i]);
    rep.fit_residual = std::max(rep.fit_residual, std::abs(model - gs[i]) / gs[0]);
  }
  rep.pass = rep.fit_residual < 1e-6;
  return rep;
}

}  // namespace hypercone
