#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace hypercone {

/// Nodes and weights of the n-point Gauss--Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) {
    if (n < 2) throw std::invalid_argument("GaussLegendreRule: n >= 2 required");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      // Newton iteration on P_n from the Chebyshev-based initial guess.
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

namespace detail {

/// First-derivative collocation matrix on arbitrary distinct nodes
/// (barycentric form), row-major n x n.
inline std::vector<double> differentiation_matrix(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> bary(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) bary[i] /= (x[i] - x[j]);
    }
  }
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (bary[j] / bary[i]) / (x[i] - x[j]);
      d[i * n + j] = v;
      diag -= v;
    }
    d[i * n + i] = diag;
  }
  return d;
}

}  // namespace detail

/// Quadrature grid for the radial measure r^{N-1} dr on [0, R].
///
/// Composite Gauss--Legendre panels, geometrically refined toward r = 0 and
/// near-uniform in the bulk. `weights()` carries the r^{N-1} factor;
/// `gl_weights()` is the bare Lebesgue rule. Panel-local polynomial
/// differentiation is exposed for energy integrands.
class RadialGrid {
 public:
  RadialGrid(double N, double R, int panels_geometric, int panels_uniform, int panel_order)
      : N_(N), R_(R), panel_order_(panel_order) {
    if (!(N > 1.0)) throw std::invalid_argument("RadialGrid: N > 1 required");
    if (!(R > 0.0)) throw std::invalid_argument("RadialGrid: R > 0 required");
    const GaussLegendreRule rule(panel_order);
    ref_nodes_ = rule.nodes;
    ref_diff_ = detail::differentiation_matrix(ref_nodes_);

    std::vector<double> bounds;
    bounds.push_back(0.0);
    const double r_split = R / 8.0;
    // Innermost boundary at ~1e-6 R; panel lengths grow geometrically to r_split.
    for (int j = 1; j <= panels_geometric; ++j) {
      const double frac =
          std::pow(1e-6, double(panels_geometric - j) / double(std::max(1, panels_geometric - 1)));
      bounds.push_back(r_split * frac);
    }
    for (int k = 1; k <= panels_uniform; ++k) {
      bounds.push_back(r_split + k * (R - r_split) / panels_uniform);
    }

    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const double a = bounds[b], c = bounds[b + 1];
      panel_start_.push_back(nodes_.size());
      panel_length_.push_back(c - a);
      for (int i = 0; i < panel_order; ++i) {
        const double r = 0.5 * (a + c) + 0.5 * (c - a) * rule.nodes[i];
        const double w = 0.5 * (c - a) * rule.weights[i];
        nodes_.push_back(r);
        gl_weights_.push_back(w);
        radial_weights_.push_back(w * std::pow(r, N - 1.0));
      }
    }
  }

  double dimension() const { return N_; }
  double truncation_radius() const { return R_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& gl_weights() const { return gl_weights_; }
  /// Weights of the measure r^{N-1} dr.
  const std::vector<double>& weights() const { return radial_weights_; }

  /// Integral against r^{N-1} dr.
  double integrate(std::span<const double> values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += radial_weights_[i] * values[i];
    return s;
  }

  /// Pointwise derivative of panel-sampled data, differentiating the local
  /// Legendre interpolant of each panel.
  std::vector<double> derivative(std::span<const double> values) const {
    if (values.size() != nodes_.size()) throw std::invalid_argument("derivative: size mismatch");
    std::vector<double> out(values.size(), 0.0);
    const int n = panel_order_;
    for (std::size_t p = 0; p < panel_start_.size(); ++p) {
      const std::size_t s = panel_start_[p];
      const double scale = 2.0 / panel_length_[p];
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += ref_diff_[i * n + j] * values[s + j];
        out[s + i] = scale * acc;
      }
    }
    return out;
  }

  /// Verifies that the Gaussian of time t integrates to its closed form
  /// (relative 1e-10); throws when the resolution is insufficient.
  void check_time(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("check_time: t > 0 required");
    double got = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      got += radial_weights_[i] * std::exp(-nodes_[i] * nodes_[i] / (4.0 * t));
    }
    const double want = 0.5 * std::exp(std::lgamma(0.5 * N_)) * std::pow(4.0 * t, 0.5 * N_);
    if (std::abs(got / want - 1.0) > 1e-10) {
      throw std::runtime_error("RadialGrid: self-calibration failed at t = " + std::to_string(t) +
                               " (insufficient resolution)");
    }
  }

 private:
  double N_;
  double R_;
  int panel_order_;
  std::vector<double> nodes_, gl_weights_, radial_weights_;
  std::vector<std::size_t> panel_start_;
  std::vector<double> panel_length_;
  std::vector<double> ref_nodes_, ref_diff_;
};

/// Grid sized for heat flows up to t_max: truncation at
/// R = 12 sqrt(t_max) max(1, sqrt(N)), so the Gaussian tail beyond R is
/// below 1e-14 for all session times.
inline RadialGrid make_grid(double N, double t_max, int points) {
  if (points < 64) throw std::invalid_argument("make_grid: points >= 64 required");
  if (!(t_max > 0.0)) throw std::invalid_argument("make_grid: t_max > 0 required");
  const double R = 12.0 * std::sqrt(t_max) * std::max(1.0, std::sqrt(N));
  const int order = 16;
  const int panels = points / order;
  const int geo = std::clamp(panels / 3, 3, 40);
  const int uni = panels - geo;
  RadialGrid grid(N, R, geo, uni, order);
  grid.check_time(t_max);
  return grid;
}

}  // namespace hypercone
