#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypercone/spaces.hpp"

namespace hypercone {

/// Finite-volume grid for radial functions on a surface of revolution:
/// nodes stretch geometrically from the pole, dual cells carry the exact
/// measure 2 pi integral of the profile.
class SurfaceGrid {
 public:
  SurfaceGrid(const SurfaceSpace& space, double R, double h0, double stretch, double h_max)
      : R_(R) {
    if (!(R > 0.0 && h0 > 0.0 && stretch >= 1.0 && h_max >= h0)) {
      throw std::invalid_argument("SurfaceGrid: bad parameters");
    }
    nodes_.push_back(0.0);
    double h = h0;
    while (nodes_.back() < R) {
      nodes_.push_back(std::min(R, nodes_.back() + h));
      h = std::min(h_max, h * stretch);
    }
    const std::size_t m = nodes_.size();
    cell_measure_.resize(m);
    iface_coeff_.resize(m - 1);
    double left = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double right = (i + 1 < m) ? 0.5 * (nodes_[i] + nodes_[i + 1]) : R;
      cell_measure_[i] =
          2.0 * std::numbers::pi * (space.profile_integral(right) - space.profile_integral(left));
      if (i + 1 < m) {
        iface_coeff_[i] =
            2.0 * std::numbers::pi * space.profile(right) / (nodes_[i + 1] - nodes_[i]);
      }
      left = right;
    }
  }

  double truncation_radius() const { return R_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Measure of the dual cell of each node (the 2 pi phi dr weight).
  const std::vector<double>& cell_measure() const { return cell_measure_; }
  /// Transmissibility phi(interface) / dr between consecutive nodes (x 2 pi).
  const std::vector<double>& interface_coefficient() const { return iface_coeff_; }

  double integrate(std::span<const double> u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += cell_measure_[i] * u[i];
    return s;
  }

 private:
  double R_;
  std::vector<double> nodes_;
  std::vector<double> cell_measure_;
  std::vector<double> iface_coeff_;
};

inline SurfaceGrid make_surface_grid(const SurfaceSpace& space, double t_max,
                                     double h0 = 2.5e-3, double stretch = 1.03) {
  const double R = 12.0 * std::sqrt(t_max);
  return SurfaceGrid(space, R, h0, stretch, std::max(2.0 * h0, R / 240.0));
}

/// Crank--Nicolson evolution of du/dt = (1/phi)(phi u')' with a no-flux pole
/// and an absorbing truncation boundary.
class SurfaceHeatSolver {
 public:
  explicit SurfaceHeatSolver(const SurfaceGrid& grid) : grid_(&grid) {}

  /// One implicit step of size dt (Thomas solve).
  void step(std::vector<double>& u, double dt) const {
    const auto& vol = grid_->cell_measure();
    const auto& tc = grid_->interface_coefficient();
    const std::size_t m = u.size();
    if (m != grid_->size()) throw std::invalid_argument("SurfaceHeatSolver: size mismatch");

    std::vector<double> low(m, 0.0), diag(m, 0.0), up(m, 0.0), rhs(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double wl = (i > 0) ? tc[i - 1] : 0.0;
      const double wr = (i + 1 < m) ? tc[i] : 0.0;
      const double a = 0.5 * dt;
      diag[i] = vol[i] + a * (wl + wr);
      if (i > 0) low[i] = -a * wl;
      if (i + 1 < m) up[i] = -a * wr;
      double explicit_flux = -(wl + wr) * u[i];
      if (i > 0) explicit_flux += wl * u[i - 1];
      if (i + 1 < m) explicit_flux += wr * u[i + 1];
      rhs[i] = vol[i] * u[i] + a * explicit_flux;
    }
    // Absorbing boundary: pin the last node to zero.
    low[m - 1] = 0.0;
    diag[m - 1] = 1.0;
    rhs[m - 1] = 0.0;

    for (std::size_t i = 1; i < m; ++i) {
      const double w = low[i] / diag[i - 1];
      diag[i] -= w * up[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    u[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
      u[i] = (rhs[i] - up[i] * u[i + 1]) / diag[i];
    }
  }

  /// March from t_from to t_to with steps capped at 5% of the current time.
  void evolve(std::vector<double>& u, double t_from, double t_to) const {
    if (!(t_to >= t_from)) throw std::invalid_argument("evolve: t_to >= t_from required");
    double t = t_from;
    const double floor_dt = std::max(1e-7, 1e-5 * (t_to - t_from));
    while (t < t_to) {
      const double dt = std::min({t_to - t, std::max(floor_dt, 0.05 * t), (t_to - t_from) / 48.0});
      step(u, dt);
      t += dt;
    }
  }

  /// Approximate kernel column h(pole, ., t): start from the Euclidean
  /// near-pole Gaussian at a small t0 and march to t.
  std::vector<double> kernel_from_pole(double t, double t0 = 1e-3) const {
    if (!(t > t0)) throw std::invalid_argument("kernel_from_pole: t > t0 required");
    const auto& r = grid_->nodes();
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      u[i] = std::exp(-r[i] * r[i] / (4.0 * t0)) / (4.0 * std::numbers::pi * t0);
    }
    evolve(u, t0, t);
    return u;
  }

 private:
  const SurfaceGrid* grid_;
};

}  // namespace hypercone
