#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "hypercone/constants.hpp"
#include "hypercone/quadrature.hpp"

#include "json.hpp"

namespace hypercone {

/// N-Euclidean cone, parameterized by the dimension N and the total measure
/// sigma of the cross-section. Only the ratio AVR = sigma / (N omega_N)
/// enters the sharp constants; the 2-D specialization identifies sigma with
/// the circumference theta of the circle cross-section.
struct ConeSpace {
  double N;
  double sigma;

  ConeSpace(double N_, double sigma_) : N(N_), sigma(sigma_) {
    if (!(N > 1.0)) throw std::invalid_argument("ConeSpace: N > 1 required");
    if (!(sigma > 0.0)) throw std::invalid_argument("ConeSpace: sigma > 0 required");
  }

  static ConeSpace two_dimensional(double theta) {
    if (!(theta > 0.0 && theta <= 2.0 * std::numbers::pi + 1e-12)) {
      throw std::invalid_argument("ConeSpace: theta in (0, 2 pi] required");
    }
    return ConeSpace(2.0, theta);
  }

  static ConeSpace euclidean(double N_) { return ConeSpace(N_, N_ * omega_n(N_)); }

  bool is_two_dimensional() const { return N == 2.0; }

  double theta() const {
    if (!is_two_dimensional()) throw std::logic_error("ConeSpace::theta: 2-D cones only");
    return sigma;
  }

  double avr() const { return sigma / (N * omega_n(N)); }
};

inline double cone_avr(const ConeSpace& cone) { return cone.avr(); }

/// Point of a cone in polar coordinates; r = 0 is the tip for any phi.
struct ConePoint {
  double r = 0.0;
  double phi = 0.0;

  static ConePoint tip() { return ConePoint{0.0, 0.0}; }
};

/// sigma r^N / N = AVR omega_N r^N, the tip-centered ball volume.
inline double ball_volume_tip(const ConeSpace& cone, double r) {
  if (r < 0.0) throw std::invalid_argument("ball_volume_tip: r >= 0 required");
  return cone.sigma * std::pow(r, cone.N) / cone.N;
}

/// Cone distance on 2-D cones: the unrolled chord for angular separation
/// below pi, the broken path through the tip otherwise.
inline double cone_distance(const ConeSpace& cone, const ConePoint& x, const ConePoint& y) {
  if (!cone.is_two_dimensional()) {
    throw std::invalid_argument("cone_distance: two-point geometry is 2-D only");
  }
  const double theta = cone.theta();
  double d = std::fmod(std::abs(x.phi - y.phi), theta);
  d = std::min(d, theta - d);
  if (d < std::numbers::pi) {
    const double c = x.r * x.r + y.r * y.r - 2.0 * x.r * y.r * std::cos(d);
    return std::sqrt(std::max(0.0, c));
  }
  return x.r + y.r;
}

/// Metric-ball volume around an arbitrary center of a 2-D cone.
///
/// At each angular offset the radial section of the ball is an interval with
/// closed-form endpoints, so the area reduces to a 1-D integral; panels are
/// split at the branch points, then Gauss--Legendre is applied per panel.
inline double cone_ball_volume(const ConeSpace& cone, const ConePoint& center, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("cone_ball_volume: r >= 0 required");
  if (r == 0.0) return 0.0;
  const double rho = center.r;
  if (rho == 0.0) return ball_volume_tip(cone, r);
  if (!cone.is_two_dimensional()) {
    throw std::invalid_argument("cone_ball_volume: off-tip centers are 2-D only");
  }
  const double theta = cone.theta();
  const double half = 0.5 * theta;  // angular separations range over [0, half] <= pi

  // Radial extent of {s : s^2 + rho^2 - 2 s rho cos(delta) < r^2} contributes
  // (s_plus^2 - max(0, s_minus)^2) / 2 to the sector integral.
  auto section = [&](double delta) -> double {
    const double disc = r * r - rho * rho * std::sin(delta) * std::sin(delta);
    if (disc <= 0.0) return 0.0;
    const double root = std::sqrt(disc);
    const double mid = rho * std::cos(delta);
    const double hi = mid + root;
    if (hi <= 0.0) return 0.0;
    const double lo = std::max(0.0, mid - root);
    return 0.5 * (hi * hi - lo * lo);
  };

  static const GaussLegendreRule rule(48);
  auto integrate_smooth = [&](double a, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double delta = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
      acc += 0.5 * (b - a) * rule.weights[i] * section(delta);
    }
    return acc;
  };
  // The section vanishes like sqrt(d_star - delta) at the cut where the
  // discriminant hits zero; substituting delta = d_star - u^2 restores a
  // smooth integrand there.
  auto integrate_to_cut = [&](double a, double d_star) {
    const double span = std::sqrt(d_star - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = 0.5 * span * (1.0 + rule.nodes[i]);
      acc += 0.5 * span * rule.weights[i] * 2.0 * u * section(d_star - u * u);
    }
    return acc;
  };

  double area = 0.0;
  if (r < rho) {
    const double d_star = std::asin(r / rho);
    if (d_star >= half) {
      area = integrate_smooth(0.0, 0.5 * half) + integrate_smooth(0.5 * half, half);
    } else {
      area = integrate_smooth(0.0, 0.5 * d_star) + integrate_to_cut(0.5 * d_star, d_star);
    }
  } else {
    // Interior of the section is smooth; only rho = r has a kink at pi/2.
    std::vector<double> cuts{0.0};
    if (rho == r && 0.5 * std::numbers::pi < half) cuts.push_back(0.5 * std::numbers::pi);
    cuts.push_back(half);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      area += integrate_smooth(cuts[c], cuts[c + 1]);
    }
  }
  return 2.0 * area;
}

/// Rotationally symmetric surface with profile phi(r) = c r + (1-c)(1-e^{-r}):
/// a smooth pole, non-positive phi'' (hence non-negative curvature), and
/// asymptotic slope c = AVR.
struct SurfaceSpace {
  double c;

  explicit SurfaceSpace(double c_) : c(c_) {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("SurfaceSpace: c in (0,1] required");
  }

  double profile(double r) const { return c * r + (1.0 - c) * (1.0 - std::exp(-r)); }
  double profile_derivative(double r) const { return c + (1.0 - c) * std::exp(-r); }
  /// Antiderivative of the profile with value 0 at r = 0.
  double profile_integral(double r) const {
    return 0.5 * c * r * r + (1.0 - c) * (r - 1.0 + std::exp(-r));
  }

  /// Area of the metric ball around the pole.
  double ball_area(double r) const { return 2.0 * std::numbers::pi * profile_integral(r); }

  double avr() const { return c; }
};

/// Returns c after confirming the numeric limit area(B_r)/(pi r^2) -> c.
/// The ratio approaches c like 2(1-c)/r, so the probe radius is taken large
/// enough for a 1e-4 tolerance across all c.
inline double surface_avr(const SurfaceSpace& s) {
  const double r = 3e4;
  const double numeric = s.ball_area(r) / (std::numbers::pi * r * r);
  if (std::abs(numeric - s.c) > 1e-4) {
    throw std::runtime_error("surface_avr: numeric volume ratio does not approach c");
  }
  return s.c;
}

using Space = std::variant<ConeSpace, SurfaceSpace>;

inline double space_avr(const Space& space) {
  return std::visit([](const auto& s) { return s.avr(); }, space);
}

inline double space_dimension(const Space& space) {
  if (const auto* cone = std::get_if<ConeSpace>(&space)) return cone->N;
  return 2.0;
}

inline nlohmann::json space_to_json(const Space& space) {
  nlohmann::json j;
  if (const auto* cone = std::get_if<ConeSpace>(&space)) {
    if (std::abs(cone->avr() - 1.0) < 1e-15) {
      j["kind"] = "euclidean";
      j["N"] = cone->N;
    } else {
      j["kind"] = "cone";
      j["N"] = cone->N;
      j["sigma"] = cone->sigma;
      if (cone->is_two_dimensional()) j["theta"] = cone->theta();
    }
  } else {
    const auto& s = std::get<SurfaceSpace>(space);
    j["kind"] = "surface";
    j["N"] = 2.0;
    j["c"] = s.c;
  }
  return j;
}

inline Space space_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return ConeSpace::euclidean(j.at("N").get<double>());
  if (kind == "cone") {
    const double N = j.at("N").get<double>();
    if (j.contains("theta")) return ConeSpace::two_dimensional(j.at("theta").get<double>());
    return ConeSpace(N, j.at("sigma").get<double>());
  }
  if (kind == "surface") return SurfaceSpace(j.at("c").get<double>());
  throw std::invalid_argument("space_from_json: unknown kind '" + kind + "'");
}

}  // namespace hypercone
