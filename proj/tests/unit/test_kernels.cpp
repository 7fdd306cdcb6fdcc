#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hypercone/kernels.hpp"
#include "hypercone/quadrature.hpp"

using namespace hypercone;

TEST_CASE("euclidean kernel at the origin") {
  CHECK_THAT(euclidean_kernel(2, 0.0, 1.0),
             Catch::Matchers::WithinRel(1.0 / (4.0 * std::numbers::pi), 1e-14));
}

TEST_CASE("euclidean kernel mass and 1-D semigroup law") {
  // Mass over the plane.
  const RadialGrid g = make_grid(2.0, 1.0, 1024);
  double mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mass += g.weights()[i] * euclidean_kernel(2, g.nodes()[i], 1.0);
  }
  CHECK_THAT(2.0 * std::numbers::pi * mass, Catch::Matchers::WithinRel(1.0, 1e-11));

  // 1-D numeric convolution oracle: k_t * k_s = k_{t+s}.
  const double t = 0.4, s = 0.7;
  const GaussLegendreRule rule(32);
  for (double x : {0.0, 0.5, 1.7}) {
    double conv = 0.0;
    const double L = 14.0;
    const int panels = 24;
    for (int p = 0; p < panels; ++p) {
      const double a = -L + 2.0 * L * p / panels, b = -L + 2.0 * L * (p + 1) / panels;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
        conv += 0.5 * (b - a) * rule.weights[i] * euclidean_kernel(1, std::abs(x - y), t) *
                euclidean_kernel(1, std::abs(y), s);
      }
    }
    CAPTURE(x);
    CHECK_THAT(conv, Catch::Matchers::WithinRel(euclidean_kernel(1, std::abs(x), t + s), 1e-10));
  }
}

TEST_CASE("tip kernel values and stochastic completeness") {
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  CHECK_THAT(tip_kernel(cone, 0.0, 1.0),
             Catch::Matchers::WithinRel(1.0 / (2.0 * std::numbers::pi), 1e-14));

  const RadialGrid g = make_grid(2.0, 2.0, 1024);
  for (double s : {0.3, 1.0, 2.0}) {
    double mass = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      mass += g.weights()[i] * tip_kernel(cone, g.nodes()[i], s);
    }
    CHECK_THAT(cone.sigma * mass, Catch::Matchers::WithinRel(1.0, 1e-10));
  }

  // theta = 2 pi reduces to the plane.
  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  for (double r : {0.0, 1.0, 3.0}) {
    CHECK_THAT(tip_kernel(plane, r, 0.7),
               Catch::Matchers::WithinRel(euclidean_kernel(2, r, 0.7), 1e-14));
  }
}

TEST_CASE("radial kernel tip column identity") {
  // N omega_N = 2 pi^{N/2} / Gamma(N/2) makes the r = 0 column of the
  // radial kernel agree with AVR^{-1}(4 pi t)^{-N/2} e^{-r'^2/4t} sigma-free.
  for (double N : {2.0, 3.0, 4.0}) {
    const double lhs = N * omega_n(N);
    const double rhs = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
    CHECK_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-13));
    const ConeSpace cone(N, 1.7);
    for (double rp : {0.2, 1.0, 2.5}) {
      const double column = radial_kernel(N, 0.0, rp, 0.8);
      const double via_tip = cone.sigma * tip_kernel(cone, rp, 0.8);
      CAPTURE(N, rp);
      CHECK_THAT(column, Catch::Matchers::WithinRel(via_tip, 1e-12));
    }
  }
}

TEST_CASE("radial kernel mass and symmetry") {
  for (double N : {2.0, 3.0}) {
    const RadialGrid g = make_grid(N, 10.0, 2048);
    for (double t : {0.1, 1.0, 10.0}) {
      for (double r : {0.0, 1.0, 5.0}) {
        double mass = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
          mass += g.weights()[j] * radial_kernel(N, r, g.nodes()[j], t);
        }
        CAPTURE(N, t, r);
        REQUIRE_THAT(mass, Catch::Matchers::WithinRel(1.0, 1e-10));
      }
    }
  }
  CHECK(radial_kernel(2.5, 1.3, 0.4, 0.7) == radial_kernel(2.5, 0.4, 1.3, 0.7));
}

TEST_CASE("carslaw kernel reduces to the plane at theta = 2 pi") {
  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ConePoint x{4.0 * unif(rng), 2.0 * std::numbers::pi * unif(rng)};
    const ConePoint y{4.0 * unif(rng), 2.0 * std::numbers::pi * unif(rng)};
    // Sample times where the angular series is certifiable at 1e-10; for
    // d^2 >> t both routes agree only up to cancellation noise.
    const double d = cone_distance(plane, x, y);
    const double t_lo = std::max(0.05, d * d / 50.0);
    const double t = std::exp(std::lerp(std::log(t_lo), std::log(20.0 * t_lo), unif(rng)));
    const KernelEval eval = carslaw_kernel(plane, x, y, t);
    const double want = euclidean_kernel(2, d, t);
    REQUIRE(eval.converged);
    REQUIRE_THAT(eval.value, Catch::Matchers::WithinRel(want, 1e-10));
  }
}

TEST_CASE("carslaw kernel at the tip matches the closed form") {
  const ConeSpace cone = ConeSpace::two_dimensional(0.75 * std::numbers::pi);
  for (double r : {0.0, 0.5, 2.0}) {
    for (double t : {0.2, 1.0, 4.0}) {
      const KernelEval eval = carslaw_kernel(cone, ConePoint{r, 1.0}, ConePoint::tip(), t);
      CAPTURE(r, t);
      CHECK_THAT(eval.value, Catch::Matchers::WithinRel(tip_kernel(cone, r, t), 1e-10));
    }
  }
}

TEST_CASE("carslaw kernel positivity, symmetry, and truncation certificate") {
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi / 2.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const ConePoint x{3.0 * unif(rng), cone.theta() * unif(rng)};
    const ConePoint y{3.0 * unif(rng), cone.theta() * unif(rng)};
    const double t = std::exp(std::lerp(std::log(0.05), std::log(5.0), unif(rng)));
    const KernelEval xy = carslaw_kernel(cone, x, y, t);
    const KernelEval yx = carslaw_kernel(cone, y, x, t);
    REQUIRE(xy.value >= 0.0);
    REQUIRE(xy.converged);
    REQUIRE(xy.truncation_error_bound < 1e-12 * std::max(xy.value, 1e-300));
    REQUIRE_THAT(yx.value, Catch::Matchers::WithinRel(xy.value, 1e-13));
  }
}

TEST_CASE("carslaw kernel mass") {
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid g = make_grid(2.0, 1.0, 1024);
  const int angles = 96;
  for (double t : {0.3, 1.0}) {
    const ConePoint x{1.2, 0.4};
    double mass = 0.0;
    for (int a = 0; a < angles; ++a) {
      const double phi = cone.theta() * (a + 0.5) / angles;
      double radial = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        radial += g.weights()[j] * carslaw_kernel(cone, x, ConePoint{g.nodes()[j], phi}, t).value;
      }
      mass += radial * cone.theta() / angles;
    }
    CAPTURE(t);
    CHECK_THAT(mass, Catch::Matchers::WithinRel(1.0, 1e-6));
  }
}

TEST_CASE("carslaw Chapman-Kolmogorov on a small case") {
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const double t = 0.5, s = 0.3;
  const ConePoint x{0.8, 0.2}, y{1.1, 1.0};
  const RadialGrid g = make_grid(2.0, 1.0, 512);
  const int angles = 72;
  double conv = 0.0;
  for (int a = 0; a < angles; ++a) {
    const double phi = cone.theta() * (a + 0.5) / angles;
    double radial = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const ConePoint mid{g.nodes()[j], phi};
      radial += g.weights()[j] * carslaw_kernel(cone, x, mid, t).value *
                carslaw_kernel(cone, mid, y, s).value;
    }
    conv += radial * cone.theta() / angles;
  }
  const double want = carslaw_kernel(cone, x, y, t + s).value;
  CHECK_THAT(conv, Catch::Matchers::WithinRel(want, 1e-6));
}

TEST_CASE("time-power monotonicity of the cone kernel") {
  const ConeSpace cone = ConeSpace::two_dimensional(1.5 * std::numbers::pi);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const ConePoint x{3.0 * unif(rng), cone.theta() * unif(rng)};
    const ConePoint y{3.0 * unif(rng), cone.theta() * unif(rng)};
    double prev = 0.0;
    for (double t = 0.05; t < 300.0; t *= 1.7) {
      const double v = t * carslaw_kernel(cone, x, y, t).value;
      // Below ~1e-14 the series value is cancellation noise, not kernel.
      if (prev > 1e-14) REQUIRE(v >= prev * (1.0 - 1e-11));
      prev = v;
    }
  }
}

TEST_CASE("carslaw diagonal large-time limit") {
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const ConePoint x{1.0, 0.3};
  const double t = 1e4;
  const double want = (1.0 / cone.avr()) / (4.0 * std::numbers::pi);
  CHECK_THAT(t * carslaw_kernel(cone, x, x, t).value, Catch::Matchers::WithinRel(want, 1e-2));
}

TEST_CASE("gaussian estimate audit") {
  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  const GaussianBoundReport flat = gaussian_bound_check(plane, 1.0, 400, 1);
  CHECK(flat.finite);
  CHECK(flat.C <= 10.0);

  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const GaussianBoundReport rep = gaussian_bound_check(cone, 0.5, 400, 2);
  CHECK(rep.finite);
  CHECK(rep.C >= 1.0);

  // Tip-to-tip closed forms: h(tip,tip,t) m(B_sqrt(t)(tip)) = omega_2/(4 pi).
  const double t = 1.3;
  const double h = tip_kernel(cone, 0.0, t);
  const double ball = ball_volume_tip(cone, std::sqrt(t));
  CHECK_THAT(h * ball, Catch::Matchers::WithinRel(0.25, 1e-12));

  // Scale invariance of both ratios under (d, m, t) -> (r d, r^2 m, r^2 t):
  // the kernel picks up r^{-2}, balls pick up r^2, d^2/t is unchanged.
  const double r = 3.7;
  const ConePoint x{0.9, 0.2}, y{1.4, 1.1};
  const ConePoint xs{r * x.r, x.phi}, ys{r * y.r, y.phi};
  const double hs = carslaw_kernel(cone, xs, ys, r * r * t).value;
  CHECK_THAT(hs, Catch::Matchers::WithinRel(carslaw_kernel(cone, x, y, t).value / (r * r), 1e-11));
  const double ball_s = cone_ball_volume(cone, xs, r * std::sqrt(t));
  CHECK_THAT(ball_s, Catch::Matchers::WithinRel(r * r * cone_ball_volume(cone, x, std::sqrt(t)), 1e-11));
}
