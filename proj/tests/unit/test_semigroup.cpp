#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hypercone/semigroup.hpp"

using namespace hypercone;

namespace {

const ConeSpace kHalfPlane = ConeSpace::two_dimensional(std::numbers::pi);

RadialFunction gaussian_on(const RadialGrid& g, double c0) {
  return RadialFunction::sample(g, [&](double r) { return std::exp(-c0 * r * r); });
}

// Closed-form Gaussian integrals on a cone: int e^{-c d^2} dm = AVR (pi/c)^{N/2}.
double gaussian_mass(const ConeSpace& cone, double c) {
  return cone.avr() * std::pow(std::numbers::pi / c, 0.5 * cone.N);
}

}  // namespace

TEST_CASE("heat flow preserves constants on cones") {
  const RadialGrid g = make_grid(2.0, 1.0, 2048);
  RadialFunction one = RadialFunction::sample(g, [](double) { return 1.0; });
  const RadialFunction evolved = apply_heat(kHalfPlane, one, 0.7);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.nodes()[i] > g.truncation_radius() - 6.0) continue;  // truncation shadow
    REQUIRE_THAT(evolved.values[i], Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("Gaussian data evolves to the predicted Gaussian") {
  const double alpha0 = 1.0 / 8.0, t0 = 1.0;
  const double beta0 = alpha0 / (1.0 + 4.0 * alpha0 * t0);
  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  const RadialGrid g = make_grid(2.0, 2.0, 2048);
  const RadialFunction f = gaussian_on(g, alpha0);
  const RadialFunction ft = apply_heat(plane, f, t0);
  // The evolved profile against the predicted Gaussian, over the bulk.
  double worst = 0.0;
  const double amp = ft.values[0];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes()[i];
    if (r > 4.0 / std::sqrt(beta0)) continue;
    const double model = amp * std::exp(-beta0 * r * r);
    worst = std::max(worst, std::abs(model - ft.values[i]));
  }
  CHECK(worst < 1e-8);
  // Amplitude (1 + 4 alpha0 t0)^{-n/2} with n = 2.
  CHECK_THAT(amp, Catch::Matchers::WithinRel(1.0 / (1.0 + 4.0 * alpha0 * t0), 1e-8));
}

TEST_CASE("semigroup law on Gaussians") {
  const RadialGrid g = make_grid(2.0, 2.0, 2048);
  const RadialFunction f = gaussian_on(g, 1.0);
  const RadialFunction once = apply_heat(kHalfPlane, f, 0.9);
  const RadialFunction twice = apply_heat(kHalfPlane, apply_heat(kHalfPlane, f, 0.4), 0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(once.values[i] - twice.values[i]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Lp norms against closed forms") {
  const RadialGrid g = make_grid(2.0, 1.0, 2048);
  const RadialFunction f = gaussian_on(g, 1.0);  // e^{-2 c0 d^2} with c0 = 1/2
  CHECK_THAT(lp_norm(kHalfPlane, f, Exponent::finite(1.0)),
             Catch::Matchers::WithinRel(std::numbers::pi / 2.0, 1e-11));
  CHECK_THAT(lp_norm(kHalfPlane, f, Exponent::infinity()),
             Catch::Matchers::WithinRel(1.0, 1e-14));
  for (double p : {2.0, 3.5, 7.0}) {
    CHECK_THAT(lp_norm(kHalfPlane, f, Exponent::finite(p)),
               Catch::Matchers::WithinRel(std::pow(gaussian_mass(kHalfPlane, p), 1.0 / p), 1e-11));
  }
  // Tip-kernel norm closed form: AVR^{1/p-1} (4 pi s)^{(N/2)(1/p-1)} p^{-N/(2p)}.
  const double s = 0.6;
  RadialFunction h =
      RadialFunction::sample(g, [&](double r) { return tip_kernel(kHalfPlane, r, s); });
  const double want = std::pow(kHalfPlane.avr(), 1.0 / 3.0 - 1.0) *
                      std::pow(4.0 * std::numbers::pi * s, 1.0 / 3.0 - 1.0) *
                      std::pow(3.0, -1.0 / 3.0);
  CHECK_THAT(lp_norm(kHalfPlane, h, Exponent::finite(3.0)),
             Catch::Matchers::WithinRel(want, 1e-10));
}

TEST_CASE("entropy of Gaussian data matches the closed form") {
  const RadialGrid g = make_grid(2.0, 1.0, 2048);
  for (double c0 : {0.25, 0.5, 2.0}) {
    RadialFunction usq = gaussian_on(g, 2.0 * c0);  // u^2 for u = e^{-c0 r^2}
    const double mass = gaussian_mass(kHalfPlane, 2.0 * c0);
    const double want = mass * (-0.5 * kHalfPlane.N - std::log(mass));
    CAPTURE(c0);
    CHECK_THAT(entropy(kHalfPlane, g, usq.values), Catch::Matchers::WithinRel(want, 1e-10));
  }
}

TEST_CASE("entropy scaling identity") {
  // The mass-corrected entropy is 1-homogeneous: the lambda log lambda terms
  // of the two pieces cancel.
  const RadialGrid g = make_grid(2.0, 1.0, 1024);
  RadialFunction u = gaussian_on(g, 1.3);
  const double base = entropy(kHalfPlane, g, u.values);
  for (double lam : {0.3, 2.0, 17.0}) {
    std::vector<double> scaled = u.values;
    for (double& v : scaled) v *= lam;
    CHECK_THAT(entropy(kHalfPlane, g, scaled), Catch::Matchers::WithinRel(lam * base, 1e-10));
  }
  std::vector<double> negative(g.size(), -1.0);
  CHECK_THROWS_AS(entropy(kHalfPlane, g, negative), std::invalid_argument);
}

TEST_CASE("entropy of a plateau of mass one") {
  const RadialGrid g = make_grid(2.0, 1.0, 2048);
  const double r0 = std::sqrt(2.0 / std::numbers::pi);  // sigma r0^2 / 2 = 1
  RadialFunction u = RadialFunction::sample(g, [&](double r) { return r < r0 ? 1.0 : 0.0; });
  CHECK_THAT(entropy(kHalfPlane, g, u.values), Catch::Matchers::WithinAbs(0.0, 5e-2));
}

TEST_CASE("Dirichlet energy") {
  const RadialGrid g = make_grid(2.0, 1.0, 2048);
  RadialFunction c = RadialFunction::sample(g, [](double) { return 3.7; });
  CHECK(dirichlet_energy(kHalfPlane, g, c.values) < 1e-18);

  // u = e^{-c0 r^2}: energy N c0 (pi/(2 c0))^{N/2} AVR.
  for (double c0 : {0.25, 0.5, 2.0}) {
    RadialFunction u = gaussian_on(g, c0);
    const double want = kHalfPlane.N * c0 *
                        std::pow(std::numbers::pi / (2.0 * c0), 0.5 * kHalfPlane.N) *
                        kHalfPlane.avr();
    CAPTURE(c0);
    CHECK_THAT(dirichlet_energy(kHalfPlane, g, u.values), Catch::Matchers::WithinRel(want, 1e-9));
  }
  RadialFunction half = gaussian_on(g, 0.5);
  CHECK_THAT(dirichlet_energy(kHalfPlane, g, half.values),
             Catch::Matchers::WithinRel(std::numbers::pi / 2.0, 1e-10));
}

TEST_CASE("powers of evolved data keep finite energy") {
  const RadialGrid g = make_grid(2.0, 1.0, 1024);
  const RadialFunction f = gaussian_on(g, 1.0);
  const RadialFunction ft = apply_heat(kHalfPlane, f, 0.3);
  for (double alpha : {1.0, 2.0, 3.5}) {
    std::vector<double> powed(ft.values.size());
    for (std::size_t i = 0; i < powed.size(); ++i) powed[i] = std::pow(ft.values[i], alpha);
    CHECK(std::isfinite(dirichlet_energy(kHalfPlane, g, powed)));
  }
}

TEST_CASE("contractivity, positivity, and mass conservation on random data") {
  const RadialGrid g = make_grid(2.0, 1.0, 1024);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<double> f(g.size(), 0.0);
    for (int b = 0; b < 4; ++b) {
      const double c = 0.3 + 3.0 * unif(rng);
      const double a = 0.1 + unif(rng);
      const double mu = 3.0 * unif(rng);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes()[i];
        f[i] += a * std::exp(-c * (r - mu) * (r - mu));
      }
    }
    RadialFunction rf{&g, f};
    const double t = 0.05 + unif(rng);
    const RadialFunction ft = apply_heat(kHalfPlane, rf, t);
    for (double v : ft.values) REQUIRE(v >= 0.0);
    for (double p : {1.0, 2.0, 5.0}) {
      const Exponent e = Exponent::finite(p);
      REQUIRE(lp_norm(kHalfPlane, ft, e) <= lp_norm(kHalfPlane, rf, e) * (1.0 + 1e-9));
    }
    REQUIRE(lp_norm(kHalfPlane, ft, Exponent::infinity()) <=
            lp_norm(kHalfPlane, rf, Exponent::infinity()) * (1.0 + 1e-9));
    const double m0 = lp_norm(kHalfPlane, rf, Exponent::finite(1.0));
    const double m1 = lp_norm(kHalfPlane, ft, Exponent::finite(1.0));
    REQUIRE(std::abs(m1 - m0) < 1e-9 * m0);
  }
}

TEST_CASE("log-convexity trace of the L2 energy") {
  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  const RadialGrid g = make_grid(2.0, 10.0, 2048);
  const RadialFunction f = gaussian_on(g, 1.0);
  std::vector<double> times;
  for (double s = 0.1; s <= 10.0 + 1e-12; s += 0.3) times.push_back(s);
  const auto rows = energy_log_convexity_trace(plane, f, times);

  // Closed form on the plane: E(s) = pi / (2 + 8 s).
  for (const auto& row : rows) {
    const double want = std::numbers::pi / (2.0 + 8.0 * row.s);
    REQUIRE_THAT(row.energy, Catch::Matchers::WithinRel(want, 1e-9));
  }
  double prev = HUGE_VAL;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].energy > 0.0);
    REQUIRE(rows[i].energy <= prev * (1.0 + 1e-12));
    prev = rows[i].energy;
    if (i > 0 && i + 1 < rows.size()) REQUIRE(rows[i].convexity_slack >= -1e-9);
  }
}

TEST_CASE("log-convexity trace on plateau data") {
  const RadialGrid g = make_grid(2.0, 10.0, 2048);
  RadialFunction f = RadialFunction::sample(g, [](double r) { return r < 1.0 ? 1.0 : 0.0; });
  std::vector<double> times;
  for (double s = 0.1; s <= 10.0 + 1e-12; s += 0.3) times.push_back(s);
  const auto rows = energy_log_convexity_trace(kHalfPlane, f, times);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    REQUIRE(rows[i].convexity_slack >= -1e-9);
  }
}

TEST_CASE("Fourier verification of the Gaussian evolution") {
  const FourierCheckReport one = fourier_gaussian_check(1.0 / 8.0, 1.0, 1);
  CHECK(one.pass);
  CHECK_THAT(one.beta_fit, Catch::Matchers::WithinAbs(1.0 / 12.0, 1e-8));
  CHECK_THAT(one.beta_expected, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-14));

  // t0 -> 0 approaches the identity.
  const FourierCheckReport ident = fourier_gaussian_check(1.0 / 8.0, 1e-5, 1);
  CHECK_THAT(ident.beta_fit, Catch::Matchers::WithinAbs(1.0 / 8.0, 1e-4));

  const FourierCheckReport two = fourier_gaussian_check(1.0 / 8.0, 1.0, 2);
  CHECK(two.pass);
  CHECK_THAT(two.amplitude_fit, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-6));
}

TEST_CASE("surface solver conserves mass and flattens correctly") {
  const SurfaceSpace s(0.5);
  const SurfaceGrid grid = make_surface_grid(s, 4.0);
  SurfaceHeatSolver solver(grid);

  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes()[i];
    u[i] = std::exp(-r * r);
  }
  const double m0 = grid.integrate(u);
  std::vector<double> v = u;
  solver.evolve(v, 0.0, 2.0);
  for (double x : v) REQUIRE(x >= -1e-14);
  CHECK_THAT(grid.integrate(v), Catch::Matchers::WithinRel(m0, 1e-6));

  // Flat profile (c = 1) reproduces the Euclidean kernel diagonal.
  const SurfaceSpace flat(1.0);
  const SurfaceGrid fgrid = make_surface_grid(flat, 4.0);
  SurfaceHeatSolver fsolver(fgrid);
  for (double t : {0.5, 1.0, 2.0}) {
    const double diag = fsolver.kernel_from_pole(t)[0];
    CAPTURE(t);
    CHECK_THAT(diag, Catch::Matchers::WithinRel(1.0 / (4.0 * std::numbers::pi * t), 2e-3));
  }
}
