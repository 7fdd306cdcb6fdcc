#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hypercone/bakry.hpp"
#include "hypercone/hyper.hpp"
#include "hypercone/rigidity.hpp"
#include "hypercone/semigroup.hpp"

namespace hypercone {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline int verification_threads() {
  if (const char* env = std::getenv("HYPERCONE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw ? hw : 1u));
}

inline void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(verification_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline std::string fmt(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

inline std::vector<double> gaussian_mixture(const RadialGrid& g, std::mt19937_64& rng, int bumps) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> f(g.size(), 0.0);
  for (int b = 0; b < bumps; ++b) {
    const double c = 0.3 + 4.0 * unif(rng);
    const double a = 0.1 + unif(rng);
    const double mu = 2.5 * unif(rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes()[i];
      f[i] += a * std::exp(-c * (r - mu) * (r - mu));
    }
  }
  return f;
}

}  // namespace detail

/// 1. Extremal Gaussians and the power iteration reproduce the closed-form
///    constant on 2-D cones.
inline CriterionResult criterion_sharp_saturation() {
  CriterionResult res{1, "sharp constant saturation on cones", true, ""};
  const RadialGrid grid = make_grid(2.0, 4.0, 2048);
  struct Case {
    double theta, p, q, t;
  };
  std::vector<Case> cases;
  for (double theta : {0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi}) {
    for (auto [p, q] : {std::pair{1.5, 3.0}, {2.0, 4.0}}) {
      for (double t : {0.5, 1.0, 2.0}) cases.push_back({theta, p, q, t});
    }
  }
  std::vector<double> ratio_err(cases.size(), 0.0), iter_err(cases.size(), 0.0);
  detail::parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const Case& c = cases[i];
    const ConeSpace cone = ConeSpace::two_dimensional(c.theta);
    const ExponentPair pair = ExponentPair::of(c.p, c.q);
    const double sharp = sharp_constant_cone(cone, pair, c.t);
    const RadialFunction f = extremizer(cone, grid, pair, c.t);
    const RadialFunction ft = apply_heat(cone, f, c.t);
    const double ratio = lp_norm(cone, ft, pair.q) / lp_norm(cone, f, pair.p);
    ratio_err[i] = std::abs(ratio / sharp - 1.0);
    const NormEstimate est = estimate_operator_norm(cone, grid, pair, c.t);
    iter_err[i] = std::abs(est.value / sharp - 1.0);
  });
  double worst_ratio = 0.0, worst_iter = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    worst_ratio = std::max(worst_ratio, ratio_err[i]);
    worst_iter = std::max(worst_iter, iter_err[i]);
  }
  res.pass = worst_ratio <= 5e-3 && worst_iter <= 1e-2;
  res.detail = "worst extremizer ratio error " + detail::fmt(worst_ratio) +
               " (tol 5e-3), worst iteration error " + detail::fmt(worst_iter) + " (tol 1e-2)";
  return res;
}

/// 2. The (1, inf) norm on the half-plane cone is 2/(4 pi t).
inline CriterionResult criterion_boundary_exponents() {
  CriterionResult res{2, "boundary exponents via kernel supremum", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid grid = make_grid(2.0, 1.0, 512);
  const ExponentPair one_inf(Exponent::finite(1.0), Exponent::infinity());
  double worst = 0.0;
  for (double t : {0.25, 1.0, 5.0}) {
    const double est = estimate_operator_norm(cone, grid, one_inf, t).value;
    worst = std::max(worst, std::abs(est * (4.0 * std::numbers::pi * t) / 2.0 - 1.0));
  }
  res.pass = worst <= 1e-8;
  res.detail = "worst relative error " + detail::fmt(worst) + " (tol 1e-8)";
  return res;
}

/// 3. The flow gauge exponentiates to the closed-form sharp bound.
inline CriterionResult criterion_flow_identity(std::uint64_t seed) {
  CriterionResult res{3, "flow gauge equals the sharp bound", true, ""};
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = 2.0 + 6.0 * unif(rng);
    const double q = p + 0.01 + 12.0 * unif(rng);
    const double N = 1.5 + 8.0 * unif(rng);
    const double avr = 0.05 + 0.95 * unif(rng);
    const double t = std::exp(std::lerp(std::log(0.01), std::log(100.0), unif(rng)));
    const ExponentPair pair = ExponentPair::of(p, q);
    const double lam = lambda_for_target(pair, t, N);
    const double got = std::exp(m_of_t(t, lam, p, N, avr));
    const double want = sharp_bound({pair, N, avr, t});
    worst = std::max(worst, std::abs(got / want - 1.0));
  }
  res.pass = worst <= 1e-10;
  res.detail = "worst relative deviation " + detail::fmt(worst) + " over 1000 draws (tol 1e-10)";
  return res;
}

/// 4. V is non-increasing along the flow; the extremal Gaussian keeps it flat.
inline CriterionResult criterion_flow_monotonicity(std::uint64_t seed) {
  CriterionResult res{4, "flow monotonicity", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid grid = make_grid(2.0, 1.0, 1024);

  double worst_increase = 0.0;
  std::vector<double> increases(20, 0.0);
  std::vector<std::vector<double>> data;
  std::mt19937_64 rng(seed ^ 0x1234abcdull);
  for (int i = 0; i < 20; ++i) data.push_back(detail::gaussian_mixture(grid, rng, 3));
  detail::parallel_for(20, [&](int i) {
    const FlowTrace trace =
        integrate_flow(cone, RadialFunction{&grid, data[i]}, ExponentPair::of(2.0, 4.0), 1.0, 32);
    increases[i] = trace.max_increase;
  });
  for (double v : increases) worst_increase = std::max(worst_increase, v);

  const RadialGrid fine = make_grid(2.0, 4.0, 2048);
  const ExponentPair pair = ExponentPair::of(2.0, 4.0);
  const RadialFunction f = extremizer(cone, fine, pair, 1.0);
  const FlowTrace eq = integrate_flow(cone, f, pair, 1.0, 64);
  const double flat = std::abs(eq.samples.back().V / eq.samples.front().V - 1.0);

  res.pass = worst_increase <= 1e-8 && flat <= 5e-3;
  res.detail = "worst V increase " + detail::fmt(worst_increase) +
               " (tol 1e-8), extremal-case drift " + detail::fmt(flat) + " (tol 5e-3)";
  return res;
}

/// 5. The log-Sobolev deficit is non-negative, and zero exactly on Gaussians.
inline CriterionResult criterion_logsobolev(std::uint64_t seed) {
  CriterionResult res{5, "sharp log-Sobolev deficit", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid grid = make_grid(2.0, 1.0, 1024);
  std::mt19937_64 rng(seed ^ 0x77777777ull);
  double most_negative = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> u = detail::gaussian_mixture(grid, rng, 3);
    const LogSobolevReport rep = logsobolev_check(cone, grid, u);
    most_negative = std::min(most_negative, rep.deficit);
  }

  const RadialGrid fine = make_grid(2.0, 1.0, 4096);
  double worst_gaussian = 0.0;
  for (double c0 : {0.25, 0.5, 2.0}) {
    std::vector<double> u(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      u[i] = std::exp(-c0 * fine.nodes()[i] * fine.nodes()[i]);
    }
    worst_gaussian = std::max(worst_gaussian, std::abs(logsobolev_check(cone, fine, u).deficit));
  }
  res.pass = most_negative >= -1e-8 && worst_gaussian <= 1e-6;
  res.detail = "most negative deficit " + detail::fmt(most_negative) +
               " (tol -1e-8), worst Gaussian deficit " + detail::fmt(worst_gaussian) +
               " (tol 1e-6)";
  return res;
}

/// 6. Large-time kernel limit through the angular series.
inline CriterionResult criterion_li_limit() {
  CriterionResult res{6, "large-time kernel limit", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const double t = 1e4;
  const double got = t * carslaw_kernel(cone, ConePoint{1.0, 0.0}, ConePoint{2.0, 1.0}, t).value;
  const double want = 1.0 / (2.0 * std::numbers::pi);
  const double err = std::abs(got / want - 1.0);
  res.pass = err <= 1e-2;
  res.detail = "t h(x,y,t) off by " + detail::fmt(err) + " at t = 1e4 (tol 1e-2)";
  return res;
}

/// 7. log E(s) is convex along the flow for Gaussian and plateau data.
inline CriterionResult criterion_log_convexity() {
  CriterionResult res{7, "energy log-convexity", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid grid = make_grid(2.0, 10.0, 2048);
  std::vector<double> times;
  for (double s = 0.1; s <= 10.0 + 1e-12; s += 0.3) times.push_back(s);

  double worst = 0.0;
  for (int kind = 0; kind < 2; ++kind) {
    RadialFunction f = RadialFunction::sample(grid, [&](double r) {
      return kind == 0 ? std::exp(-r * r) : (r < 1.0 ? 1.0 : 0.0);
    });
    const auto rows = energy_log_convexity_trace(cone, f, times);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      worst = std::min(worst, rows[i].convexity_slack);
    }
  }
  res.pass = worst >= -1e-9;
  res.detail = "most negative midpoint slack " + detail::fmt(worst) + " (tol -1e-9)";
  return res;
}

/// 8. The metric-measure rescaling identity, exactly.
inline CriterionResult criterion_rescaling(std::uint64_t seed) {
  CriterionResult res{8, "rescaling identities", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  std::mt19937_64 rng(seed ^ 0xabcdef01ull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = std::exp(std::lerp(std::log(0.1), std::log(10.0), unif(rng)));
    const double tau = std::exp(std::lerp(std::log(0.1), std::log(10.0), unif(rng)));
    const double t = std::exp(std::lerp(std::log(0.1), std::log(10.0), unif(rng)));
    for (auto [p, q] : {std::pair{2.0, 4.0}, {1.5, 3.0}}) {
      worst = std::max(
          worst, rescaling_identity_check(cone, ExponentPair::of(p, q), t, r, tau).deviation);
    }
  }
  res.pass = worst <= 1e-12;
  res.detail = "worst deviation " + detail::fmt(worst) + " over 100 draws (tol 1e-12)";
  return res;
}

/// 9. t^{N/2} C(1, inf, t) is non-decreasing; the two-sided bound pinches to
///    equality on cones.
inline CriterionResult criterion_monotonicity_two_sided() {
  CriterionResult res{9, "time monotonicity and two-sided bound", true, ""};
  const ConeSpace cone = ConeSpace::two_dimensional(std::numbers::pi);
  const RadialGrid grid = make_grid(2.0, 100.0, 1024);
  const ExponentPair one_inf(Exponent::finite(1.0), Exponent::infinity());

  std::vector<double> times;
  for (int i = 0; i < 20; ++i) {
    times.push_back(std::exp(std::lerp(std::log(0.25), std::log(100.0), i / 19.0)));
  }

  bool monotone_cone = true;
  double worst_equality = 0.0;
  double prev = 0.0;
  for (double t : times) {
    const double c = estimate_operator_norm(cone, grid, one_inf, t).value;
    const double v = t * c;
    if (v < prev * (1.0 - 1e-12)) monotone_cone = false;
    prev = v;
    const TwoSidedBoundReport two = two_sided_bound_check(cone, t);
    worst_equality = std::max(worst_equality, std::abs(two.middle / two.upper - 1.0));
  }

  const SurfaceSpace surface(0.5);
  const SurfaceGrid sgrid = make_surface_grid(surface, 100.0);
  SurfaceHeatSolver solver(sgrid);
  bool monotone_surface = true;
  bool strict_bounds = true;
  prev = 0.0;
  for (double t : times) {
    const double diag = solver.kernel_from_pole(t)[0];
    const double v = t * diag;
    if (v < prev * (1.0 - 1e-9)) monotone_surface = false;
    prev = v;
    const double scaled = 4.0 * std::numbers::pi * v;
    if (!(scaled >= 1.0 - 1e-6 && scaled <= 2.0 + 1e-6)) strict_bounds = false;
  }

  res.pass = monotone_cone && monotone_surface && strict_bounds && worst_equality <= 1e-8;
  res.detail = std::string("cone monotone: ") + (monotone_cone ? "yes" : "no") +
               ", surface monotone: " + (monotone_surface ? "yes" : "no") +
               ", surface within two-sided bounds: " + (strict_bounds ? "yes" : "no") +
               ", cone equality error " + detail::fmt(worst_equality) + " (tol 1e-8)";
  return res;
}

/// 10. Strict inequality off cones, and the blow-down limit at desk scale.
inline CriterionResult criterion_strictness_off_cones() {
  CriterionResult res{10, "strictness off cones and blow-down limit", true, ""};
  const SurfaceSpace surface(0.5);
  const ExponentPair pair = ExponentPair::of(2.0, 4.0);

  const SurfaceGrid sgrid = make_surface_grid(surface, 1.0);
  const NormEstimate est = estimate_operator_norm(surface, sgrid, pair, 0.5);
  const double bound = sharp_bound({pair, 2.0, surface.avr(), 0.5});
  const double gap = (bound - est.value) / bound;

  const SurfaceGrid big = make_surface_grid(surface, 100.0);
  SurfaceHeatSolver solver(big);
  const double scaled = 4.0 * std::numbers::pi * 100.0 * solver.kernel_from_pole(100.0)[0];
  const double limit_err = std::abs(scaled / 2.0 - 1.0);

  res.pass = gap > 0.05 && limit_err <= 0.1;
  res.detail = "normalized gap " + detail::fmt(gap) + " (needs > 5e-2 = 10x grid tolerance)" +
               ", surface trace off cone value by " + detail::fmt(limit_err) +
               " at t = 100 (tol 0.1)";
  return res;
}

/// 11. Fourier route to the Gaussian evolution law.
inline CriterionResult criterion_fourier() {
  CriterionResult res{11, "Fourier verification", true, ""};
  const FourierCheckReport one = fourier_gaussian_check(1.0 / 8.0, 1.0, 1);
  const double beta_err = std::abs(one.beta_fit - 1.0 / 12.0);
  const FourierCheckReport two = fourier_gaussian_check(1.0 / 8.0, 1.0, 2);
  const double amp_err = std::abs(two.amplitude_fit - two.amplitude_expected);
  res.pass = beta_err <= 1e-8 && amp_err <= 1e-6 && one.pass && two.pass;
  res.detail = "beta error " + detail::fmt(beta_err) + " (tol 1e-8), amplitude error " +
               detail::fmt(amp_err) + " (tol 1e-6)";
  return res;
}

/// 12. Munn--Perelman table and the topological thresholds.
inline CriterionResult criterion_munn_perelman() {
  CriterionResult res{12, "Munn-Perelman constants and topology thresholds", true, ""};
  double worst_residual = 0.0;
  bool increasing = true, in_range = true;
  for (int n : {2, 3, 4}) {
    const MunnPerelmanTable table = munn_perelman_table(n);
    double prev_gap = 0.0;
    for (const auto& row : table.rows) {
      worst_residual = std::max(worst_residual, row.root_residual);
      if (!(row.alpha.log_gap < 0.0) || !std::isfinite(row.alpha.log_gap)) in_range = false;
      if (row.k > 1 && !(row.alpha.log_gap < prev_gap)) increasing = false;
      prev_gap = row.alpha.log_gap;
    }
  }

  bool thresholds_ok = true;
  for (double K : {0.2, 0.35, 0.45, 0.5, 0.500001, 0.7, 0.99, 1.0}) {
    const TopologyReport rep = topology_report(3, K);
    if (rep.order_bound != std::floor(1.0 / K)) thresholds_ok = false;
    if (rep.simply_connected != (K > 0.5)) thresholds_ok = false;
  }

  res.pass = worst_residual < 1e-12 && increasing && in_range && thresholds_ok;
  res.detail = "worst root residual " + detail::fmt(worst_residual) +
               " (tol 1e-12), alpha increasing: " + (increasing ? "yes" : "no") +
               ", in (0,1): " + (in_range ? "yes" : "no") +
               ", order/simply-connected thresholds: " + (thresholds_ok ? "yes" : "no");
  return res;
}

/// 13. Bessel against the half-integer closed form, and the angular series
///     against the plane.
inline CriterionResult criterion_bessel_oracle(std::uint64_t seed) {
  CriterionResult res{13, "Bessel and angular-series oracles", true, ""};
  double worst_bessel = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = std::exp(std::lerp(std::log(1e-3), std::log(50.0), i / 200.0));
    const double want = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sinh(x);
    worst_bessel = std::max(worst_bessel, std::abs(bessel_i(0.5, x) / want - 1.0));
  }

  const ConeSpace plane = ConeSpace::two_dimensional(2.0 * std::numbers::pi);
  std::mt19937_64 rng(seed ^ 0xfeedbeefull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_carslaw = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ConePoint x{4.0 * unif(rng), 2.0 * std::numbers::pi * unif(rng)};
    const ConePoint y{4.0 * unif(rng), 2.0 * std::numbers::pi * unif(rng)};
    const double d = cone_distance(plane, x, y);
    const double t_lo = std::max(0.05, d * d / 50.0);
    const double t = std::exp(std::lerp(std::log(t_lo), std::log(20.0 * t_lo), unif(rng)));
    const double got = carslaw_kernel(plane, x, y, t).value;
    const double want = euclidean_kernel(2, d, t);
    worst_carslaw = std::max(worst_carslaw, std::abs(got / want - 1.0));
  }
  res.pass = worst_bessel <= 1e-10 && worst_carslaw <= 1e-10;
  res.detail = "worst Bessel error " + detail::fmt(worst_bessel) +
               ", worst series-vs-plane error " + detail::fmt(worst_carslaw) + " (tol 1e-10)";
  return res;
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_sharp_saturation());
  results.push_back(criterion_boundary_exponents());
  results.push_back(criterion_flow_identity(seed));
  results.push_back(criterion_flow_monotonicity(seed));
  results.push_back(criterion_logsobolev(seed));
  results.push_back(criterion_li_limit());
  results.push_back(criterion_log_convexity());
  results.push_back(criterion_rescaling(seed));
  results.push_back(criterion_monotonicity_two_sided());
  results.push_back(criterion_strictness_off_cones());
  results.push_back(criterion_fourier());
  results.push_back(criterion_munn_perelman());
  results.push_back(criterion_bessel_oracle(seed));
  return results;
}

}  // namespace hypercone
