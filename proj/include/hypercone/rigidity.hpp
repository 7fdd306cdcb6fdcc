#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypercone/exponents.hpp"

namespace hypercone {
namespace detail {

inline double log_sum_exp(double a, double b) {
  if (a == -HUGE_VAL) return b;
  if (b == -HUGE_VAL) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace detail

/// log C_{k,n}(i) of the Perelman--Munn recursion
/// C(0) = 1, C(i) = 3 + 10 C(i-1) + (16k)^{n-1} (1 + 10 C(i-1))^n.
/// Values explode super-exponentially, so everything is carried in logs;
/// small values still round-trip exactly through exp.
inline double mp_C_log(int k, int n, int i) {
  if (k < 1 || k > n || i < 0 || i > k || n < 2) {
    throw std::invalid_argument("mp_C_log: need n >= 2, 1 <= k <= n, 0 <= i <= k");
  }
  double log_c = 0.0;  // C(0) = 1
  const double log_10 = std::log(10.0);
  const double log_16k = std::log(16.0 * k);
  for (int step = 1; step <= i; ++step) {
    const double log_10c = log_10 + log_c;
    const double log_1p10c = log_10c + std::log1p(std::exp(-log_10c));
    const double log_power = (n - 1) * log_16k + n * log_1p10c;
    log_c = detail::log_sum_exp(std::log(3.0), detail::log_sum_exp(log_10c, log_power));
  }
  return log_c;
}

/// C_{k,n}(i) as a double; +inf when it exceeds the representable range.
inline double mp_C(int k, int n, int i) { return std::exp(mp_C_log(k, n, i)); }

namespace detail {

/// log of g(s) = 10^{k+2} C_{k,n}(k) s (1 + s/(2k))^k at s = e^{log_s}.
inline double mp_g_log(int k, int n, double log_s) {
  const double s_over_2k = std::exp(log_s) / (2.0 * k);
  return (k + 2) * std::log(10.0) + mp_C_log(k, n, k) + log_s + k * std::log1p(s_over_2k);
}

/// Solves g(s) = e^{log_target} for log s by bisection; g is strictly
/// increasing, so the root is certified by the final bracket.
inline double mp_solve_log(int k, int n, double log_target) {
  double lo = log_target - (k + 2) * std::log(10.0) - mp_C_log(k, n, k) - 60.0;
  double hi = std::log(2.0 * k) + 30.0;
  if (!(mp_g_log(k, n, lo) < log_target && mp_g_log(k, n, hi) > log_target)) {
    throw std::runtime_error("mp_solve_log: bracket failure");
  }
  for (int it = 0; it < 300 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mp_g_log(k, n, mid) < log_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// log of the Munn--Perelman root delta_{k,n}, the smallest positive s with
/// 10^{k+2} C_{k,n}(k) s (1 + s/(2k))^k = 1.
inline double mp_delta_log(int k, int n) { return detail::mp_solve_log(k, n, 0.0); }

inline double mp_delta(int k, int n) { return std::exp(mp_delta_log(k, n)); }

/// h_{k,n}(s) = [1 - g(s)]^{-1} on (0, delta_{k,n}).
inline double mp_h(int k, int n, double s) {
  if (!(s > 0.0)) throw std::domain_error("mp_h: s > 0 required");
  const double g = std::exp(detail::mp_g_log(k, n, std::log(s)));
  if (!(g < 1.0)) throw std::domain_error("mp_h: s outside (0, delta)");
  return 1.0 / (1.0 - g);
}

/// Inverse of h for y > 1: solves g(s) = 1 - 1/y.
inline double mp_h_inverse(int k, int n, double y) {
  if (!(y > 1.0)) throw std::domain_error("mp_h_inverse: y > 1 required");
  return std::exp(detail::mp_solve_log(k, n, std::log1p(-1.0 / y)));
}

namespace detail {

/// log h^{-1}(1 + eps) from log eps: the target is g = eps / (1 + eps).
inline double mp_h_inverse_log_eps(int k, int n, double log_eps) {
  const double log_target = log_eps - std::log1p(std::exp(log_eps));
  return mp_solve_log(k, n, log_target);
}

}  // namespace detail

/// The Munn--Perelman constant alpha_MP(k, n), held as log(1 - alpha): the
/// gaps collapse far below double resolution already for k = 2.
struct AlphaMP {
  int k = 0;
  int n = 0;
  double log_gap = 0.0;  // log(1 - alpha)

  double value() const { return -std::expm1(log_gap); }
  /// K > alpha  <=>  1 - K < gap.
  bool exceeded_by(double K) const {
    if (K >= 1.0) return true;
    return std::log1p(-K) < log_gap;
  }
};

/// Nested evaluation of the alpha_MP display. Stage terms are accumulated
/// inside out: T_{k-1} = h^{-1}_{k-1,n}(1 + delta_{k,n}/(2k)) / (2(k-1)),
/// then T_j = h^{-1}_{j,n}(1 + sum_{i>j} T_i) / (2j) down to j = 1; the
/// result is 1 - [1 + (E / h^{-1}_{1,n}(E))^n]^{-1} with E = 1 + sum_j T_j.
/// The k = 1 branch is 1 - [1 + 2/h^{-1}_{1,n}(2)]^{-1}.
inline AlphaMP mp_alpha(int k, int n) {
  if (k < 1 || k > n || n < 2) throw std::invalid_argument("mp_alpha: 1 <= k <= n, n >= 2");
  AlphaMP out;
  out.k = k;
  out.n = n;
  if (k == 1) {
    const double log_r = std::log(2.0) - std::log(mp_h_inverse(1, n, 2.0));
    out.log_gap = -(log_r + std::log1p(std::exp(-log_r)));
    return out;
  }
  std::vector<double> log_terms;  // log T_j for j = k-1 down to 1
  double log_seed = mp_delta_log(k, n) - std::log(2.0 * k);
  log_terms.push_back(detail::mp_h_inverse_log_eps(k - 1, n, log_seed) -
                      std::log(2.0 * (k - 1)));
  for (int j = k - 2; j >= 1; --j) {
    double log_sum = -HUGE_VAL;
    for (double lt : log_terms) log_sum = detail::log_sum_exp(log_sum, lt);
    log_terms.push_back(detail::mp_h_inverse_log_eps(j, n, log_sum) - std::log(2.0 * j));
  }
  double log_eps_e = -HUGE_VAL;  // E = 1 + e^{log_eps_e}
  for (double lt : log_terms) log_eps_e = detail::log_sum_exp(log_eps_e, lt);
  const double log_e = std::log1p(std::exp(log_eps_e));
  const double log_sstar = detail::mp_h_inverse_log_eps(1, n, log_eps_e);
  const double x = n * (log_e - log_sstar);  // log(R^n)
  out.log_gap = -(x + std::log1p(std::exp(-x)));
  return out;
}

struct MunnPerelmanRow {
  int k = 0;
  double log_C = 0.0;        // log C_{k,n}(k)
  double log_delta = 0.0;    // log delta_{k,n}
  double root_residual = 0.0;
  AlphaMP alpha;
};

struct MunnPerelmanTable {
  int n = 0;
  std::vector<MunnPerelmanRow> rows;
};

inline MunnPerelmanTable munn_perelman_table(int n) {
  if (n < 2) throw std::invalid_argument("munn_perelman_table: n >= 2 required");
  MunnPerelmanTable table;
  table.n = n;
  for (int k = 1; k <= n; ++k) {
    MunnPerelmanRow row;
    row.k = k;
    row.log_C = mp_C_log(k, n, k);
    row.log_delta = mp_delta_log(k, n);
    row.root_residual = std::abs(std::expm1(detail::mp_g_log(k, n, row.log_delta)));
    row.alpha = mp_alpha(k, n);
    table.rows.push_back(row);
  }
  return table;
}

/// Lower pinching factor (1 + delta)^{pq/(p-q)} <= AVR / nu from a deficit
/// delta in the sharp constant; q = inf uses the limit exponent -p.
inline double avr_pinch_from_deficit(const ExponentPair& pair, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("avr_pinch_from_deficit: delta >= 0 required");
  if (pair.effectively_equal()) {
    throw std::invalid_argument("avr_pinch_from_deficit: p < q required");
  }
  const double p = pair.p.value();
  const double expo = pair.q.is_infinite()
                          ? -p
                          : p * pair.q.value() / (p - pair.q.value());
  return std::exp(expo * std::log1p(delta));
}

struct TopologyReport {
  int n = 0;
  double K = 0.0;
  double order_bound = 0.0;      // floor(1/K) bound on |pi_1|
  bool simply_connected = false; // K > 1/2
  int homotopy_trivial_up_to = 0;  // largest k0 with K > alpha_MP(k0, n)
  bool contractible = false;       // K > alpha_MP(n, n)
  std::vector<AlphaMP> thresholds;
};

/// Topological conclusions available at volume-ratio level K.
inline TopologyReport topology_report(int n, double K) {
  if (n < 2 || !(K > 0.0 && K <= 1.0)) {
    throw std::invalid_argument("topology_report: n >= 2 and K in (0,1] required");
  }
  TopologyReport rep;
  rep.n = n;
  rep.K = K;
  rep.order_bound = std::floor(1.0 / K);
  rep.simply_connected = K > 0.5;
  for (int k = 1; k <= n; ++k) {
    const AlphaMP alpha = mp_alpha(k, n);
    rep.thresholds.push_back(alpha);
    if (alpha.exceeded_by(K) && rep.homotopy_trivial_up_to == k - 1) {
      rep.homotopy_trivial_up_to = k;
    }
  }
  rep.contractible = rep.thresholds.back().exceeded_by(K);
  return rep;
}

}  // namespace hypercone
