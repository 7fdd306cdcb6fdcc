#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hypercone/bakry.hpp"
#include "hypercone/hyper.hpp"
#include "hypercone/rigidity.hpp"
#include "hypercone/semigroup.hpp"

#include "json.hpp"

namespace hypercone {

/// A numeric paired with the tolerance it was checked against.
inline nlohmann::json checked(double value, double tol) {
  return nlohmann::json{{"value", value}, {"tol", tol}};
}

/// CSV with '.' decimal, ',' separator, and a header row; full round-trip
/// precision per field.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CsvWriter: row width mismatch");
    rows_.push_back(row);
  }

  std::string str() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < header_.size(); ++i) {
      out << (i ? "," : "") << header_[i];
    }
    out << "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << row[i];
      }
      out << "\n";
    }
    return out.str();
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
    out << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline CsvWriter to_csv(const std::vector<ConvexityRow>& rows) {
  CsvWriter csv({"s", "E", "logE", "convexity_slack"});
  for (const auto& r : rows) csv.add_row({r.s, r.energy, r.log_energy, r.convexity_slack});
  return csv;
}

inline CsvWriter to_csv(const FlowTrace& trace) {
  CsvWriter csv({"t", "p", "m", "V"});
  for (const auto& s : trace.samples) csv.add_row({s.t, s.p, s.m, s.V});
  return csv;
}

inline CsvWriter to_csv(const std::vector<NormTraceRow>& rows) {
  CsvWriter csv({"t", "estimate", "scaled"});
  for (const auto& r : rows) csv.add_row({r.t, r.estimate, r.scaled});
  return csv;
}

inline CsvWriter to_csv(const LiLimitReport& rep) {
  CsvWriter csv({"t", "kernel", "ball_times_kernel", "t_pow_kernel"});
  for (const auto& r : rep.rows) {
    csv.add_row({r.t, r.kernel, r.ball_times_kernel, r.t_pow_kernel});
  }
  return csv;
}

inline nlohmann::json to_json(const KernelEval& eval) {
  return {{"value", eval.value},
          {"t", eval.t},
          {"series_terms_used", eval.series_terms_used},
          {"truncation_error_bound", eval.truncation_error_bound},
          {"converged", eval.converged}};
}

inline nlohmann::json to_json(const FlowTrace& trace) {
  return {{"lambda", trace.lambda},
          {"N", trace.N},
          {"avr", trace.avr},
          {"p_start", trace.p_start},
          {"horizon", trace.horizon},
          {"monotone", trace.monotone},
          {"exponent_capped", trace.exponent_capped},
          {"max_increase", checked(trace.max_increase, 1e-8)},
          {"ode_residual_m", checked(trace.ode_residual_m, 1e-6)},
          {"ode_residual_v", checked(trace.ode_residual_v, 1e-6)},
          {"V_start", trace.samples.front().V},
          {"V_end", trace.samples.back().V}};
}

inline nlohmann::json to_json(const LogSobolevReport& rep) {
  return {{"entropy_side", rep.entropy_side},
          {"energy_side", rep.energy_side},
          {"deficit", checked(rep.deficit, 1e-8)},
          {"dirichlet", rep.dirichlet},
          {"l2_norm", rep.l2_norm}};
}

inline nlohmann::json to_json(const MunnPerelmanTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"k", row.k},
                    {"log10_C", row.log_C / std::numbers::ln10},
                    {"log10_delta", row.log_delta / std::numbers::ln10},
                    {"root_residual", checked(row.root_residual, 1e-12)},
                    {"alpha", row.alpha.value()},
                    {"log10_one_minus_alpha", row.alpha.log_gap / std::numbers::ln10}});
  }
  return {{"n", table.n}, {"rows", rows}};
}

inline std::string format_table(const MunnPerelmanTable& table) {
  std::ostringstream out;
  out << "k  log10(C)       log10(delta)   log10(1-alpha)  residual\n";
  for (const auto& row : table.rows) {
    out.precision(6);
    out << row.k << "  ";
    out.width(13);
    out << row.log_C / std::numbers::ln10 << "  ";
    out.width(13);
    out << row.log_delta / std::numbers::ln10 << "  ";
    out.width(14);
    out << row.alpha.log_gap / std::numbers::ln10 << "  " << row.root_residual << "\n";
  }
  return out.str();
}

inline nlohmann::json to_json(const TopologyReport& rep) {
  nlohmann::json thresholds = nlohmann::json::array();
  for (const auto& a : rep.thresholds) {
    thresholds.push_back({{"k", a.k},
                          {"log10_one_minus_alpha", a.log_gap / std::numbers::ln10},
                          {"exceeded_by_K", a.exceeded_by(rep.K)}});
  }
  return {{"n", rep.n},
          {"K", rep.K},
          {"fundamental_group_order_bound", rep.order_bound},
          {"simply_connected", rep.simply_connected},
          {"homotopy_trivial_up_to", rep.homotopy_trivial_up_to},
          {"contractible", rep.contractible},
          {"thresholds", thresholds}};
}

inline nlohmann::json to_json(const GaussianBoundReport& rep) {
  return {{"C", rep.C},
          {"C_upper", rep.C_upper},
          {"C_lower", rep.C_lower},
          {"eps", rep.eps},
          {"samples", rep.samples},
          {"finite", rep.finite}};
}

}  // namespace hypercone
