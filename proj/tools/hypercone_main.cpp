// Batch front door: closed-form constants, operator-norm estimates, flow
// traces, log-Sobolev deficits, large-time kernel traces, rigidity tables,
// and the full verification suite. JSON to stdout or --out, CSV traces to
// --trace-dir.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypercone/io.hpp"
#include "hypercone/verify.hpp"

namespace {

using nlohmann::json;
using namespace hypercone;

constexpr int kSchemaVersion = 1;

// Accepts plain numbers and the forms "pi", "2pi", "pi/2", "3pi/2".
double parse_angle(const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return std::stod(text);
  double numerator = 1.0;
  if (pos > 0) numerator = std::stod(text.substr(0, pos));
  double denominator = 1.0;
  const auto slash = text.find('/', pos);
  if (slash != std::string::npos) denominator = std::stod(text.substr(slash + 1));
  return numerator * std::numbers::pi / denominator;
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return Exponent::infinity();
  return Exponent::finite(std::stod(text));
}

void emit(const json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file " + out_path);
    out << payload.dump(2) << "\n";
  }
}

void write_trace(const CsvWriter& csv, const std::string& dir, const std::string& name) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  csv.write((std::filesystem::path(dir) / name).string());
}

struct SpaceOptions {
  std::string kind = "cone";
  std::string theta = "pi";
  double sigma = 0.0;
  double N = 2.0;
  double c = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--space", kind, "space kind: cone | euclidean | surface")
        ->check(CLI::IsMember({"cone", "euclidean", "surface"}));
    cmd->add_option("--theta", theta, "cone angle (2-D), e.g. pi, 3pi/2, 4.71");
    cmd->add_option("--sigma", sigma, "cross-section measure for N > 2 cones");
    cmd->add_option("--N", N, "cone dimension");
    cmd->add_option("--c", c, "surface asymptotic slope (AVR)");
  }

  Space build() const {
    if (kind == "surface") return SurfaceSpace(c);
    if (kind == "euclidean") return ConeSpace::euclidean(N);
    if (sigma > 0.0) return ConeSpace(N, sigma);
    return ConeSpace::two_dimensional(parse_angle(theta));
  }
};

// Strict config-file merge: every key must name a flag of the subcommand.
void apply_config(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  json cfg = json::parse(in);
  std::vector<std::string> args;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (cmd->get_option_no_throw(flag) == nullptr) {
      throw std::invalid_argument("unknown config key '" + it.key() + "'");
    }
    args.push_back(flag);
    if (it.value().is_string()) {
      args.push_back(it.value().get<std::string>());
    } else {
      args.push_back(it.value().dump());
    }
  }
  std::reverse(args.begin(), args.end());
  cmd->parse(args);
}

json json_header(const std::string& command, std::uint64_t seed) {
  return json{{"schema", kSchemaVersion}, {"command", command}, {"seed", seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypercone: sharp heat-flow hypercontractivity on cones and surfaces"};
  app.require_subcommand(1);

  std::string out_path, trace_dir, config_path;
  std::uint64_t seed = 0;
  app.add_option("--out", out_path, "write JSON here instead of stdout")->capture_default_str();
  app.add_option("--trace-dir", trace_dir, "directory for CSV traces");
  app.add_option("--seed", seed, "seed for randomized sweeps")->capture_default_str();

  // constants ---------------------------------------------------------------
  auto* c_constants = app.add_subcommand("constants", "closed-form constants of a pair");
  std::string cp = "2", cq = "4";
  double cN = 2.0, cavr = 1.0, ct = 1.0;
  c_constants->add_option("--p", cp, "lower exponent (number or inf)");
  c_constants->add_option("--q", cq, "upper exponent (number or inf)");
  c_constants->add_option("--N", cN, "dimension parameter");
  c_constants->add_option("--avr", cavr, "asymptotic volume ratio");
  c_constants->add_option("--t", ct, "time");

  // norm --------------------------------------------------------------------
  auto* c_norm = app.add_subcommand("norm", "operator norm estimate vs sharp value");
  SpaceOptions norm_space;
  norm_space.attach(c_norm);
  std::string np = "2", nq = "4";
  double nt = 1.0;
  int ngrid = 2048;
  bool nmultistart = false;
  c_norm->add_option("--p", np, "lower exponent");
  c_norm->add_option("--q", nq, "upper exponent (number or inf)");
  c_norm->add_option("--t", nt, "time");
  c_norm->add_option("--grid", ngrid, "quadrature nodes");
  c_norm->add_flag("--multistart", nmultistart, "audit with a second starting datum");

  // flow --------------------------------------------------------------------
  auto* c_flow = app.add_subcommand("flow", "monotone functional along the exponent flow");
  std::string fth = "pi", fp = "2", fq = "4", fdata = "extremal";
  double ft = 1.0;
  int fsteps = 64, fgrid = 2048;
  c_flow->add_option("--theta", fth, "cone angle");
  c_flow->add_option("--p", fp, "start exponent (>= 2)");
  c_flow->add_option("--q", fq, "target exponent");
  c_flow->add_option("--t", ft, "target time");
  c_flow->add_option("--steps", fsteps, "flow samples");
  c_flow->add_option("--grid", fgrid, "quadrature nodes");
  c_flow->add_option("--data", fdata, "initial datum: extremal | plateau | gaussian")
      ->check(CLI::IsMember({"extremal", "plateau", "gaussian"}));

  // logsob ------------------------------------------------------------------
  auto* c_logsob = app.add_subcommand("logsob", "log-Sobolev deficits on a cone");
  std::string lth = "pi";
  std::vector<double> lc0{0.25, 0.5, 2.0};
  int lrandom = 0, lgrid = 4096;
  c_logsob->add_option("--theta", lth, "cone angle");
  c_logsob->add_option("--c0", lc0, "Gaussian dilation factors");
  c_logsob->add_option("--random", lrandom, "additional random mixtures");
  c_logsob->add_option("--grid", lgrid, "quadrature nodes");

  // li-limit ----------------------------------------------------------------
  auto* c_li = app.add_subcommand("li-limit", "large-time kernel trace");
  SpaceOptions li_space;
  li_space.attach(c_li);
  double li_xr = 1.0, li_xphi = 0.0, li_yr = 2.0, li_yphi = 1.0, li_tmax = 1e4;
  int li_points = 13;
  c_li->add_option("--x-r", li_xr, "first point radius");
  c_li->add_option("--x-phi", li_xphi, "first point angle");
  c_li->add_option("--y-r", li_yr, "second point radius");
  c_li->add_option("--y-phi", li_yphi, "second point angle");
  c_li->add_option("--t-max", li_tmax, "largest time");
  c_li->add_option("--points", li_points, "trace points (log-spaced)");

  // rigidity ----------------------------------------------------------------
  auto* c_rigidity = app.add_subcommand("rigidity", "Munn-Perelman table and topology report");
  int rn = 2;
  double rK = -1.0;
  double rdelta = -1.0, rp = 2.0, rq = 4.0;
  c_rigidity->add_option("--n", rn, "dimension");
  c_rigidity->add_option("--K", rK, "volume-ratio level for the topology report");
  c_rigidity->add_option("--delta", rdelta, "deficit for the pinching factor");
  c_rigidity->add_option("--p", rp, "pinching exponent p");
  c_rigidity->add_option("--q", rq, "pinching exponent q");

  // verify ------------------------------------------------------------------
  auto* c_verify = app.add_subcommand("verify", "run the full acceptance suite");

  for (auto* cmd : {c_constants, c_norm, c_flow, c_logsob, c_li, c_rigidity, c_verify}) {
    cmd->add_option("--config", config_path, "JSON config file (keys mirror flags)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config(active, config_path);

    if (c_constants->parsed()) {
      const ExponentPair pair(parse_exponent(cp), parse_exponent(cq));
      json out = json_header("constants", seed);
      out["pair"] = {{"p", cp}, {"q", cq}};
      out["M"] = m_constant(pair);
      out["sharp_bound"] = sharp_bound({pair, cN, cavr, ct});
      const bool interior = !pair.p.is_infinite() && !pair.q.is_infinite() &&
                            pair.p.value() > 1.0 && !pair.effectively_equal();
      if (interior) {
        out["alpha0"] = extremizer_alpha(pair, ct);
        out["beta0"] = extremizer_beta(pair, ct);
        out["time_shift"] = gaussian_time_shift(pair, ct);
      }
      if (!pair.p.is_infinite() && pair.p.value() > 1.0 && !pair.effectively_equal()) {
        out["a_max"] = optimal_a(pair);
      }
      emit(out, out_path);
      return 0;
    }

    if (c_norm->parsed()) {
      const ExponentPair pair(parse_exponent(np), parse_exponent(nq));
      const Space space = norm_space.build();
      json out = json_header("norm", seed);
      out["space"] = space_to_json(space);
      out["pair"] = {{"p", np}, {"q", nq}};
      out["t"] = nt;
      PowerIterationOptions opts;
      opts.multistart = nmultistart;
      if (const auto* cone = std::get_if<ConeSpace>(&space)) {
        const bool interior = !pair.p.is_infinite() && pair.p.value() > 1.0 &&
                              !pair.q.is_infinite() && !pair.effectively_equal();
        const double widest = interior ? std::max(1.0, optimal_a(pair)) * nt : nt;
        const RadialGrid grid = make_grid(cone->N, widest, ngrid);
        const NormEstimate est = estimate_operator_norm(*cone, grid, pair, nt, opts);
        const double sharp = sharp_constant_cone(*cone, pair, nt);
        out["estimate"] = est.value;
        out["sharp"] = sharp;
        out["gap"] = checked((sharp - est.value) / sharp, 1e-2);
        out["iterations"] = est.iterations;
        out["residual"] = est.residual;
        if (nmultistart) out["multistart_gap"] = est.multistart_gap;
      } else {
        const auto& surface = std::get<SurfaceSpace>(space);
        const SurfaceGrid grid = make_surface_grid(surface, std::max(1.0, nt));
        const NormEstimate est = estimate_operator_norm(surface, grid, pair, nt, opts);
        const double bound = sharp_bound({pair, 2.0, surface.avr(), nt});
        out["estimate"] = est.value;
        out["sharp_bound"] = bound;
        out["gap"] = checked((bound - est.value) / bound, 1e-2);
        out["iterations"] = est.iterations;
        out["residual"] = est.residual;
        if (nmultistart) out["multistart_gap"] = est.multistart_gap;
      }
      emit(out, out_path);
      return 0;
    }

    if (c_flow->parsed()) {
      const ConeSpace cone = ConeSpace::two_dimensional(parse_angle(fth));
      const ExponentPair pair(parse_exponent(fp), parse_exponent(fq));
      const double a = optimal_a(pair);
      const RadialGrid grid = make_grid(2.0, std::max(1.0, std::max(ft, a * ft)), fgrid);
      RadialFunction f;
      if (fdata == "extremal") {
        f = extremizer(cone, grid, pair, ft);
      } else if (fdata == "plateau") {
        f = RadialFunction::sample(grid, [](double r) { return r < 1.0 ? 1.0 : 0.0; });
      } else {
        f = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); });
      }
      const FlowTrace trace = integrate_flow(cone, f, pair, ft, fsteps);
      write_trace(to_csv(trace), trace_dir, "flow.csv");
      json out = json_header("flow", seed);
      out["space"] = space_to_json(cone);
      out["data"] = fdata;
      out["trace"] = to_json(trace);
      emit(out, out_path);
      return trace.monotone ? 0 : 2;
    }

    if (c_logsob->parsed()) {
      const ConeSpace cone = ConeSpace::two_dimensional(parse_angle(lth));
      const RadialGrid grid = make_grid(2.0, 1.0, lgrid);
      json out = json_header("logsob", seed);
      out["space"] = space_to_json(cone);
      json rows = json::array();
      for (double c0 : lc0) {
        std::vector<double> u(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          u[i] = std::exp(-c0 * grid.nodes()[i] * grid.nodes()[i]);
        }
        json row = to_json(logsobolev_check(cone, grid, u));
        row["c0"] = c0;
        row["deficit"]["tol"] = 1e-6;  // equality case
        rows.push_back(row);
      }
      std::mt19937_64 rng(seed);
      for (int i = 0; i < lrandom; ++i) {
        const std::vector<double> u = hypercone::detail::gaussian_mixture(grid, rng, 3);
        json row = to_json(logsobolev_check(cone, grid, u));
        row["c0"] = nullptr;
        rows.push_back(row);
      }
      out["checks"] = rows;
      emit(out, out_path);
      return 0;
    }

    if (c_li->parsed()) {
      std::vector<double> times;
      for (int i = 0; i < li_points; ++i) {
        times.push_back(
            std::exp(std::lerp(std::log(1.0), std::log(li_tmax), i / double(li_points - 1))));
      }
      const Space space = li_space.build();
      json out = json_header("li-limit", seed);
      out["space"] = space_to_json(space);
      LiLimitReport rep;
      if (const auto* cone = std::get_if<ConeSpace>(&space)) {
        rep = li_limit_trace(*cone, ConePoint{li_xr, li_xphi}, ConePoint{li_yr, li_yphi},
                             ConePoint::tip(), times);
      } else {
        const auto& surface = std::get<SurfaceSpace>(space);
        const SurfaceGrid grid = make_surface_grid(surface, li_tmax);
        rep = li_limit_trace(surface, grid, times);
      }
      write_trace(to_csv(rep), trace_dir, "li_limit.csv");
      out["limit_expected"] = rep.limit_expected;
      out["final"] = checked(rep.rows.back().ball_times_kernel, 0.01 * rep.limit_expected);
      out["converged"] = rep.converged;
      emit(out, out_path);
      return 0;
    }

    if (c_rigidity->parsed()) {
      json out = json_header("rigidity", seed);
      const MunnPerelmanTable table = munn_perelman_table(rn);
      out["table"] = to_json(table);
      std::cerr << format_table(table);
      if (rK > 0.0) out["topology"] = to_json(topology_report(rn, rK));
      if (rdelta >= 0.0) {
        out["avr_pinch"] = avr_pinch_from_deficit(ExponentPair::of(rp, rq), rdelta);
      }
      emit(out, out_path);
      return 0;
    }

    if (c_verify->parsed()) {
      const auto results = run_acceptance(seed);
      json out = json_header("verify", seed);
      json rows = json::array();
      bool all = true;
      for (const auto& r : results) {
        std::cerr << "criterion " << (r.id < 10 ? "0" : "") << r.id << " "
                  << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " -- " << r.detail << "\n";
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
      }
      out["criteria"] = rows;
      out["all_passed"] = all;
      emit(out, out_path);
      return all ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
