#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dnstrip/errors.hpp"
#include "dnstrip/geometry.hpp"
#include "dnstrip/hardy_quadrature.hpp"
#include "dnstrip/io.hpp"
#include "dnstrip/laplacian2d.hpp"
#include "dnstrip/optimize.hpp"
#include "dnstrip/parallel.hpp"
#include "dnstrip/schrodinger1d.hpp"
#include "dnstrip/transcendental.hpp"

namespace dnstrip::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kUnits =
    "Units: lengths (a, eps) are absolute; L and eps brackets are in units of a. "
    "Energies are absolute (the Laplacian on the strip of half-width a); summaries "
    "also print them in units of (pi/4a)^2, the threshold of the essential spectrum.";

// Options are registered together with their variables so that the full
// resolved configuration, defaults included, can be echoed into the report.
class Params {
public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& desc) {
    echo_.emplace_back(name, [&var] { return json(var); });
    return app->add_option("--" + name, var, desc)->capture_default_str();
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& desc) {
    echo_.emplace_back(name, [&var] { return json(var); });
    return app->add_flag("--" + name, var, desc);
  }

  void echo_into(json& j) const {
    for (const auto& [name, get] : echo_) j[name] = get();
  }

private:
  std::vector<std::pair<std::string, std::function<json()>>> echo_;
};

struct Context {
  fs::path out_dir;
  bool print_json = false;
  std::ostream* out = nullptr;
  json config;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  Params params;
  std::function<int(Context&)> run;
};

double unit(double a) { return StripGeometry{a, 0.0}.threshold(); }

std::string energy(double v, double a) { return fmt::format("{:.9g} ({:.9g} (pi/4a)^2)", v, v / unit(a)); }

json fit_json(const LadderFit& f) {
  return {{"extrapolated", f.extrapolated}, {"error_bar", f.error_bar}, {"order", f.order}, {"monotone", f.monotone}};
}

json root_json(const RootResult& r) {
  return {{"value", r.value},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"residual", r.residual},
          {"iterations", r.iterations}};
}

void write(const Context& ctx, const std::string& file, std::string_view content) {
  io::write_file(ctx.out_dir / file, content);
}

int finish(Context& ctx, const std::string& name, json result, const std::string& summary, int code) {
  json report;
  report["command"] = name;
  report["config"] = ctx.config;
  report["result"] = std::move(result);
  report["exit_code"] = code;
  const std::string text = report.dump(2) + "\n";
  write(ctx, name + ".json", text);
  if (ctx.print_json) {
    *ctx.out << text;
  } else {
    *ctx.out << summary << '\n';
  }
  return code;
}

SolverConfig solver_config(double L, const std::vector<int>& ladder, double tol) {
  SolverConfig cfg;
  cfg.L = L;
  cfg.ladder = ladder;
  cfg.tol = tol;
  return cfg;
}

struct Solver2DOpts {
  double L = 12.0;
  std::vector<int> ladder{32, 64, 128};
  double tol = 1e-10;
};

void add_solver_options(CLI::App* app, Params& p, Solver2DOpts& o) {
  p.add(app, "L", o.L, "Truncation half-length, in units of a (>= 8)");
  p.add(app, "ladder", o.ladder, "Mesh ladder: transverse cell counts, each rung doubling the previous")
      ->expected(3, 16);
  p.add(app, "tol", o.tol, "Eigenvalue residual tolerance, relative to (pi/4a)^2");
}

// ---------------------------------------------------------------- roots

void add_roots(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "roots";
  cmd->app = root.add_subcommand("roots", "Constants s1 and t1 and the endpoint fraction check");
  cmd->app->footer(kUnits);
  struct Opts {
    double tol = kDefaultRootTol;
    double a = 1.0;
  };
  auto o = std::make_shared<Opts>();
  cmd->params.add(cmd->app, "tol", o->tol, "Root tolerance (dimensionless)");
  cmd->params.add(cmd->app, "a", o->a, "Half-width used for the absolute values");
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, 0.0);
    const RootResult s1 = solve_s1(o->tol);
    const RootResult t1 = solve_t1(o->tol);
    const auto p = ImplicitEqParams::make(geom, kPi / 4.0);
    const double ratio = g1(0.0, p) / g2(0.0, p);
    const double closed = std::sqrt(2.0) * std::tanh(std::sqrt(2.0) * kPi / 4.0);

    io::CsvTable csv({"quantity", "value", "bracket_lo", "bracket_hi", "residual", "iterations"});
    csv.add("s1", s1.value, s1.bracket_lo, s1.bracket_hi, s1.residual, s1.iterations);
    csv.add("t1", t1.value, t1.bracket_lo, t1.bracket_hi, t1.residual, t1.iterations);
    write(ctx, "roots.csv", csv.str());

    json r;
    r["s1"] = root_json(s1);
    r["s1"]["lambda_v0"] = s1.value * geom.threshold();
    r["t1"] = root_json(t1);
    r["t1"]["eps"] = t1.value * geom.a;
    r["fraction"] = {{"g1_over_g2", ratio}, {"closed_form", closed}, {"difference", ratio - closed}};
    const std::string summary =
        fmt::format("s1 = {:.12g}: lambda(v0) at eps = 0, theta = pi/4 is {}; t1 = {:.12g}: eps = {:.9g}", s1.value,
                    energy(s1.value * geom.threshold(), geom.a), t1.value, t1.value * geom.a);
    return finish(ctx, "roots", std::move(r), summary, kOk);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- lambda-profile

void add_lambda_profile(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "lambda-profile";
  cmd->app = root.add_subcommand("lambda-profile", "Lowest eigenvalue lambda(v) of the reduced 1D problems");
  cmd->app->footer(kUnits);
  struct Opts {
    double a = 1.0;
    double eps = 0.0;
    double theta = kPi / 4.0;
    int n_v = 101;
    int n_mesh = 400;
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  p.add(cmd->app, "eps", o->eps, "Switch offset (absolute length)");
  p.add(cmd->app, "theta", o->theta, "Rotation angle in radians, in (0, pi/3)");
  p.add(cmd->app, "n-v", o->n_v, "Number of v samples in (-v0, v0), odd");
  p.add(cmd->app, "n-mesh", o->n_mesh, "Coarse mesh cells (the fine mesh has twice as many)");
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, o->eps);
    const RotatedFrame frame = derive_frame(geom, o->theta);
    const auto prof = lambda_profile(frame, geom, o->n_v, o->n_mesh);
    const RootResult end = endpoint_ground_state(ImplicitEqParams{geom, frame});
    const double u = geom.threshold();

    io::CsvTable csv({"v", "lambda", "lambda_scaled", "coarse", "fine", "error_estimate", "mesh", "residual"});
    std::vector<double> vs;
    std::vector<double> ls;
    double asym = 0.0;
    bool endpoint_min = true;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const auto& pt = prof[i];
      csv.add(pt.v, pt.eig.value, pt.eig.value / u, pt.eig.coarse, pt.eig.fine, pt.eig.error_estimate, pt.eig.mesh,
              pt.eig.residual);
      vs.push_back(pt.v);
      ls.push_back(pt.eig.value / u);
      asym = std::max(asym, std::abs(pt.eig.value - prof[prof.size() - 1 - i].eig.value));
      if (pt.eig.value < end.value - 10.0 * pt.eig.error_estimate - 1e-9) endpoint_min = false;
    }
    write(ctx, "lambda-profile.csv", csv.str());
    write(ctx, "lambda-profile.dat", io::two_column("v", "lambda/(pi/4a)^2", vs, ls));

    const auto mn = std::min_element(ls.begin(), ls.end());
    json r;
    r["frame"] = {{"theta", frame.theta}, {"q_plus", frame.q_plus}, {"q_minus", frame.q_minus}, {"u0", frame.u0},
                  {"v0", frame.v0}};
    r["endpoint"] = root_json(end);
    r["endpoint"]["scaled"] = end.value / u;
    r["profile_min"] = {{"v", vs[static_cast<std::size_t>(mn - ls.begin())]}, {"scaled", *mn}};
    r["max_asymmetry"] = asym;
    r["even"] = asym <= 1e-9;
    r["endpoint_minimum"] = endpoint_min;
    const bool ok = asym <= 1e-9 && endpoint_min;
    const std::string summary = fmt::format("lambda(v0) = {}; profile of {} points: even {}, minimum at endpoints {}",
                                            energy(end.value, geom.a), prof.size(), asym <= 1e-9, endpoint_min);
    return finish(ctx, "lambda-profile", std::move(r), summary, ok ? kOk : kCheckFailed);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- optimize-theta

json scan_json(const ThetaScanResult& s) {
  return {{"theta_star", s.theta_star},
          {"objective_star", s.objective_star},
          {"grid_points", s.curve.size()},
          {"refinement_evaluations", s.refinement.size()}};
}

void write_scan(const Context& ctx, const std::string& stem, const std::string& label, const ThetaScanResult& s,
                double to_abs) {
  auto table = [&](const std::vector<ScanPoint>& pts) {
    io::CsvTable csv({"theta", label, label + "_abs"});
    for (const auto& q : pts) csv.add(q.theta, q.objective, q.objective * to_abs);
    return csv.str();
  };
  write(ctx, stem + ".csv", table(s.curve));
  write(ctx, stem + "-refinement.csv", table(s.refinement));
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& q : s.curve) {
    t.push_back(q.theta);
    v.push_back(q.objective);
  }
  write(ctx, stem + ".dat", io::two_column("theta", label, t, v));
}

void add_optimize_theta(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "optimize-theta";
  cmd->app = root.add_subcommand("optimize-theta",
                                 "Angles maximizing lambda(v0) at eps = 0 and the eps bound for lambda(v0) > 0");
  cmd->app->footer(kUnits);
  struct Opts {
    double a = 1.0;
    int grid = 128;
    double tol = 1e-4;
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  p.add(cmd->app, "grid", o->grid, "Coarse grid points in (0, pi/3)");
  p.add(cmd->app, "tol", o->tol, "Golden-section bracket width in radians");
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, 0.0);
    const ThetaScanOptions opts{o->grid, o->tol, ExecPolicy::Parallel};
    const ThetaScanResult h = optimal_theta_hardy(geom, opts);
    const ThetaScanResult e = optimal_theta_eps(geom, opts);
    write_scan(ctx, "optimize-theta-hardy", "lambda_scaled", h, geom.threshold());
    write_scan(ctx, "optimize-theta-eps", "eps_over_a", e, geom.a);

    json r;
    r["hardy"] = scan_json(h);
    r["hardy"]["lambda_v0"] = h.objective_star * geom.threshold();
    r["eps"] = scan_json(e);
    r["eps"]["eps_bound"] = e.objective_star * geom.a;
    const std::string summary =
        fmt::format("theta* = {:.6f}: max lambda(v0) = {}; theta* = {:.6f}: eps bound = {:.9g} ({:.9g} a)",
                    h.theta_star, energy(h.objective_star * geom.threshold(), geom.a), e.theta_star,
                    e.objective_star * geom.a, e.objective_star);
    return finish(ctx, "optimize-theta", std::move(r), summary, kOk);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- spectrum-2d

LayoutKind layout_from(const std::string& s) {
  if (s == "switched") return LayoutKind::Switched;
  if (s == "non-switched") return LayoutKind::NonSwitched;
  throw ConfigError(fmt::format("unknown layout '{}'", s));
}

const std::vector<std::string> kTruncations{"dirichlet", "neumann", "transparent"};

void add_spectrum_2d(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "spectrum-2d";
  cmd->app = root.add_subcommand("spectrum-2d", "Lowest 2D eigenvalue relative to the threshold on a mesh ladder");
  cmd->app->footer(kUnits);
  struct Opts {
    double a = 1.0;
    double eps = 0.0;
    Solver2DOpts solver;
    std::vector<std::string> truncations = kTruncations;
    std::string verdict_truncation = "transparent";
    std::string layout = "switched";
    bool dump = false;
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  p.add(cmd->app, "eps", o->eps, "Switch offset (absolute length)");
  add_solver_options(cmd->app, p, o->solver);
  p.add(cmd->app, "truncations", o->truncations, "Conditions at x = +-L")->check(CLI::IsMember(kTruncations));
  p.add(cmd->app, "verdict-truncation", o->verdict_truncation, "Truncation the verdict is taken from")
      ->check(CLI::IsMember(kTruncations));
  p.add(cmd->app, "layout", o->layout, "Boundary layout")->check(CLI::IsMember({"switched", "non-switched"}));
  p.flag(cmd->app, "dump-eigenvectors", o->dump, "Write the finest-rung ground states as plain-text grids");
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, o->eps);
    SolverConfig cfg = solver_config(o->solver.L, o->solver.ladder, o->solver.tol);
    cfg.truncations.clear();
    for (const auto& t : o->truncations) cfg.truncations.push_back(truncation_from_string(t));
    cfg.verdict_truncation = truncation_from_string(o->verdict_truncation);
    cfg.layout = layout_from(o->layout);
    cfg.keep_vectors = o->dump;
    const ThresholdGapReport rep = threshold_gap(geom, cfg);
    const double u = geom.threshold();

    io::CsvTable csv({"truncation", "ny", "dimension", "value", "value_scaled", "threshold_h", "gap", "gap_scaled",
                      "residual", "iterations"});
    json series = json::array();
    for (const auto& s : rep.series) {
      std::vector<double> ny;
      std::vector<double> gaps;
      for (const auto& r : s.rungs) {
        csv.add(to_string(s.trunc), r.ny, r.dimension, r.value, r.value / u, r.threshold_h, r.gap, r.gap / u,
                r.residual, r.iterations);
        ny.push_back(r.ny);
        gaps.push_back(r.gap / u);
      }
      write(ctx, fmt::format("spectrum-2d-{}.dat", to_string(s.trunc)), io::two_column("ny", "gap/(pi/4a)^2", ny, gaps));
      if (o->dump) {
        write(ctx, fmt::format("spectrum-2d-{}-ground-state.txt", to_string(s.trunc)),
              io::grid_text(s.x_nodes, s.y_nodes, s.ground_state));
      }
      series.push_back({{"truncation", to_string(s.trunc)},
                        {"gap_fit", fit_json(s.gap_fit)},
                        {"value_fit", fit_json(s.value_fit)},
                        {"gap_scaled", s.gap_fit.extrapolated / u}});
    }
    write(ctx, "spectrum-2d.csv", csv.str());

    json r;
    r["threshold"] = u;
    r["series"] = std::move(series);
    r["verdict_truncation"] = to_string(rep.verdict_truncation);
    r["gap"] = rep.gap;
    r["gap_scaled"] = rep.gap / u;
    r["error_bar"] = rep.error_bar;
    r["error_bar_scaled"] = rep.error_bar / u;
    r["verdict"] = to_string(rep.verdict);
    const std::string summary = fmt::format("eps = {}: gap = {} +- {:.3g}: {}", geom.eps, energy(rep.gap, geom.a),
                                            rep.error_bar / u, to_string(rep.verdict));
    return finish(ctx, "spectrum-2d", std::move(r), summary,
                  rep.verdict == GapVerdict::Inconclusive ? kInconclusive : kOk);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- critical-eps

void add_critical_eps(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "critical-eps";
  cmd->app = root.add_subcommand("critical-eps", "Certified interval for the critical switch offset");
  cmd->app->footer(kUnits);
  struct Opts {
    double a = 1.0;
    double lo = 0.3;
    double hi = 0.7;
    double resolution = 0.01;
    Solver2DOpts solver;
    std::string verdict_truncation = "transparent";
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  p.add(cmd->app, "lo", o->lo, "Lower bracket end, in units of a");
  p.add(cmd->app, "hi", o->hi, "Upper bracket end, in units of a");
  p.add(cmd->app, "resolution", o->resolution, "Bisection resolution, in units of a");
  add_solver_options(cmd->app, p, o->solver);
  p.add(cmd->app, "verdict-truncation", o->verdict_truncation, "Truncation at x = +-L")
      ->check(CLI::IsMember(kTruncations));
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, 0.0);
    SolverConfig cfg = solver_config(o->solver.L, o->solver.ladder, o->solver.tol);
    cfg.verdict_truncation = truncation_from_string(o->verdict_truncation);
    const double a = geom.a;
    const double u = geom.threshold();
    const CriticalEpsReport rep = critical_eps(geom, cfg, o->lo * a, o->hi * a, o->resolution * a);

    io::CsvTable csv({"eps", "eps_over_a", "gap", "gap_scaled", "error_bar", "error_bar_scaled", "verdict"});
    std::vector<EpsEvaluation> sorted = rep.evaluations;
    for (const auto& e : sorted) {
      csv.add(e.eps, e.eps / a, e.gap, e.gap / u, e.error_bar, e.error_bar / u, to_string(e.verdict));
    }
    write(ctx, "critical-eps.csv", csv.str());
    std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) { return l.eps < r.eps; });
    std::vector<double> xs;
    std::vector<double> gs;
    for (const auto& e : sorted) {
      xs.push_back(e.eps / a);
      gs.push_back(e.gap / u);
    }
    write(ctx, "critical-eps.dat", io::two_column("eps/a", "gap/(pi/4a)^2", xs, gs));

    json r;
    r["lo"] = rep.lo;
    r["hi"] = rep.hi;
    r["lo_over_a"] = rep.lo / a;
    r["hi_over_a"] = rep.hi / a;
    r["estimate"] = rep.estimate;
    r["estimate_over_a"] = rep.estimate / a;
    r["resolution"] = rep.resolution;
    r["evaluations"] = rep.evaluations.size();
    const std::string summary = fmt::format("eps_c in [{:.6g}, {:.6g}] = [{:.6g} a, {:.6g} a], estimate {:.6g} a",
                                            rep.lo, rep.hi, rep.lo / a, rep.hi / a, rep.estimate / a);
    return finish(ctx, "critical-eps", std::move(r), summary, kOk);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- hardy-check

void add_hardy_check(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "hardy-check";
  cmd->app = root.add_subcommand("hardy-check",
                                 "Positivity of the shifted form minus a Hardy weight on the mesh ladder");
  cmd->app->footer(kUnits);
  struct Opts {
    std::string weight = "all";
    double a = 1.0;
    double eps = 0.0;
    double negative_eps = -0.3;
    double strength = 0.0;
    Solver2DOpts solver;
    std::string truncation = "transparent";
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "weight", o->weight, "square: c chi of (-a,a)^2; corollary: c_h/(1+x^2); negative: 3 (pi/4a)^2 "
                                       "chi of (eps,-eps) x (-a,a); zero; all: the first three")
      ->check(CLI::IsMember({"all", "square", "corollary", "negative", "zero"}));
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  auto* eps_opt = p.add(cmd->app, "eps", o->eps,
                        "Switch offset (absolute); also used by --weight negative when given");
  p.add(cmd->app, "negative-eps", o->negative_eps, "Switch offset for the negative weight (absolute, < 0)");
  p.add(cmd->app, "strength", o->strength, "Constant c as an energy; 0 means s1 (pi/4a)^2");
  add_solver_options(cmd->app, p, o->solver);
  p.add(cmd->app, "truncation", o->truncation, "Truncation at x = +-L")->check(CLI::IsMember(kTruncations));
  cmd->run = [o, eps_opt](Context& ctx) {
    std::vector<std::string> names;
    if (o->weight == "all") {
      names = {"square", "corollary", "negative"};
    } else {
      names = {o->weight};
    }
    const SolverConfig cfg = solver_config(o->solver.L, o->solver.ladder, o->solver.tol);
    const Truncation trunc = truncation_from_string(o->truncation);
    const double u = unit(o->a);

    io::CsvTable csv({"weight", "eps", "strength", "ny", "min_eig", "min_eig_scaled", "residual", "iterations"});
    json checks = json::array();
    std::string summary;
    bool failed = false;
    bool inconclusive = false;
    for (const auto& name : names) {
      double eps = o->eps;
      if (name == "negative" && !(o->weight == "negative" && eps_opt->count() > 0)) eps = o->negative_eps;
      const StripGeometry geom = StripGeometry::make(o->a, eps);
      HardyWeight w;
      if (name == "square") w = HardyWeight::indicator_square(geom, o->strength);
      if (name == "corollary") w = HardyWeight::corollary_rho(geom, o->strength);
      if (name == "negative") w = HardyWeight::negative_eps(geom);
      if (name == "zero") w = HardyWeight::zero();
      const HardyReport rep = hardy_form_check(geom, w, cfg, trunc);
      std::vector<double> ny;
      std::vector<double> mins;
      for (const auto& r : rep.rungs) {
        csv.add(name, eps, rep.strength, r.ny, r.min_eig, r.min_eig / u, r.residual, r.iterations);
        ny.push_back(r.ny);
        mins.push_back(r.min_eig / u);
      }
      write(ctx, fmt::format("hardy-check-{}.dat", name), io::two_column("ny", "min_eig/(pi/4a)^2", ny, mins));
      checks.push_back({{"weight", name},
                        {"eps", eps},
                        {"strength", rep.strength},
                        {"strength_scaled", rep.strength / u},
                        {"fit", fit_json(rep.fit)},
                        {"extrapolated_scaled", rep.fit.extrapolated / u},
                        {"trend_ok", rep.trend_ok},
                        {"verdict", to_string(rep.verdict)}});
      failed = failed || rep.verdict == HardyVerdict::Fails;
      inconclusive = inconclusive || rep.verdict == HardyVerdict::Inconclusive;
      if (!summary.empty()) summary += "; ";
      summary += fmt::format("{} (eps = {}): min = {}: {}", name, eps, energy(rep.fit.extrapolated, o->a),
                             to_string(rep.verdict));
    }
    write(ctx, "hardy-check.csv", csv.str());
    json r;
    r["checks"] = std::move(checks);
    return finish(ctx, "hardy-check", std::move(r), summary,
                  failed ? kCheckFailed : (inconclusive ? kInconclusive : kOk));
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- hc-lemma

void add_hc_lemma(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "hc-lemma";
  cmd->app = root.add_subcommand("hc-lemma",
                                 "inf sigma(H_c) >= inf sigma(H_0) for the Neumann operator with potential "
                                 "h chi_(c, c + delta l) on (0, l)");
  cmd->app->set_help_flag("--help", "Print this help message and exit");
  cmd->app->footer("Units: h is an energy and l a length, in any consistent units; eigenvalues share the units of h.");
  struct Opts {
    double h = 1.0;
    double l = 1.0;
    double delta = 0.25;
    int n_c = 64;
    int n_mesh = 400;
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "h", o->h, "Potential height (>= 0)");
  p.add(cmd->app, "l", o->l, "Interval length (> 0)");
  p.add(cmd->app, "delta", o->delta, "Support fraction in (0, 1)");
  p.add(cmd->app, "n-c", o->n_c, "Number of c values in [0, l - delta l]");
  p.add(cmd->app, "n-mesh", o->n_mesh, "Coarse mesh cells");
  cmd->run = [o](Context& ctx) {
    const LemmaReport rep = verify_lemma(o->h, o->l, o->delta, o->n_c, o->n_mesh);
    io::CsvTable csv({"c", "value", "coarse", "fine", "error_estimate", "tolerance", "violation"});
    std::vector<double> cs;
    std::vector<double> vs;
    for (const auto& pt : rep.curve) {
      csv.add(pt.c, pt.eig.value, pt.eig.coarse, pt.eig.fine, pt.eig.error_estimate, pt.tolerance, pt.violation);
      cs.push_back(pt.c);
      vs.push_back(pt.eig.value);
    }
    write(ctx, "hc-lemma.csv", csv.str());
    write(ctx, "hc-lemma.dat", io::two_column("c", "inf_sigma", cs, vs));
    json r;
    r["reference"] = rep.reference;
    r["argmin_c"] = rep.argmin_c;
    r["violations"] = rep.violations;
    const std::string summary = fmt::format("inf sigma(H_0) = {:.12g}; {} values of c, {} violations, minimum at c = {}",
                                            rep.reference, rep.curve.size(), rep.violations.size(), rep.argmin_c);
    return finish(ctx, "hc-lemma", std::move(r), summary, rep.violations.empty() ? kOk : kCheckFailed);
  };
  cmds.push_back(std::move(cmd));
}

// ---------------------------------------------------------------- hardy-failure

void add_hardy_failure(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds) {
  auto cmd = std::make_unique<Command>();
  cmd->name = "hardy-failure";
  cmd->app = root.add_subcommand("hardy-failure",
                                 "Rayleigh quotients of the shifted form over the weight along dyadic cutoffs");
  cmd->app->footer(kUnits);
  struct Opts {
    double a = 1.0;
    double eps = 0.0;
    std::string weight = "square";
    std::string layout = "both";
    int k_min = 1;
    int k_max = 8;
    int panels = 8;
  };
  auto o = std::make_shared<Opts>();
  auto& p = cmd->params;
  p.add(cmd->app, "a", o->a, "Half-width of the strip");
  p.add(cmd->app, "eps", o->eps, "Switch offset for the switched layout (absolute, >= 0)");
  p.add(cmd->app, "weight", o->weight, "Hardy weight")->check(CLI::IsMember({"square", "corollary"}));
  p.add(cmd->app, "layout", o->layout, "Boundary layout")
      ->check(CLI::IsMember({"both", "switched", "non-switched"}));
  p.add(cmd->app, "k-min", o->k_min, "First dyadic cutoff exponent");
  p.add(cmd->app, "k-max", o->k_max, "Last dyadic cutoff exponent");
  p.add(cmd->app, "panels", o->panels, "Quadrature panels per unit length");
  cmd->run = [o](Context& ctx) {
    const StripGeometry geom = StripGeometry::make(o->a, o->eps);
    const HardyWeight w = o->weight == "square" ? HardyWeight::indicator_square(geom)
                                                : HardyWeight::corollary_rho(geom);
    std::vector<std::string> layouts;
    if (o->layout == "both") {
      layouts = {"non-switched", "switched"};
    } else {
      layouts = {o->layout};
    }
    const double u = geom.threshold();
    io::CsvTable csv({"layout", "k", "numerator", "denominator", "quotient", "quotient_scaled"});
    json reports = json::array();
    std::string summary;
    for (const auto& name : layouts) {
      const FailureDemoReport rep = hardy_failure_demo(geom, layout_from(name), w, o->k_min, o->k_max, o->panels);
      std::vector<double> ks;
      std::vector<double> qs;
      for (const auto& pt : rep.sequence) {
        csv.add(name, pt.k, pt.numerator, pt.denominator, pt.quotient, pt.quotient / u);
        ks.push_back(pt.k);
        qs.push_back(pt.quotient);
      }
      write(ctx, fmt::format("hardy-failure-{}.dat", name), io::two_column("k", "quotient", ks, qs));
      reports.push_back(
          {{"layout", name}, {"decreasing", rep.decreasing}, {"ratio", rep.ratio}, {"floor", rep.floor}});
      if (!summary.empty()) summary += "; ";
      summary += fmt::format("{}: decreasing {}, last/first = {:.4g}, floor = {:.6g}", name, rep.decreasing, rep.ratio,
                             rep.floor);
    }
    write(ctx, "hardy-failure.csv", csv.str());
    json r;
    r["weight_strength"] = w.strength;
    r["layouts"] = std::move(reports);
    return finish(ctx, "hardy-failure", std::move(r), summary, kOk);
  };
  cmds.push_back(std::move(cmd));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral toolkit for the Dirichlet-Neumann strip with a boundary switch", "dnstrip"};
  app.footer(kUnits);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI run configuration; subcommand options go in a [subcommand] section");
  int threads = 0;
  std::string out_dir = "dnstrip-out";
  bool print_json = false;
  app.add_option("--threads", threads, "OpenMP threads, 0 for all available cores")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory for CSV, JSON and plot data")->capture_default_str();
  app.add_flag("--json", print_json, "Print the JSON report on stdout instead of the summary");

  std::vector<std::unique_ptr<Command>> cmds;
  add_roots(app, cmds);
  add_lambda_profile(app, cmds);
  add_optimize_theta(app, cmds);
  add_spectrum_2d(app, cmds);
  add_critical_eps(app, cmds);
  add_hardy_check(app, cmds);
  add_hc_lemma(app, cmds);
  add_hardy_failure(app, cmds);

  std::vector<std::string> argv{"dnstrip"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> cargs;
  for (const auto& s : argv) cargs.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (threads < 0) throw ConfigError("--threads must be >= 0");
    set_thread_count(threads);
    for (auto& c : cmds) {
      if (!c->app->parsed()) continue;
      Context ctx;
      ctx.out_dir = out_dir;
      ctx.print_json = print_json;
      ctx.out = &out;
      ctx.config["threads"] = threads;
      c->params.echo_into(ctx.config);
      return c->run(ctx);
    }
    throw ConfigError("no subcommand");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const NoRootError& e) {
    err << "no root: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace dnstrip::cli
