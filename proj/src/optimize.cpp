#include "dnstrip/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "dnstrip/errors.hpp"
#include "dnstrip/transcendental.hpp"

namespace dnstrip {

ScanPoint golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                             std::vector<ScanPoint>* history) {
  if (!(lo < hi) || !(tol > 0.0)) throw DomainError("golden_section_max: need lo < hi and tol > 0");
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double x) {
    const double v = f(x);
    if (history) history->push_back({x, v});
    return v;
  };
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = eval(d);
    }
  }
  return fc >= fd ? ScanPoint{c, fc} : ScanPoint{d, fd};
}

ThetaScanResult maximize_over_theta(const std::function<double(double)>& objective, const ThetaScanOptions& opts) {
  if (opts.grid < 3) throw DomainError("maximize_over_theta: need at least three grid points");
  const double top = kPi / 3.0;
  const double step = top / (opts.grid + 1);
  ThetaScanResult res;
  res.curve = map_indices<ScanPoint>(opts.policy, static_cast<std::size_t>(opts.grid), [&](std::size_t i) {
    const double t = step * static_cast<double>(i + 1);
    return ScanPoint{t, objective(t)};
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.curve.size(); ++i) {
    if (res.curve[i].objective > res.curve[best].objective) best = i;
  }
  const double lo = best == 0 ? step * 0.5 : res.curve[best - 1].theta;
  const double hi = best + 1 == res.curve.size() ? top - step * 0.5 : res.curve[best + 1].theta;
  const ScanPoint p = golden_section_max(objective, lo, hi, opts.tol, &res.refinement);
  if (p.objective >= res.curve[best].objective) {
    res.theta_star = p.theta;
    res.objective_star = p.objective;
  } else {
    res.theta_star = res.curve[best].theta;
    res.objective_star = res.curve[best].objective;
  }
  return res;
}

double hardy_objective(double a, double theta, double root_tol) {
  const StripGeometry g{a, 0.0};
  try {
    return lambda_v0(ImplicitEqParams::make(g, theta), root_tol).value / g.threshold();
  } catch (const NoRootError&) {
    return 0.0;
  }
}

double eps_objective(double theta, double root_tol) {
  try {
    return eps_bound(theta, root_tol).value;
  } catch (const NoRootError&) {
    return 0.0;
  }
}

ThetaScanResult optimal_theta_hardy(const StripGeometry& geom, const ThetaScanOptions& opts) {
  if (geom.eps != 0.0) throw DomainError("optimal_theta_hardy: requires eps = 0");
  const double a = geom.a;
  return maximize_over_theta([a](double t) { return hardy_objective(a, t); }, opts);
}

ThetaScanResult optimal_theta_eps(const StripGeometry& /*geom*/, const ThetaScanOptions& opts) {
  return maximize_over_theta([](double t) { return eps_objective(t); }, opts);
}

}  // namespace dnstrip
