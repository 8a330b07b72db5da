#include "dnstrip/transcendental.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip {

namespace {

constexpr double kPoleTol = 1e-10;

struct Bracket {
  double lo, hi, f_lo, f_hi;
};

// First sub-interval of a uniform scan over [lo, hi] where f changes sign or
// hits zero. scale receives max |f| over the scanned points.
std::optional<Bracket> first_sign_change(const std::function<double(double)>& f, double lo, double hi, int steps,
                                         double* scale) {
  double x_prev = lo;
  double f_prev = f(lo);
  *scale = std::abs(f_prev);
  for (int i = 1; i <= steps; ++i) {
    const double x = (i == steps) ? hi : lo + (hi - lo) * i / steps;
    const double fx = f(x);
    *scale = std::max(*scale, std::abs(fx));
    if (f_prev == 0.0) return Bracket{x_prev, x_prev, 0.0, 0.0};
    if (std::signbit(f_prev) != std::signbit(fx) || fx == 0.0) return Bracket{x_prev, x, f_prev, fx};
    x_prev = x;
    f_prev = fx;
  }
  return std::nullopt;
}

RootResult refine(const std::function<double(double)>& f, const Bracket& b, double abs_tol, int scan_iters) {
  RootResult r;
  r.iterations = scan_iters;
  if (b.f_lo == 0.0 || b.f_hi == 0.0) {
    r.value = b.f_lo == 0.0 ? b.lo : b.hi;
    r.bracket_lo = b.lo;
    r.bracket_hi = b.hi;
    r.residual = 0.0;
    return r;
  }
  std::uintmax_t max_iter = 200;
  auto done = [abs_tol](double x0, double x1) { return std::abs(x1 - x0) <= abs_tol; };
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, b.lo, b.hi, b.f_lo, b.f_hi, done, max_iter);
  if (max_iter >= 200) throw ConvergenceError("bracketed root refinement did not converge");
  // Report the endpoint with the smaller residual; both lie in the bracket.
  const double f_lo = std::abs(f(lo));
  const double f_hi = std::abs(f(hi));
  r.value = f_lo <= f_hi ? lo : hi;
  r.residual = std::min(f_lo, f_hi);
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.iterations += static_cast<int>(max_iter);
  return r;
}

}  // namespace

double ImplicitEqParams::flank_length() const { return 2.0 * frame.v0 / std::tan(frame.theta); }

double g1(double lambda, const ImplicitEqParams& p) {
  if (lambda > p.frame.q_plus) throw DomainError(fmt::format("g1: lambda = {} exceeds q+ = {}", lambda, p.frame.q_plus));
  const double kappa = std::sqrt(p.frame.q_plus - lambda);
  return kappa * std::tanh(2.0 * p.frame.u0 * kappa);
}

double g2(double lambda, const ImplicitEqParams& p) {
  if (lambda < -p.frame.q_minus) {
    throw DomainError(fmt::format("g2: lambda = {} below -q- = {}", lambda, -p.frame.q_minus));
  }
  const double k = std::sqrt(p.frame.q_minus + lambda);
  const double arg = p.flank_length() * k;
  if (std::abs(std::remainder(arg - kPi / 2.0, kPi)) < kPoleTol) {
    throw PoleError(fmt::format("g2: tan argument {} at a pole", arg));
  }
  return k * std::tan(arg);
}

double matching_function(double lambda, const ImplicitEqParams& p) {
  const double k = std::sqrt(p.frame.q_minus + lambda);
  const double arg = p.flank_length() * k;
  return g1(lambda, p) * std::cos(arg) - k * std::sin(arg);
}

RootResult lambda_v0(const ImplicitEqParams& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("lambda_v0: tolerance must be positive");
  const double unit = p.geom.threshold();
  const double h0 = matching_function(0.0, p);
  if (h0 < 0.0) throw NoRootError("lambda(v0) <= 0: matching function negative at lambda = 0");
  const double flank = p.flank_length();
  auto h = [&p](double lambda) { return matching_function(lambda, p); };

  double lo = 0.0;
  const double hi = p.frame.q_plus;
  int scanned = 0;
  // Uniform scan for the first sign change; a zero that sits on a cosine
  // zero of the regularized form is spurious and the scan resumes past it.
  while (lo < hi) {
    double scale = 0.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(kScanSteps * (hi - lo) / hi)));
    const auto br = first_sign_change(h, lo, hi, steps, &scale);
    scanned += steps;
    if (!br) break;
    RootResult r = refine(h, *br, tol * unit, scanned);
    if (std::abs(std::cos(flank * std::sqrt(p.frame.q_minus + r.value))) > 1e-8) return r;
    lo = std::max(br->hi, std::nextafter(br->lo, hi));
  }
  throw NoRootError("lambda_v0: no sign change of the matching function on [0, q+]");
}

RootResult endpoint_ground_state(const ImplicitEqParams& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("endpoint_ground_state: tolerance must be positive");
  auto h = [&p](double lambda) { return matching_function(lambda, p); };
  double scale = 0.0;
  // 4x the usual resolution: the interval is longer than [0, q+].
  const auto br = first_sign_change(h, -p.frame.q_minus, p.frame.q_plus, 4 * kScanSteps, &scale);
  if (!br) throw NoRootError("endpoint_ground_state: no sign change on [-q-, q+]");
  return refine(h, *br, tol * p.geom.threshold(), 4 * kScanSteps);
}

RootResult solve_s1(double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_s1: tolerance must be positive");
  const double c = kPi / (2.0 * std::sqrt(2.0));
  auto f = [c](double s) {
    const double left = std::sqrt(1.0 - s);
    const double right = std::sqrt(0.5 + s);
    return left * std::tanh(c * left) * std::cos(c * right) - right * std::sin(c * right);
  };
  double scale = 0.0;
  const auto br = first_sign_change(f, 0.0, 1.0, kScanSteps, &scale);
  if (!br) throw ConvergenceError("solve_s1: no sign change on (0, 1)");
  return refine(f, *br, tol, kScanSteps);
}

RootResult eps_bound(double theta, double tol) {
  if (!(tol > 0.0)) throw DomainError("eps_bound: tolerance must be positive");
  const double a = 1.0;
  const double eps_max = a * std::tan(theta);
  auto h = [theta, a](double eps) {
    return matching_function(0.0, ImplicitEqParams::make(StripGeometry{a, eps}, theta));
  };
  if (h(0.0) <= 0.0) throw NoRootError(fmt::format("eps_bound: lambda(v0) <= 0 already at eps = 0 (theta = {})", theta));
  double scale = 0.0;
  // The upper end is open: u0 vanishes at eps = a tan(theta).
  const auto br = first_sign_change(h, 0.0, eps_max * (1.0 - 1e-12), kScanSteps, &scale);
  if (!br) throw NoRootError(fmt::format("eps_bound: no sign change below a tan(theta) (theta = {})", theta));
  return refine(h, *br, tol * a, kScanSteps);
}

RootResult solve_t1(double tol) { return eps_bound(kPi / 4.0, tol); }

}  // namespace dnstrip
