#include "dnstrip/hardy_quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

// Composite rule on [lo, hi] split at the sorted breakpoints, each segment
// into ceil(length * per_unit) equal panels (at least min_panels).
template <class F>
double integrate_1d(F&& f, std::vector<double> breaks, double per_unit, int min_panels) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s];
    const double hi = breaks[s + 1];
    const int n = std::max(min_panels, static_cast<int>(std::ceil((hi - lo) * per_unit)));
    for (int p = 0; p < n; ++p) {
      const double a = lo + (hi - lo) * p / n;
      const double b = p + 1 == n ? hi : lo + (hi - lo) * (p + 1) / n;
      total += Rule::integrate(f, a, b);
    }
  }
  return total;
}

std::vector<double> clip(std::vector<double> pts, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : pts) {
    if (p > lo && p < hi) out.push_back(p);
  }
  return out;
}

double cutoff(double t) {
  const double s = std::abs(t);
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double c = std::cos(0.5 * kPi * (s - 1.0));
  return c * c;
}

double cutoff_prime(double t) {
  const double s = std::abs(t);
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double d = -0.5 * kPi * std::sin(kPi * (s - 1.0));
  return t > 0.0 ? d : -d;
}

}  // namespace

FailureDemoReport hardy_failure_demo(const StripGeometry& geom, LayoutKind layout, const HardyWeight& weight,
                                     int k_min, int k_max, int panels) {
  if (layout != LayoutKind::NonSwitched && layout != LayoutKind::Switched) {
    throw DomainError("hardy_failure_demo: layout must be switched or non-switched");
  }
  if (layout == LayoutKind::Switched && geom.eps < 0.0) {
    throw DomainError("hardy_failure_demo: the switched test functions need eps >= 0");
  }
  if (k_min < 0 || k_max < k_min) throw DomainError("hardy_failure_demo: need 0 <= k_min <= k_max");
  const double a = geom.a;
  const double lam = geom.threshold();
  const bool notch = layout == LayoutKind::Switched;
  const double kq = kPi / (4.0 * a);

  FailureDemoReport rep;
  rep.layout = layout;
  for (int k = k_min; k <= k_max; ++k) {
    const double scale = std::ldexp(a, k);
    auto f = [&](double x) {
      const double m = notch ? std::min(std::abs(x) / a, 1.0) : 1.0;
      return cutoff(x / scale) * m;
    };
    auto fp = [&](double x) {
      const double m = notch ? std::min(std::abs(x) / a, 1.0) : 1.0;
      double dm = 0.0;
      if (notch && std::abs(x) < a) dm = (x > 0.0 ? 1.0 : -1.0) / a;
      return cutoff_prime(x / scale) / scale * m + cutoff(x / scale) * dm;
    };
    // Transverse factor and its y-derivative; reflected for x < 0 when switched.
    auto phi = [&](double x, double y) { return std::cos(kq * ((notch && x < 0.0 ? -y : y) + a)); };
    auto phi_y = [&](double x, double y) {
      const double s = notch && x < 0.0 ? -1.0 : 1.0;
      return -s * kq * std::sin(kq * (s * y + a));
    };

    // Dyadic segments beyond a: every feature of f and of the weights there
    // varies on the scale of |x|, so each segment gets the same panel count.
    std::vector<double> xb{0.0, geom.eps, -geom.eps};
    for (double d = a; d <= 2.0 * scale; d *= 2.0) {
      xb.push_back(d);
      xb.push_back(-d);
    }
    for (double b : weight.breaks(a)) xb.push_back(b);
    xb = clip(xb, -2.0 * scale, 2.0 * scale);
    const std::vector<double> yb{-a, 0.0, a};
    const double per_unit_y = panels / a;

    auto inner = [&](auto&& g) {
      return [&, g](double x) {
        return integrate_1d([&](double y) { return g(x, y); }, yb, per_unit_y, 1);
      };
    };
    const double num = integrate_1d(inner([&](double x, double y) {
                                      const double fx = f(x);
                                      const double dx = fp(x) * phi(x, y);
                                      const double dy = fx * phi_y(x, y);
                                      const double v = fx * phi(x, y);
                                      return dx * dx + dy * dy - lam * v * v;
                                    }),
                                    xb, 0.0, panels);
    const double den = integrate_1d(inner([&](double x, double y) {
                                      const double v = f(x) * phi(x, y);
                                      return weight(x, y, a) * v * v;
                                    }),
                                    xb, 0.0, panels);
    rep.sequence.push_back({k, num, den, num / den});
  }
  rep.decreasing = true;
  rep.floor = rep.sequence.front().quotient;
  for (std::size_t i = 1; i < rep.sequence.size(); ++i) {
    if (!(rep.sequence[i].quotient < rep.sequence[i - 1].quotient)) rep.decreasing = false;
    rep.floor = std::min(rep.floor, rep.sequence[i].quotient);
  }
  rep.ratio = rep.sequence.back().quotient / rep.sequence.front().quotient;
  return rep;
}

std::vector<TestFunction2D> default_strip_functions(double a) {
  const double a2 = a * a;
  const double q = kPi / (4.0 * a);
  auto g = [](double x, double c, double s) { return std::exp(-(x - c) * (x - c) / s); };
  auto gp = [](double x, double c, double s) { return -2.0 * (x - c) / s * std::exp(-(x - c) * (x - c) / s); };
  std::vector<TestFunction2D> fs;
  fs.push_back({"exp(-x^2)(a^2-y^2)", [=](double x, double y) { return g(x, 0, 1) * (a2 - y * y); },
                [=](double x, double y) { return gp(x, 0, 1) * (a2 - y * y); }});
  fs.push_back({"exp(-x^2)", [=](double x, double) { return g(x, 0, 1); },
                [=](double x, double) { return gp(x, 0, 1); }});
  fs.push_back({"x exp(-x^2) cos(pi y/4a)", [=](double x, double y) { return x * g(x, 0, 1) * std::cos(q * y); },
                [=](double x, double y) { return (g(x, 0, 1) + x * gp(x, 0, 1)) * std::cos(q * y); }});
  fs.push_back({"exp(-(x-1)^2)(1+y/a)", [=](double x, double y) { return g(x, 1, 1) * (1 + y / a); },
                [=](double x, double y) { return gp(x, 1, 1) * (1 + y / a); }});
  fs.push_back({"exp(-x^2/4) sin(pi y/a)", [=](double x, double y) { return g(x, 0, 4) * std::sin(kPi * y / a); },
                [=](double x, double y) { return gp(x, 0, 4) * std::sin(kPi * y / a); }});
  fs.push_back({"(1+x) exp(-x^2) y^2", [=](double x, double y) { return (1 + x) * g(x, 0, 1) * y * y; },
                [=](double x, double y) { return (g(x, 0, 1) + (1 + x) * gp(x, 0, 1)) * y * y; }});
  fs.push_back({"exp(-2x^2) cos(y)", [=](double x, double y) { return g(x, 0, 0.5) * std::cos(y); },
                [=](double x, double y) { return gp(x, 0, 0.5) * std::cos(y); }});
  fs.push_back({"sech(x)", [](double x, double) { return 1.0 / std::cosh(x); },
                [](double x, double) { return -std::tanh(x) / std::cosh(x); }});
  fs.push_back({"x^2 exp(-x^2/2)", [=](double x, double) { return x * x * g(x, 0, 2); },
                [=](double x, double) { return 2 * x * g(x, 0, 2) + x * x * gp(x, 0, 2); }});
  fs.push_back({"exp(-(x+2)^2)(a-y)", [=](double x, double y) { return g(x, -2, 1) * (a - y); },
                [=](double x, double y) { return gp(x, -2, 1) * (a - y); }});
  return fs;
}

std::vector<TestFunction1D> default_line_functions() {
  auto e = [](double x, double s) { return std::exp(-x * x / s); };
  std::vector<TestFunction1D> fs;
  fs.push_back({"x exp(-x^2)", [=](double x) { return x * e(x, 1); },
                [=](double x) { return (1 - 2 * x * x) * e(x, 1); }});
  fs.push_back({"x exp(-x^2/2)", [=](double x) { return x * e(x, 2); },
                [=](double x) { return (1 - x * x) * e(x, 2); }});
  fs.push_back({"x^2 exp(-x^2)", [=](double x) { return x * x * e(x, 1); },
                [=](double x) { return (2 * x - 2 * x * x * x) * e(x, 1); }});
  fs.push_back({"sin(x) exp(-x^2)", [=](double x) { return std::sin(x) * e(x, 1); },
                [=](double x) { return (std::cos(x) - 2 * x * std::sin(x)) * e(x, 1); }});
  fs.push_back({"x/(1+x^2)^2", [](double x) { return x / ((1 + x * x) * (1 + x * x)); },
                [](double x) { return (1 - 3 * x * x) / std::pow(1 + x * x, 3); }});
  fs.push_back({"x(1+x) exp(-x^2)", [=](double x) { return x * (1 + x) * e(x, 1); },
                [=](double x) { return (1 + 2 * x - 2 * x * x - 2 * x * x * x) * e(x, 1); }});
  fs.push_back({"x exp(-(x-1)^2)", [](double x) { return x * std::exp(-(x - 1) * (x - 1)); },
                [](double x) { return (1 - 2 * x * (x - 1)) * std::exp(-(x - 1) * (x - 1)); }});
  fs.push_back({"tanh(x) exp(-x^2)", [=](double x) { return std::tanh(x) * e(x, 1); },
                [=](double x) {
                  const double t = std::tanh(x);
                  return ((1 - t * t) - 2 * x * t) * e(x, 1);
                }});
  fs.push_back({"x^3 exp(-x^2)", [=](double x) { return x * x * x * e(x, 1); },
                [=](double x) { return (3 * x * x - 2 * x * x * x * x) * e(x, 1); }});
  fs.push_back({"(1-exp(-x^2)) exp(-x^2/2)", [=](double x) { return (1 - e(x, 1)) * e(x, 2); },
                [=](double x) { return 2 * x * e(x, 1) * e(x, 2) - x * (1 - e(x, 1)) * e(x, 2); }});
  return fs;
}

LemmaQuadratureReport lemma_hardy_quadrature_check(const StripGeometry& geom,
                                                   const std::vector<TestFunction2D>& strip_functions,
                                                   const std::vector<TestFunction1D>& line_functions, double j_lo,
                                                   double j_hi, double window, int panels) {
  if (!(j_lo < j_hi)) throw DomainError("lemma quadrature: J must be a non-empty interval");
  if (!(window > std::max(std::abs(j_lo), std::abs(j_hi)))) throw DomainError("lemma quadrature: window must contain J");
  const double a = geom.a;
  const double x0 = 0.5 * (j_lo + j_hi);
  const double jl = j_hi - j_lo;
  const double coeff = 2.0 + 64.0 / (jl * jl);

  LemmaQuadratureReport rep;
  rep.j_lo = j_lo;
  rep.j_hi = j_hi;
  auto ratio_of = [](double lhs, double rhs) { return rhs == 0.0 ? (lhs == 0.0 ? 0.0 : HUGE_VAL) : lhs / rhs; };

  for (const auto& tf : strip_functions) {
    QuadratureRatio r;
    r.name = tf.name;
    for (int level = 0; level < 2; ++level) {
      const double per_unit = panels << level;
      const std::vector<double> yb{-a, a};
      const std::vector<double> xb = clip({j_lo, j_hi, x0, 0.0}, -window, window);
      auto in_y = [&](auto&& g) {
        return [&, g](double x) {
          return integrate_1d([&](double y) { return g(x, y); }, yb, per_unit / a, 2);
        };
      };
      const double lhs = integrate_1d(in_y([&](double x, double y) {
                                         const double v = tf.f(x, y);
                                         return v * v / (1.0 + (x - x0) * (x - x0));
                                       }),
                                       xb, per_unit, 1);
      const double kin = integrate_1d(in_y([&](double x, double y) {
                                         const double d = tf.dfdx(x, y);
                                         return d * d;
                                       }),
                                       xb, per_unit, 1);
      const double loc = integrate_1d(in_y([&](double x, double y) {
                                         const double v = tf.f(x, y);
                                         return v * v;
                                       }),
                                       {j_lo, j_hi}, per_unit, 1);
      const double rhs = 16.0 * kin + coeff * loc;
      if (level == 0) {
        r.lhs = lhs;
        r.rhs = rhs;
        r.ratio = ratio_of(lhs, rhs);
      } else {
        r.refined = ratio_of(lhs, rhs);
      }
    }
    rep.strip.push_back(r);
  }

  for (const auto& tf : line_functions) {
    QuadratureRatio r;
    r.name = tf.name;
    for (int level = 0; level < 2; ++level) {
      const double per_unit = panels << level;
      const std::vector<double> xb{-window, 0.0, window};
      const double lhs = integrate_1d(
          [&](double x) {
            const double v = tf.v(x) / x;
            return v * v;
          },
          xb, per_unit, 1);
      const double rhs = 4.0 * integrate_1d(
                                   [&](double x) {
                                     const double d = tf.dv(x);
                                     return d * d;
                                   },
                                   xb, per_unit, 1);
      (level == 0 ? r.ratio : r.refined) = ratio_of(lhs, rhs);
      if (level == 0) {
        r.lhs = lhs;
        r.rhs = rhs;
      }
    }
    rep.line.push_back(r);
  }

  rep.holds = true;
  for (const auto* group : {&rep.strip, &rep.line}) {
    for (const auto& r : *group) {
      rep.max_ratio = std::max(rep.max_ratio, r.ratio);
      rep.max_refinement_change = std::max(rep.max_refinement_change, std::abs(r.refined - r.ratio));
      if (!(r.ratio < 1.0)) rep.holds = false;
    }
  }
  rep.stable = rep.max_refinement_change <= 1e-4;
  return rep;
}

}  // namespace dnstrip
