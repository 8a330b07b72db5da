#pragma once

// Quadrature checks on explicit test functions: the Rayleigh-quotient
// sequence showing that no Hardy weight survives without the boundary switch,
// and the weighted Hardy inequality on a strip together with the classical
// one-dimensional Hardy inequality. Integrals use composite Gauss-Legendre
// rules with nodes at every kink of the integrand.

#include <functional>
#include <string>
#include <vector>

#include "dnstrip/geometry.hpp"
#include "dnstrip/laplacian2d.hpp"

namespace dnstrip {

struct FailurePoint {
  int k = 0;
  double numerator = 0.0;    // Q[psi_k] - (pi/4a)^2 ||psi_k||^2
  double denominator = 0.0;  // int w |psi_k|^2
  double quotient = 0.0;
};

struct FailureDemoReport {
  LayoutKind layout = LayoutKind::NonSwitched;
  std::vector<FailurePoint> sequence;
  bool decreasing = false;  // strictly, along the whole sequence
  double ratio = 0.0;       // last / first quotient
  double floor = 0.0;       // smallest quotient
};

// psi_k(x, y) = chi(x / (2^k a)) m(x) phi(y), chi = 1 on [-1, 1] with a cos^2
// ramp to 0 at +-2, phi = cos(pi (y + a) / 4a) the transverse ground state.
// NonSwitched: m = 1. Switched (eps >= 0): m = min(|x| / a, 1) and the
// transverse factor is reflected, phi(-y), for x < 0, so psi_k vanishes on
// the Dirichlet part on either side of the switch.
// Quadrature: Gauss-Legendre on panels; panels per segment in x, where the
// x-segments are cut at 0, +-eps and +-2^j a, and per length a in y.
FailureDemoReport hardy_failure_demo(const StripGeometry& geom, LayoutKind layout, const HardyWeight& weight,
                                     int k_min = 1, int k_max = 8, int panels = 8);

struct TestFunction2D {
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double, double)> dfdx;
};

struct TestFunction1D {
  std::string name;
  std::function<double(double)> v;  // v(0) = 0
  std::function<double(double)> dv;
};

// Ten analytic functions on R x (-a, a) and ten on R vanishing at 0, with
// Gaussian or faster-than-x^-3 decay.
std::vector<TestFunction2D> default_strip_functions(double a);
std::vector<TestFunction1D> default_line_functions();

struct QuadratureRatio {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;       // lhs / rhs, 0 when both vanish
  double refined = 0.0;     // ratio with doubled panels
};

struct LemmaQuadratureReport {
  double j_lo = 0.0, j_hi = 0.0;
  std::vector<QuadratureRatio> strip;  // int w^-2 |psi|^2 <= 16 int |d1 psi|^2 + (2 + 64/|J|^2) int_J |psi|^2
  std::vector<QuadratureRatio> line;   // int x^-2 |v|^2 <= 4 int |v'|^2
  double max_ratio = 0.0;
  double max_refinement_change = 0.0;
  bool stable = false;  // max_refinement_change <= 1e-4
  bool holds = false;   // every ratio < 1
};

// x is integrated over [-window, window]; panels is the count per unit length
// (doubled for the refinement check).
LemmaQuadratureReport lemma_hardy_quadrature_check(const StripGeometry& geom,
                                                   const std::vector<TestFunction2D>& strip_functions,
                                                   const std::vector<TestFunction1D>& line_functions, double j_lo,
                                                   double j_hi, double window = 40.0, int panels = 2);

}  // namespace dnstrip
