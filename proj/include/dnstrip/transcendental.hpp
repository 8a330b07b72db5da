#pragma once

// Matching condition for the lowest Neumann eigenvalue of the reduced step
// potential at v = v0, and the scalar constants derived from it.
//
// At v = v0 the reduced problem lives on [-u0, u0 + L] with L = 2 v0 cot(theta):
// height q+ on (-u0, u0), depth -q- on (u0, u0 + L), Neumann at both ends.
// Matching logarithmic derivatives at u0 gives g1(lambda) = g2(lambda) with
//
//   g1 = sqrt(q+ - lambda) tanh(2 u0 sqrt(q+ - lambda))
//   g2 = sqrt(q- + lambda) tan(L sqrt(q- + lambda)).
//
// All root finding works on the pole-free form obtained by multiplying
// through by cos(L sqrt(q- + lambda)).

#include "dnstrip/geometry.hpp"

namespace dnstrip {

struct ImplicitEqParams {
  StripGeometry geom;
  RotatedFrame frame;

  static ImplicitEqParams make(const StripGeometry& geom, double theta) { return {geom, derive_frame(geom, theta)}; }

  // Length 2 v0 cot(theta) of the flank at v = v0.
  [[nodiscard]] double flank_length() const;
};

struct RootResult {
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |regularized function| at value
  int iterations = 0;     // scan steps plus refinement steps
};

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr int kScanSteps = 256;

// Throws DomainError for lambda > q+.
double g1(double lambda, const ImplicitEqParams& p);

// Throws DomainError for lambda < -q-, PoleError within 1e-10 of a tan pole.
double g2(double lambda, const ImplicitEqParams& p);

// g1 cos(L k) - k sin(L k), k = sqrt(q- + lambda). Defined on [-q-, q+].
double matching_function(double lambda, const ImplicitEqParams& p);

// Lowest eigenvalue lambda(v0) of the reduced endpoint problem: the smallest
// root of matching_function on [0, q+]. tol is relative to (pi/4a)^2.
// Throws NoRootError when lambda(v0) <= 0 (matching function non-positive at 0).
RootResult lambda_v0(const ImplicitEqParams& p, double tol = kDefaultRootTol);

// Ground state of the reduced endpoint problem whatever its sign: the first
// root of matching_function on [-q-, q+]. Agrees with lambda_v0 whenever
// lambda(v0) > 0; for lambda(v0) <= 0 it is the only root-based route.
RootResult endpoint_ground_state(const ImplicitEqParams& p, double tol = kDefaultRootTol);

// Smallest s in (0, 1) with
//   sqrt(1-s) tanh(pi sqrt(1-s) / (2 sqrt 2)) = sqrt(1/2+s) tan(pi sqrt(1/2+s) / (2 sqrt 2)),
// solved directly in this dimensionless form.
RootResult solve_s1(double tol = kDefaultRootTol);

// Smallest eps in [0, a tan(theta)) at which lambda(v0) reaches zero, i.e. the
// first root of matching_function(0; eps, theta). value is in units of a.
// Throws NoRootError if lambda(v0) <= 0 already at eps = 0.
RootResult eps_bound(double theta, double tol = kDefaultRootTol);

// eps_bound at theta = pi/4.
RootResult solve_t1(double tol = kDefaultRootTol);

}  // namespace dnstrip
