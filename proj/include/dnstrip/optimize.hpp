#pragma once

// Maximization over the rotation angle theta in (0, pi/3): a coarse grid to
// locate the best bracket, then golden-section refinement inside it.

#include <functional>
#include <vector>

#include "dnstrip/geometry.hpp"
#include "dnstrip/parallel.hpp"

namespace dnstrip {

struct ScanPoint {
  double theta = 0.0;
  double objective = 0.0;
};

struct ThetaScanResult {
  double theta_star = 0.0;
  double objective_star = 0.0;
  std::vector<ScanPoint> curve;       // coarse grid
  std::vector<ScanPoint> refinement;  // golden-section evaluations in order
};

struct ThetaScanOptions {
  int grid = 128;  // interior points theta_i = (i + 1) (pi/3) / (grid + 1)
  double tol = 1e-4;
  ExecPolicy policy = ExecPolicy::Parallel;
};

// Maximizer of f on [lo, hi] by golden-section search to bracket width tol.
// Every evaluation is appended to history when given.
ScanPoint golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                             std::vector<ScanPoint>* history = nullptr);

// Coarse grid followed by golden section in the bracket around the grid maximum.
ThetaScanResult maximize_over_theta(const std::function<double(double)>& objective, const ThetaScanOptions& opts);

// theta -> lambda(v0)(eps = 0, theta) / (pi/4a)^2, 0 where lambda(v0) <= 0.
double hardy_objective(double a, double theta, double root_tol = 1e-12);
// theta -> smallest eps / a with lambda(v0)(eps, theta) = 0, 0 where none.
// The ratio does not depend on a.
double eps_objective(double theta, double root_tol = 1e-12);

ThetaScanResult optimal_theta_hardy(const StripGeometry& geom, const ThetaScanOptions& opts = {});
ThetaScanResult optimal_theta_eps(const StripGeometry& geom, const ThetaScanOptions& opts = {});

}  // namespace dnstrip
