#pragma once

// Lowest Neumann eigenvalue of -d^2/du^2 + V on an interval, V piecewise
// constant. Discretized by a vertex-centred scheme on a piecewise-uniform
// mesh that places a node on every jump of V; Neumann ends use mirror ghost
// points (half cells). The resulting generalized problem K y = lambda M y
// with lumped M is solved in symmetric tridiagonal form by Sturm bisection
// followed by inverse iteration and a Rayleigh-quotient polish.

#include <string>
#include <vector>

#include "dnstrip/geometry.hpp"
#include "dnstrip/parallel.hpp"

namespace dnstrip {

class StepPotential1D {
public:
  // breaks strictly increasing, values.size() == breaks.size() - 1.
  StepPotential1D(std::vector<double> breaks, std::vector<double> values);

  [[nodiscard]] double left() const { return breaks_.front(); }
  [[nodiscard]] double right() const { return breaks_.back(); }
  [[nodiscard]] double length() const { return right() - left(); }
  [[nodiscard]] std::size_t piece_count() const { return values_.size(); }
  [[nodiscard]] const std::vector<double>& breaks() const { return breaks_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double piece_width(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

  // Builds from possibly degenerate pieces, dropping the zero-width ones.
  static StepPotential1D from_pieces(const std::vector<double>& breaks, const std::vector<double>& values);

private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

enum class EigenMethod { Matching, FiniteDifference };

struct EigenResult1D {
  double value = 0.0;           // Richardson-extrapolated from (n, 2n)
  double coarse = 0.0;          // raw value on the n-cell mesh
  double fine = 0.0;            // raw value on the 2n-cell mesh
  double error_estimate = 0.0;  // |value - fine|
  int mesh = 0;                 // cells of the fine mesh
  double residual = 0.0;        // ||T x - lambda x|| / ||x|| on the fine mesh
  EigenMethod method = EigenMethod::FiniteDifference;
};

// Cells per piece for a target total n: max(1, round(n * width / length)).
// Mirror-image potentials receive mirror-image meshes.
std::vector<int> cells_per_piece(const StepPotential1D& pot, int n);

// Lowest eigenvalue on an explicit per-piece cell layout, no extrapolation.
// residual (optional) receives ||T x - lambda x|| / ||x||.
double lowest_eig_on_mesh(const StepPotential1D& pot, const std::vector<int>& cells, double* residual = nullptr);

// Requires n >= 16. Solves on n and 2n cells and extrapolates with h^2.
EigenResult1D lowest_eig_fd(const StepPotential1D& pot, int n);

// Three pieces on [u_-(v), u_+(v)]: -q- | q+ on (-u0, u0) | -q-. Requires |v| < v0.
StepPotential1D build_reduced_potential(double v, const RotatedFrame& frame, const StripGeometry& geom);

// The limit v -> +v0 (side > 0) or v -> -v0 (side < 0), where one flank has
// shrunk to zero width: two pieces on an interval of length 2a / sin(theta).
StepPotential1D endpoint_reduced_potential(const RotatedFrame& frame, const StripGeometry& geom, int side = +1);

struct ProfilePoint {
  double v = 0.0;
  EigenResult1D eig;
};

// lambda(v) at n_v points v_i = -v0 + 2 v0 (i + 1) / (n_v + 1); n_v >= 3 odd so
// that v = 0 is included.
std::vector<ProfilePoint> lambda_profile(const RotatedFrame& frame, const StripGeometry& geom, int n_v, int n_mesh,
                                         ExecPolicy policy = ExecPolicy::Parallel);

// h chi_(c, c + delta l) on (0, l). Requires h >= 0, l > 0, 0 < delta < 1,
// 0 <= c <= l - delta l.
StepPotential1D hc_potential(double h, double l, double delta, double c);
EigenResult1D hc_lowest(double h, double l, double delta, double c, int n);

struct LemmaPoint {
  double c = 0.0;
  EigenResult1D eig;
  double tolerance = 0.0;  // 10 x (error estimate at c + error estimate at c = 0)
  bool violation = false;  // eig.value < reference - tolerance
};

struct LemmaReport {
  double h = 0.0, l = 0.0, delta = 0.0;
  double reference = 0.0;  // inf sigma(H_0)
  std::vector<LemmaPoint> curve;
  std::vector<double> violations;  // offending c values
  double argmin_c = 0.0;           // location of the smallest value on the curve
};

// Sweeps c over n_c equispaced values of [0, l - delta l] and checks
// inf sigma(H_c) >= inf sigma(H_0) - tolerance at each.
LemmaReport verify_lemma(double h, double l, double delta, int n_c, int n_mesh,
                         ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace dnstrip
