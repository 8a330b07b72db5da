#pragma once

// Direct two-dimensional layer: the Laplacian on the strip truncated to
// (-L, L) x (-a, a), discretized by a vertex-centred five-point scheme on a
// tensor mesh, its lowest eigenvalue, the position of that eigenvalue
// relative to the transverse threshold, and shifted-form Hardy checks.
//
// The x-mesh is piecewise uniform with nodes at -L, L, the switch abscissae
// and any extra breakpoints; every segment gets round(length / h_base) cells
// on the base rung of a ladder, multiplied by ny / ny_base on finer rungs, so
// rungs are nested. The y-mesh is uniform with ny cells.
//
// The operator is A = M^-1/2 K M^-1/2 on free nodes, K the stiffness matrix
// and M the lumped mass; Dirichlet nodes are eliminated and Neumann edges
// use half cells (equivalent to mirror ghost points).
//
// Truncation at x = +-L:
//   Dirichlet    raises the spectrum, Neumann lowers it.
//   Transparent  appends the exterior Dirichlet-to-Neumann map evaluated at
//                the discrete threshold: sum_n sqrt(Lambda_n - Lambda_1) |g_n|^2
//                over the discrete transverse modes g_n of the end column.
//                The lowest eigenvalue then lies below Lambda_1 exactly when
//                the discrete unbounded strip has a bound state, so the sign
//                of the gap does not depend on L (its size does).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnstrip/geometry.hpp"
#include "dnstrip/parallel.hpp"
#include "dnstrip/sparse_eigen.hpp"

namespace dnstrip {

enum class Truncation { Dirichlet, Neumann, Transparent };

std::string to_string(Truncation t);
Truncation truncation_from_string(const std::string& s);

struct Grid2D {
  double a = 1.0;
  double L = 12.0;
  int ny = 32;
  int ny_base = 32;
  BCLayout bc;
  Truncation trunc = Truncation::Dirichlet;
  std::vector<double> x;  // node abscissae, x.front() = -L, x.back() = L
  std::vector<double> y;  // node ordinates, ny + 1 of them

  // Requires L >= 8a, ny even, ny a multiple of ny_base (0 means ny), and
  // the switch abscissae inside (-L, L).
  static Grid2D make(const StripGeometry& geom, double L, int ny, const BCLayout& bc, Truncation trunc,
                     int ny_base = 0, const std::vector<double>& extra_breaks = {});

  [[nodiscard]] std::size_t nx_nodes() const { return x.size(); }
  [[nodiscard]] std::size_t ny_nodes() const { return y.size(); }
  [[nodiscard]] std::size_t node(std::size_t i, std::size_t j) const { return i * y.size() + j; }
  [[nodiscard]] double hy() const { return 2.0 * a / ny; }
};

struct DiscreteOperator2D {
  Grid2D grid;
  RowMatrix matrix;               // M^-1/2 K M^-1/2 on free nodes
  std::vector<int> free_index;    // per node, -1 for eliminated nodes
  std::vector<std::size_t> node_of;  // per free unknown
  std::vector<double> mass;       // lumped mass per free unknown
  double threshold_h = 0.0;       // lowest transverse eigenvalue of the end column at x = L

  [[nodiscard]] std::size_t dimension() const { return node_of.size(); }
};

DiscreteOperator2D assemble(const StripGeometry& geom, const Grid2D& grid);

// A - diag(w) with w evaluated at the free nodes.
RowMatrix subtract_potential(const DiscreteOperator2D& op, const std::function<double(double, double)>& w);

struct EigenResult2D {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::size_t dimension = 0;
  double threshold_h = 0.0;
  std::vector<double> vector;  // unit eigenvector of A on free nodes
};

EigenResult2D smallest_eigenvalue(const DiscreteOperator2D& op, const LanczosOptions& opts);
EigenResult2D smallest_eigenvalue(const DiscreteOperator2D& op, double tol = 1e-10,
                                  ExecPolicy policy = ExecPolicy::Parallel);

// Nodal values psi = M^-1/2 x on the full (nx + 1) x (ny + 1) node grid,
// zero on eliminated nodes, row-major in x.
std::vector<double> nodal_values(const DiscreteOperator2D& op, const std::vector<double>& x);

// Aitken extrapolation over the last three rungs of a ladder refined by 2.
struct LadderFit {
  double extrapolated = 0.0;
  double error_bar = 0.0;  // 3 x |last increment|
  double order = 0.0;      // fitted and clamped to [0.5, 4]; NaN when the increments change sign
  bool monotone = false;
};

LadderFit fit_ladder(const std::vector<double>& values);

struct SolverConfig {
  double L = 12.0;  // in units of a
  std::vector<int> ladder{32, 64, 128};
  double tol = 1e-10;
  std::vector<Truncation> truncations{Truncation::Dirichlet, Truncation::Neumann, Truncation::Transparent};
  Truncation verdict_truncation = Truncation::Transparent;
  LayoutKind layout = LayoutKind::Switched;
  ExecPolicy policy = ExecPolicy::Parallel;
  bool keep_vectors = false;  // keep the nodal ground state of the finest rung
};

struct RungResult {
  int ny = 0;
  std::size_t dimension = 0;
  double value = 0.0;
  double threshold_h = 0.0;
  double gap = 0.0;  // value - threshold_h
  double residual = 0.0;
  int iterations = 0;
};

struct TruncationSeries {
  Truncation trunc = Truncation::Dirichlet;
  std::vector<RungResult> rungs;
  LadderFit gap_fit;    // of the gaps
  LadderFit value_fit;  // of the raw eigenvalues
  // Finest rung only, with SolverConfig::keep_vectors: nodal values (see
  // nodal_values) and the node coordinates.
  std::vector<double> ground_state;
  std::vector<double> x_nodes;
  std::vector<double> y_nodes;
};

enum class GapVerdict { NoBoundState, BoundState, Inconclusive };
std::string to_string(GapVerdict v);

struct ThresholdGapReport {
  StripGeometry geom;
  std::vector<TruncationSeries> series;
  Truncation verdict_truncation = Truncation::Transparent;
  double gap = 0.0;        // extrapolated gap of the verdict series
  double error_bar = 0.0;
  GapVerdict verdict = GapVerdict::Inconclusive;

  [[nodiscard]] const TruncationSeries* find(Truncation t) const;
};

// Requires a ladder of at least three rungs. Lowest eigenvalues on every rung
// for every requested truncation; the verdict comes from verdict_truncation:
// gap - error_bar > 0 certifies no bound state, gap + error_bar < 0 a bound
// state, anything else is inconclusive.
ThresholdGapReport threshold_gap(const StripGeometry& geom, const SolverConfig& cfg);

struct EpsEvaluation {
  double eps = 0.0;
  double gap = 0.0;
  double error_bar = 0.0;
  GapVerdict verdict = GapVerdict::Inconclusive;
};

struct CriticalEpsReport {
  double lo = 0.0;        // largest eps certified without bound state
  double hi = 0.0;        // smallest eps certified with a bound state
  double estimate = 0.0;  // zero of the extrapolated gap, interpolated
  double resolution = 0.0;
  std::vector<EpsEvaluation> evaluations;  // in evaluation order
};

// Two bisections on eps with the three-valued verdict: one for the boundary of
// certified absence, one for certified presence, each to the resolution.
// eps_c lies in [lo, hi]; the width exceeds the resolution by the band where
// the verdict is inconclusive. Throws InconclusiveError unless the bracket
// ends are certified absent and present respectively.
CriticalEpsReport critical_eps(const StripGeometry& geom, const SolverConfig& cfg, double eps_lo, double eps_hi,
                               double resolution = 0.01);

enum class WeightKind { IndicatorSquare, CorollaryRho, NegativeEps, Custom };
std::string to_string(WeightKind k);

struct HardyWeight {
  WeightKind kind = WeightKind::IndicatorSquare;
  double strength = 0.0;  // c for the square and the corollary, 3 (pi/4a)^2 for negative eps
  double eps = 0.0;       // NegativeEps only
  std::function<double(double, double)> custom;

  // c chi_(-a,a)^2; c defaults to s1 (pi/4a)^2 when c <= 0.
  static HardyWeight indicator_square(const StripGeometry& geom, double c = 0.0);
  // c_h / (1 + x^2) with c_h = 1 / max{16, (2 + 16/a^2) / c}; c as above.
  static HardyWeight corollary_rho(const StripGeometry& geom, double c = 0.0);
  // 3 (pi/4a)^2 chi_(eps,-eps) x (-a,a); requires eps < 0.
  static HardyWeight negative_eps(const StripGeometry& geom);
  static HardyWeight zero();

  // Pointwise value; indicators use strict inequalities.
  [[nodiscard]] double operator()(double x, double y, double a) const;
  // Abscissae where the weight jumps, added to the x-mesh as nodes.
  [[nodiscard]] std::vector<double> breaks(double a) const;
};

enum class HardyVerdict { Holds, Fails, Inconclusive };
std::string to_string(HardyVerdict v);

struct HardyRung {
  int ny = 0;
  double min_eig = 0.0;  // lowest eigenvalue of A - Lambda_h - diag(w)
  double residual = 0.0;
  int iterations = 0;
};

struct HardyReport {
  WeightKind weight = WeightKind::IndicatorSquare;
  double strength = 0.0;
  Truncation trunc = Truncation::Transparent;
  std::vector<HardyRung> rungs;
  LadderFit fit;
  bool trend_ok = false;  // all rungs positive, or non-decreasing along the ladder
  HardyVerdict verdict = HardyVerdict::Inconclusive;
};

// Holds when the extrapolated minimum is >= -error_bar and the trend is
// acceptable; fails when it is below -error_bar.
HardyReport hardy_form_check(const StripGeometry& geom, const HardyWeight& weight, const SolverConfig& cfg,
                             Truncation trunc = Truncation::Transparent);

}  // namespace dnstrip
