#pragma once

// The straight strip R x (-a, a) with a boundary-condition switch at x = +-eps,
// and the rotated frame (u, v) used to reduce the problem to one dimension.

#include <numbers>

namespace dnstrip {

inline constexpr double kPi = std::numbers::pi;

struct StripGeometry {
  double a = 1.0;    // half-width, > 0
  double eps = 0.0;  // switch offset, any sign

  // Validates a > 0 and finiteness.
  static StripGeometry make(double a, double eps);

  // Transverse Dirichlet-Neumann threshold (pi / 4a)^2: the bottom of the
  // essential spectrum and the unit all spectral summaries are quoted in.
  [[nodiscard]] double threshold() const { return (kPi / (4.0 * a)) * (kPi / (4.0 * a)); }
};

enum class Side { Bottom, Top };  // y = -a, y = +a
enum class BCKind { Dirichlet, Neumann };

enum class LayoutKind {
  Switched,     // Dirichlet on (-inf,-eps] x {-a} and [eps,inf) x {a}
  NonSwitched,  // Dirichlet on all of y = a, Neumann on all of y = -a
  AllDirichlet,
  AllNeumann,
};

// Boundary-condition layout along the two long sides of the strip. The switch
// points themselves belong to the Dirichlet part.
struct BCLayout {
  LayoutKind kind = LayoutKind::Switched;
  double eps = 0.0;

  static BCLayout switched(double eps) { return {LayoutKind::Switched, eps}; }
  static BCLayout non_switched() { return {LayoutKind::NonSwitched, 0.0}; }

  [[nodiscard]] BCKind at(Side side, double x) const;
};

struct StripPoint {
  double x = 0.0;
  double y = 0.0;
};

struct RotatedPoint {
  double u = 0.0;
  double v = 0.0;
};

struct RotatedFrame {
  double theta = 0.0;
  double q_plus = 0.0;   // (pi/4a)^2 (4 cos^2 theta - 1), the well height
  double q_minus = 0.0;  // (pi/4a)^2 sin^2 theta, the flank depth
  double u0 = 0.0;       // a sin theta - eps cos theta
  double v0 = 0.0;       // a cos theta + eps sin theta
};

// Requires theta in (0, pi/3) and eps < a tan(theta); throws DomainError otherwise.
RotatedFrame derive_frame(const StripGeometry& geom, double theta);

// (x, y) = (u cos + v sin, -u sin + v cos).
StripPoint unrotate(RotatedPoint p, double theta);
RotatedPoint rotate(StripPoint p, double theta);

// Ends of the cross-section at fixed v: u_-(v), u_+(v).
double u_minus(double v, const RotatedFrame& frame, const StripGeometry& geom);
double u_plus(double v, const RotatedFrame& frame, const StripGeometry& geom);

// Membership of a rotated point in the sets of the reduction. Strict
// inequalities throughout; a point lying on any defining level set
// (|y| = a, |u| = u0, |v| = v0) is reported as boundary only.
struct RegionMembership {
  bool boundary = false;
  bool in_strip = false;  // Omega
  bool omega1 = false;    // |u| < u0
  bool omega2 = false;    // |v| < v0, |u| > u0
  bool omega1p = false;   // |u| < u0, |v| > v0
  bool omega2p = false;   // |v| < v0

  [[nodiscard]] bool exterior() const { return !boundary && !in_strip; }
};

RegionMembership classify_region(RotatedPoint p, const RotatedFrame& frame, const StripGeometry& geom);

// Samples an m x m grid of cell centres in (-a, a)^2 (m = ceil(sqrt(n))) and
// checks every point lies in the closure of Omega1' u Omega2'. Requires
// eps = 0 and theta = pi/4.
bool covered_square_check(const RotatedFrame& frame, const StripGeometry& geom, int n_samples);

}  // namespace dnstrip
