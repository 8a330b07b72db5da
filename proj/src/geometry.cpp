#include "dnstrip/geometry.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip {

StripGeometry StripGeometry::make(double a, double eps) {
  if (!std::isfinite(a) || !(a > 0.0)) throw DomainError(fmt::format("strip half-width must be positive, got {}", a));
  if (!std::isfinite(eps)) throw DomainError("switch offset must be finite");
  return {a, eps};
}

BCKind BCLayout::at(Side side, double x) const {
  switch (kind) {
    case LayoutKind::Switched:
      if (side == Side::Bottom) return x <= -eps ? BCKind::Dirichlet : BCKind::Neumann;
      return x >= eps ? BCKind::Dirichlet : BCKind::Neumann;
    case LayoutKind::NonSwitched:
      return side == Side::Top ? BCKind::Dirichlet : BCKind::Neumann;
    case LayoutKind::AllDirichlet:
      return BCKind::Dirichlet;
    case LayoutKind::AllNeumann:
      return BCKind::Neumann;
  }
  return BCKind::Neumann;
}

RotatedFrame derive_frame(const StripGeometry& geom, double theta) {
  if (!(theta > 0.0 && theta < kPi / 3.0)) {
    throw DomainError(fmt::format("rotation angle {} outside (0, pi/3)", theta));
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (!(geom.eps < geom.a * std::tan(theta))) {
    throw DomainError(fmt::format("eps = {} violates eps < a tan(theta) = {}", geom.eps, geom.a * std::tan(theta)));
  }
  const double unit = geom.threshold();
  RotatedFrame f;
  f.theta = theta;
  f.q_plus = unit * (4.0 * c * c - 1.0);
  f.q_minus = unit * s * s;
  f.u0 = geom.a * s - geom.eps * c;
  f.v0 = geom.a * c + geom.eps * s;
  return f;
}

StripPoint unrotate(RotatedPoint p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {p.u * c + p.v * s, -p.u * s + p.v * c};
}

RotatedPoint rotate(StripPoint p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {p.x * c - p.y * s, p.x * s + p.y * c};
}

double u_minus(double v, const RotatedFrame& frame, const StripGeometry& geom) {
  return (-geom.a + v * std::cos(frame.theta)) / std::sin(frame.theta);
}

double u_plus(double v, const RotatedFrame& frame, const StripGeometry& geom) {
  return (geom.a + v * std::cos(frame.theta)) / std::sin(frame.theta);
}

RegionMembership classify_region(RotatedPoint p, const RotatedFrame& frame, const StripGeometry& geom) {
  RegionMembership m;
  const double y = unrotate(p, frame.theta).y;
  const double au = std::abs(p.u);
  const double av = std::abs(p.v);
  if (std::abs(y) == geom.a || au == frame.u0 || av == frame.v0) {
    m.boundary = true;
    return m;
  }
  if (std::abs(y) > geom.a) return m;
  m.in_strip = true;
  m.omega1 = au < frame.u0;
  m.omega2 = av < frame.v0 && au > frame.u0;
  m.omega1p = au < frame.u0 && av > frame.v0;
  m.omega2p = av < frame.v0;
  return m;
}

bool covered_square_check(const RotatedFrame& frame, const StripGeometry& geom, int n_samples) {
  if (geom.eps != 0.0 || std::abs(frame.theta - kPi / 4.0) > 1e-12) {
    throw DomainError("covered_square_check requires eps = 0 and theta = pi/4");
  }
  if (n_samples < 1) throw DomainError("covered_square_check needs at least one sample");
  const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  const double h = 2.0 * geom.a / m;
  // Closure membership: allow a rounding slack on the defining inequalities.
  const double slack = 1e-12 * geom.a;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const StripPoint xy{-geom.a + (i + 0.5) * h, -geom.a + (j + 0.5) * h};
      const RotatedPoint uv = rotate(xy, frame.theta);
      const bool in_2p = std::abs(uv.v) <= frame.v0 + slack;
      const bool in_1p = std::abs(uv.u) <= frame.u0 + slack && std::abs(uv.v) >= frame.v0 - slack;
      if (!(in_1p || in_2p)) return false;
    }
  }
  return true;
}

}  // namespace dnstrip
