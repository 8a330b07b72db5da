#include "dnstrip/schrodinger1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip {

StepPotential1D::StepPotential1D(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size()) {
    throw DomainError("step potential needs n + 1 breaks for n values");
  }
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) throw DomainError("step potential breaks must be strictly increasing");
  }
}

StepPotential1D StepPotential1D::from_pieces(const std::vector<double>& breaks, const std::vector<double>& values) {
  std::vector<double> b{breaks.front()};
  std::vector<double> v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (breaks[i + 1] > b.back()) {
      b.push_back(breaks[i + 1]);
      v.push_back(values[i]);
    }
  }
  return {std::move(b), std::move(v)};
}

namespace {

// Generalized problem K y = lambda M y on a vertex mesh, stored as the
// symmetric tridiagonal T = M^-1/2 K M^-1/2 + diag(V).
struct Discretization {
  std::vector<double> cell_h;     // per cell
  std::vector<double> mass;       // lumped, per node
  std::vector<double> potential;  // dual-cell average, per node
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples nodes i and i + 1
};

Discretization discretize(const StepPotential1D& pot, const std::vector<int>& cells) {
  Discretization d;
  std::vector<double> cell_v;
  for (std::size_t p = 0; p < pot.piece_count(); ++p) {
    const double h = pot.piece_width(p) / cells[p];
    for (int k = 0; k < cells[p]; ++k) {
      d.cell_h.push_back(h);
      cell_v.push_back(pot.values()[p]);
    }
  }
  const std::size_t n_nodes = d.cell_h.size() + 1;
  d.mass.assign(n_nodes, 0.0);
  d.potential.assign(n_nodes, 0.0);
  std::vector<double> stiff(n_nodes, 0.0);
  for (std::size_t c = 0; c < d.cell_h.size(); ++c) {
    const double h = d.cell_h[c];
    d.mass[c] += 0.5 * h;
    d.mass[c + 1] += 0.5 * h;
    d.potential[c] += 0.5 * h * cell_v[c];
    d.potential[c + 1] += 0.5 * h * cell_v[c];
    stiff[c] += 1.0 / h;
    stiff[c + 1] += 1.0 / h;
  }
  d.diag.resize(n_nodes);
  d.off.resize(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    d.potential[i] /= d.mass[i];
    d.diag[i] = stiff[i] / d.mass[i] + d.potential[i];
  }
  for (std::size_t c = 0; c + 1 < n_nodes; ++c) {
    d.off[c] = -1.0 / (d.cell_h[c] * std::sqrt(d.mass[c] * d.mass[c + 1]));
  }
  return d;
}

// Number of eigenvalues of T strictly below x.
int sturm_count(const Discretization& d, double x) {
  int count = 0;
  double q = d.diag[0] - x;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == d.diag.size()) break;
    q = (d.diag[i + 1] - x) - d.off[i] * d.off[i] / q;
  }
  return count;
}

// Solves (T - shift) x = b in place; T - shift must be positive definite.
void solve_shifted(const Discretization& d, double shift, std::vector<double>& x) {
  const std::size_t n = d.diag.size();
  std::vector<double> pivot(n);
  pivot[0] = d.diag[0] - shift;
  for (std::size_t i = 1; i < n; ++i) {
    const double p = pivot[i - 1] != 0.0 ? pivot[i - 1] : std::numeric_limits<double>::min();
    const double l = d.off[i - 1] / p;
    pivot[i] = d.diag[i] - shift - l * d.off[i - 1];
    x[i] -= l * x[i - 1];
  }
  for (std::size_t i = n; i-- > 0;) {
    const double p = pivot[i] != 0.0 ? pivot[i] : std::numeric_limits<double>::min();
    if (i + 1 < n) x[i] -= d.off[i] * x[i + 1];
    x[i] /= p;
  }
}

void normalize(std::vector<double>& x) {
  const double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  for (auto& xi : x) xi /= nrm;
}

// Rayleigh quotient in the generalized form: differences of y = M^-1/2 x are
// formed explicitly so that a constant y gives exactly zero kinetic energy.
double rayleigh(const Discretization& d, const std::vector<double>& x) {
  double kinetic = 0.0;
  double potential = 0.0;
  double norm = 0.0;
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / std::sqrt(d.mass[i]);
  for (std::size_t c = 0; c < d.cell_h.size(); ++c) {
    const double dy = y[c + 1] - y[c];
    kinetic += dy * dy / d.cell_h[c];
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    potential += d.potential[i] * d.mass[i] * y[i] * y[i];
    norm += d.mass[i] * y[i] * y[i];
  }
  return (kinetic + potential) / norm;
}

double residual_norm(const Discretization& d, const std::vector<double>& x, double lambda) {
  const std::size_t n = x.size();
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double tx = d.diag[i] * x[i];
    if (i > 0) tx += d.off[i - 1] * x[i - 1];
    if (i + 1 < n) tx += d.off[i] * x[i + 1];
    const double ri = tx - lambda * x[i];
    r2 += ri * ri;
  }
  return std::sqrt(r2);
}

}  // namespace

std::vector<int> cells_per_piece(const StepPotential1D& pot, int n) {
  std::vector<int> cells(pot.piece_count());
  for (std::size_t p = 0; p < cells.size(); ++p) {
    cells[p] = std::max(1, static_cast<int>(std::lround(n * pot.piece_width(p) / pot.length())));
  }
  return cells;
}

double lowest_eig_on_mesh(const StepPotential1D& pot, const std::vector<int>& cells, double* residual) {
  if (cells.size() != pot.piece_count()) throw DomainError("cell layout does not match the potential");
  const Discretization d = discretize(pot, cells);
  const std::size_t n = d.diag.size();

  // Gershgorin lower bound; the Rayleigh quotient of the constant is an upper bound.
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(d.off[i - 1]);
    if (i + 1 < n) r += std::abs(d.off[i]);
    lo = std::min(lo, d.diag[i] - r);
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sqrt(d.mass[i]);
  double hi = rayleigh(d, x);
  hi += 1e-12 * std::max(1.0, std::abs(hi));

  double scale = 0.0;
  for (double v : d.diag) scale = std::max(scale, std::abs(v));
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200 && hi - lo > 4.0 * eps * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, mid) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // lo has zero eigenvalues below it, so T - lo is positive semi-definite.
  const double shift = lo - 4.0 * eps * scale;
  for (int it = 0; it < 4; ++it) {
    solve_shifted(d, shift, x);
    normalize(x);
  }
  double value = rayleigh(d, x);
  if (!(value >= lo - 8.0 * eps * scale && value <= hi + 8.0 * eps * scale)) value = 0.5 * (lo + hi);
  if (residual) *residual = residual_norm(d, x, value);
  return value;
}

EigenResult1D lowest_eig_fd(const StepPotential1D& pot, int n) {
  if (n < 16) throw DomainError(fmt::format("lowest_eig_fd: mesh count {} below 16", n));
  const std::vector<int> coarse_cells = cells_per_piece(pot, n);
  std::vector<int> fine_cells(coarse_cells);
  for (auto& c : fine_cells) c *= 2;

  EigenResult1D r;
  r.coarse = lowest_eig_on_mesh(pot, coarse_cells);
  r.fine = lowest_eig_on_mesh(pot, fine_cells, &r.residual);
  r.value = (4.0 * r.fine - r.coarse) / 3.0;
  r.error_estimate = std::abs(r.value - r.fine);
  r.mesh = std::accumulate(fine_cells.begin(), fine_cells.end(), 0);
  r.method = EigenMethod::FiniteDifference;
  if (!std::isfinite(r.value)) throw ConvergenceError("lowest_eig_fd: non-finite eigenvalue");
  return r;
}

StepPotential1D build_reduced_potential(double v, const RotatedFrame& frame, const StripGeometry& geom) {
  if (!(std::abs(v) < frame.v0)) {
    throw DomainError(fmt::format("reduced potential needs |v| < v0 = {}, got {}", frame.v0, v));
  }
  const double lo = u_minus(v, frame, geom);
  const double hi = u_plus(v, frame, geom);
  return StepPotential1D({lo, -frame.u0, frame.u0, hi}, {-frame.q_minus, frame.q_plus, -frame.q_minus});
}

StepPotential1D endpoint_reduced_potential(const RotatedFrame& frame, const StripGeometry& geom, int side) {
  const double span = 2.0 * geom.a / std::sin(frame.theta);
  if (side >= 0) {
    return StepPotential1D({-frame.u0, frame.u0, span - frame.u0}, {frame.q_plus, -frame.q_minus});
  }
  return StepPotential1D({frame.u0 - span, -frame.u0, frame.u0}, {-frame.q_minus, frame.q_plus});
}

std::vector<ProfilePoint> lambda_profile(const RotatedFrame& frame, const StripGeometry& geom, int n_v, int n_mesh,
                                         ExecPolicy policy) {
  if (n_v < 3 || n_v % 2 == 0) throw DomainError(fmt::format("lambda_profile: n_v = {} must be odd and >= 3", n_v));
  return map_indices<ProfilePoint>(policy, static_cast<std::size_t>(n_v), [&](std::size_t i) {
    // Symmetric placement: v_i = -v_{n-1-i} exactly.
    const double t = static_cast<double>(2 * static_cast<int>(i) + 2 - (n_v + 1)) / (n_v + 1);
    const double v = t * frame.v0;
    return ProfilePoint{v, lowest_eig_fd(build_reduced_potential(v, frame, geom), n_mesh)};
  });
}

StepPotential1D hc_potential(double h, double l, double delta, double c) {
  if (!(h >= 0.0) || !(l > 0.0)) throw DomainError("H_c: need h >= 0 and l > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError(fmt::format("H_c: delta = {} outside (0, 1)", delta));
  const double width = delta * l;
  const double c_max = l - width;
  if (c < -1e-14 * l || c > c_max + 1e-14 * l) {
    throw DomainError(fmt::format("H_c: offset {} outside [0, {}]", c, c_max));
  }
  c = std::clamp(c, 0.0, c_max);
  return StepPotential1D::from_pieces({0.0, c, c + width, l}, {0.0, h, 0.0});
}

EigenResult1D hc_lowest(double h, double l, double delta, double c, int n) {
  return lowest_eig_fd(hc_potential(h, l, delta, c), n);
}

LemmaReport verify_lemma(double h, double l, double delta, int n_c, int n_mesh, ExecPolicy policy) {
  if (n_c < 2) throw DomainError("verify_lemma: need at least two offsets");
  LemmaReport rep{h, l, delta, 0.0, {}, {}, 0.0};
  const double c_max = l - delta * l;
  const EigenResult1D ref = hc_lowest(h, l, delta, 0.0, n_mesh);
  rep.reference = ref.value;
  rep.curve = map_indices<LemmaPoint>(policy, static_cast<std::size_t>(n_c), [&](std::size_t i) {
    LemmaPoint pt;
    // Offsets mirror exactly: c_i + c_{n-1-i} = c_max.
    pt.c = (i + 1 == static_cast<std::size_t>(n_c)) ? c_max : c_max * static_cast<double>(i) / (n_c - 1);
    pt.eig = hc_lowest(h, l, delta, pt.c, n_mesh);
    pt.tolerance = 10.0 * (pt.eig.error_estimate + ref.error_estimate);
    pt.violation = pt.eig.value < rep.reference - pt.tolerance;
    return pt;
  });
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.curve) {
    if (pt.violation) rep.violations.push_back(pt.c);
    if (pt.eig.value < best) {
      best = pt.eig.value;
      rep.argmin_c = pt.c;
    }
  }
  return rep;
}

}  // namespace dnstrip
