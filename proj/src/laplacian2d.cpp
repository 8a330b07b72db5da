#include "dnstrip/laplacian2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "dnstrip/errors.hpp"
#include "dnstrip/transcendental.hpp"

namespace dnstrip {

std::string to_string(Truncation t) {
  switch (t) {
    case Truncation::Dirichlet: return "dirichlet";
    case Truncation::Neumann: return "neumann";
    case Truncation::Transparent: return "transparent";
  }
  return "?";
}

Truncation truncation_from_string(const std::string& s) {
  if (s == "dirichlet") return Truncation::Dirichlet;
  if (s == "neumann") return Truncation::Neumann;
  if (s == "transparent") return Truncation::Transparent;
  throw ConfigError(fmt::format("unknown truncation '{}'", s));
}

std::string to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::NoBoundState: return "no-bound-state";
    case GapVerdict::BoundState: return "bound-state";
    case GapVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::IndicatorSquare: return "square";
    case WeightKind::CorollaryRho: return "corollary";
    case WeightKind::NegativeEps: return "negative";
    case WeightKind::Custom: return "custom";
  }
  return "?";
}

std::string to_string(HardyVerdict v) {
  switch (v) {
    case HardyVerdict::Holds: return "holds";
    case HardyVerdict::Fails: return "fails";
    case HardyVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Grid2D Grid2D::make(const StripGeometry& geom, double L, int ny, const BCLayout& bc, Truncation trunc, int ny_base,
                    const std::vector<double>& extra_breaks) {
  if (ny_base == 0) ny_base = ny;
  if (!(L >= 8.0 * geom.a)) throw DomainError(fmt::format("grid: L = {} below 8a = {}", L, 8.0 * geom.a));
  if (ny < 2 || ny % 2 != 0) throw DomainError(fmt::format("grid: ny = {} must be even and >= 2", ny));
  if (ny_base <= 0 || ny % ny_base != 0) {
    throw DomainError(fmt::format("grid: ny = {} is not a multiple of the base rung {}", ny, ny_base));
  }

  std::vector<double> breaks{-L, L};
  if (bc.kind == LayoutKind::Switched) {
    if (!(std::abs(bc.eps) < L)) throw DomainError(fmt::format("grid: switch at +-{} outside (-L, L)", bc.eps));
    breaks.push_back(-bc.eps);
    breaks.push_back(bc.eps);
  }
  for (double b : extra_breaks) {
    if (std::abs(b) < L) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [L](double p, double q) { return q - p <= 1e-12 * L; }),
               breaks.end());
  if (breaks.back() != L) breaks.back() = L;

  Grid2D g;
  g.a = geom.a;
  g.L = L;
  g.ny = ny;
  g.ny_base = ny_base;
  g.bc = bc;
  g.trunc = trunc;
  const double h_base = 2.0 * geom.a / ny_base;
  const int refine = ny / ny_base;
  g.x.push_back(breaks.front());
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s];
    const double hi = breaks[s + 1];
    const int n = std::max(1, static_cast<int>(std::lround((hi - lo) / h_base))) * refine;
    for (int k = 1; k < n; ++k) g.x.push_back(lo + (hi - lo) * k / n);
    g.x.push_back(hi);
  }
  for (int j = 0; j <= ny; ++j) g.y.push_back(j == ny ? geom.a : -geom.a + 2.0 * geom.a * j / ny);
  return g;
}

namespace {

std::vector<double> lumped(const std::vector<double>& nodes) {
  std::vector<double> m(nodes.size(), 0.0);
  for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
    const double h = nodes[c + 1] - nodes[c];
    m[c] += 0.5 * h;
    m[c + 1] += 0.5 * h;
  }
  return m;
}

bool is_dirichlet(const Grid2D& g, std::size_t i, std::size_t j) {
  const std::size_t last_j = g.y.size() - 1;
  const std::size_t last_i = g.x.size() - 1;
  if (g.trunc == Truncation::Dirichlet && (i == 0 || i == last_i)) return true;
  if (j == 0 && g.bc.at(Side::Bottom, g.x[i]) == BCKind::Dirichlet) return true;
  if (j == last_j && g.bc.at(Side::Top, g.x[i]) == BCKind::Dirichlet) return true;
  return false;
}

// Transverse problem of the column at x = x_i: free y-nodes, eigenvalues and
// M_y^1/2-scaled eigenvectors (orthonormal in the Euclidean sense).
struct ColumnModes {
  std::vector<std::size_t> free_j;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

ColumnModes column_modes(const Grid2D& g, std::size_t i) {
  const std::size_t nyn = g.y.size();
  const std::vector<double> my = lumped(g.y);
  ColumnModes cm;
  std::vector<int> idx(nyn, -1);
  for (std::size_t j = 0; j < nyn; ++j) {
    const bool d = (j == 0 && g.bc.at(Side::Bottom, g.x[i]) == BCKind::Dirichlet) ||
                   (j + 1 == nyn && g.bc.at(Side::Top, g.x[i]) == BCKind::Dirichlet);
    if (!d) {
      idx[j] = static_cast<int>(cm.free_j.size());
      cm.free_j.push_back(j);
    }
  }
  const auto n = static_cast<Eigen::Index>(cm.free_j.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t c = 0; c + 1 < nyn; ++c) {
    const double w = 1.0 / (g.y[c + 1] - g.y[c]);
    const int p = idx[c];
    const int q = idx[c + 1];
    if (p >= 0) s(p, p) += w / my[c];
    if (q >= 0) s(q, q) += w / my[c + 1];
    if (p >= 0 && q >= 0) {
      const double off = -w / std::sqrt(my[c] * my[c + 1]);
      s(p, q) = off;
      s(q, p) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  cm.values = es.eigenvalues();
  cm.vectors = es.eigenvectors();
  return cm;
}

}  // namespace

DiscreteOperator2D assemble(const StripGeometry& geom, const Grid2D& grid) {
  if (grid.a != geom.a) throw DomainError("assemble: grid built for a different half-width");
  if (grid.bc.kind == LayoutKind::Switched && grid.bc.eps != geom.eps) {
    throw DomainError("assemble: layout switch does not match the geometry");
  }
  const std::size_t nxn = grid.x.size();
  const std::size_t nyn = grid.y.size();
  const std::vector<double> mx = lumped(grid.x);
  const std::vector<double> my = lumped(grid.y);

  DiscreteOperator2D op;
  op.grid = grid;
  op.free_index.assign(nxn * nyn, -1);
  for (std::size_t i = 0; i < nxn; ++i) {
    for (std::size_t j = 0; j < nyn; ++j) {
      if (!is_dirichlet(grid, i, j)) {
        op.free_index[grid.node(i, j)] = static_cast<int>(op.node_of.size());
        op.node_of.push_back(grid.node(i, j));
        op.mass.push_back(mx[i] * my[j]);
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(op.node_of.size() * 5);
  for (std::size_t i = 0; i < nxn; ++i) {
    for (std::size_t j = 0; j < nyn; ++j) {
      const int p = op.free_index[grid.node(i, j)];
      if (p < 0) continue;
      const double mp = op.mass[static_cast<std::size_t>(p)];
      double diag = 0.0;
      auto couple = [&](std::size_t i2, std::size_t j2, double w) {
        diag += w;
        const int q = op.free_index[grid.node(i2, j2)];
        if (q >= 0) trip.emplace_back(p, q, -w / std::sqrt(mp * op.mass[static_cast<std::size_t>(q)]));
      };
      if (i > 0) couple(i - 1, j, my[j] / (grid.x[i] - grid.x[i - 1]));
      if (i + 1 < nxn) couple(i + 1, j, my[j] / (grid.x[i + 1] - grid.x[i]));
      if (j > 0) couple(i, j - 1, mx[i] / (grid.y[j] - grid.y[j - 1]));
      if (j + 1 < nyn) couple(i, j + 1, mx[i] / (grid.y[j + 1] - grid.y[j]));
      trip.emplace_back(p, p, diag / mp);
    }
  }

  const ColumnModes right = column_modes(grid, nxn - 1);
  op.threshold_h = right.values.size() > 0 ? right.values[0] : 0.0;

  if (grid.trunc == Truncation::Transparent) {
    const ColumnModes left = column_modes(grid, 0);
    if (left.values.size() == 0 || right.values.size() == 0 ||
        std::abs(left.values[0] - right.values[0]) > 1e-10 * std::max(1.0, right.values[0])) {
      throw DomainError("assemble: transparent truncation needs the same transverse threshold at both ends");
    }
    for (const auto* cm : {&left, &right}) {
      const std::size_t i = (cm == &left) ? 0 : nxn - 1;
      const auto n = static_cast<Eigen::Index>(cm->free_j.size());
      Eigen::VectorXd kappa(n);
      for (Eigen::Index k = 0; k < n; ++k) kappa[k] = std::sqrt(std::max(0.0, cm->values[k] - cm->values[0]));
      const Eigen::MatrixXd scaled = cm->vectors * kappa.asDiagonal();
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = r; c < n; ++c) {
          const double v = scaled.row(r).dot(cm->vectors.row(c)) / mx[i];
          const int p = op.free_index[grid.node(i, cm->free_j[static_cast<std::size_t>(r)])];
          const int q = op.free_index[grid.node(i, cm->free_j[static_cast<std::size_t>(c)])];
          trip.emplace_back(p, q, v);
          if (p != q) trip.emplace_back(q, p, v);
        }
      }
    }
  }

  const auto dim = static_cast<Eigen::Index>(op.node_of.size());
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

RowMatrix subtract_potential(const DiscreteOperator2D& op, const std::function<double(double, double)>& w) {
  RowMatrix out = op.matrix;
  const std::size_t nyn = op.grid.y.size();
  for (std::size_t p = 0; p < op.node_of.size(); ++p) {
    const std::size_t node = op.node_of[p];
    const double v = w(op.grid.x[node / nyn], op.grid.y[node % nyn]);
    if (v != 0.0) out.coeffRef(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) -= v;
  }
  return out;
}

namespace {

EigenResult2D solve(const RowMatrix& m, const DiscreteOperator2D& op, const LanczosOptions& opts) {
  const SparseEigenResult r = smallest_eigenpair(m, opts);
  EigenResult2D out;
  out.value = r.value;
  out.residual = r.residual;
  out.iterations = r.iterations;
  out.dimension = op.dimension();
  out.threshold_h = op.threshold_h;
  out.vector = r.vector;
  return out;
}

LanczosOptions options_for(const Grid2D& g, double tol, ExecPolicy policy) {
  LanczosOptions o;
  o.tol = tol;
  o.scale = StripGeometry{g.a, 0.0}.threshold();
  o.policy = policy;
  return o;
}

}  // namespace

EigenResult2D smallest_eigenvalue(const DiscreteOperator2D& op, const LanczosOptions& opts) {
  return solve(op.matrix, op, opts);
}

EigenResult2D smallest_eigenvalue(const DiscreteOperator2D& op, double tol, ExecPolicy policy) {
  return solve(op.matrix, op, options_for(op.grid, tol, policy));
}

std::vector<double> nodal_values(const DiscreteOperator2D& op, const std::vector<double>& x) {
  std::vector<double> out(op.grid.x.size() * op.grid.y.size(), 0.0);
  for (std::size_t p = 0; p < op.node_of.size(); ++p) out[op.node_of[p]] = x[p] / std::sqrt(op.mass[p]);
  return out;
}

LadderFit fit_ladder(const std::vector<double>& values) {
  if (values.size() < 3) throw DomainError("fit_ladder: need at least three rungs");
  const std::size_t n = values.size();
  const double v1 = values[n - 3];
  const double v2 = values[n - 2];
  const double v3 = values[n - 1];
  const double d1 = v2 - v1;
  const double d2 = v3 - v2;
  LadderFit f;
  if (d2 == 0.0) {
    f.extrapolated = v3;
    f.order = std::numeric_limits<double>::quiet_NaN();
    f.monotone = true;
    return f;
  }
  if (d1 * d2 > 0.0) {
    f.order = std::clamp(std::log2(d1 / d2), 0.5, 4.0);
    f.extrapolated = v3 + d2 / (std::exp2(f.order) - 1.0);
    f.error_bar = 3.0 * std::abs(d2);
    f.monotone = true;
  } else {
    f.order = std::numeric_limits<double>::quiet_NaN();
    f.extrapolated = v3;
    f.error_bar = 3.0 * std::max(std::abs(d1), std::abs(d2));
    f.monotone = false;
  }
  return f;
}

const TruncationSeries* ThresholdGapReport::find(Truncation t) const {
  for (const auto& s : series) {
    if (s.trunc == t) return &s;
  }
  return nullptr;
}

namespace {

BCLayout layout_for(const SolverConfig& cfg, const StripGeometry& geom) {
  switch (cfg.layout) {
    case LayoutKind::Switched: return BCLayout::switched(geom.eps);
    case LayoutKind::NonSwitched: return BCLayout::non_switched();
    case LayoutKind::AllDirichlet: return {LayoutKind::AllDirichlet, 0.0};
    case LayoutKind::AllNeumann: return {LayoutKind::AllNeumann, 0.0};
  }
  return BCLayout::switched(geom.eps);
}

void check_ladder(const std::vector<int>& ladder) {
  if (ladder.size() < 3) throw ConfigError("mesh ladder needs at least three rungs");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] != 2 * ladder[i - 1]) throw ConfigError("mesh ladder rungs must double");
  }
}

}  // namespace

ThresholdGapReport threshold_gap(const StripGeometry& geom, const SolverConfig& cfg) {
  check_ladder(cfg.ladder);
  if (cfg.truncations.empty()) throw ConfigError("threshold_gap: no truncation requested");
  std::vector<Truncation> truncs = cfg.truncations;
  if (std::find(truncs.begin(), truncs.end(), cfg.verdict_truncation) == truncs.end()) {
    truncs.push_back(cfg.verdict_truncation);
  }
  const BCLayout bc = layout_for(cfg, geom);
  const std::size_t n_rungs = cfg.ladder.size();
  const std::size_t tasks = truncs.size() * n_rungs;
  struct Solved {
    RungResult rung;
    std::vector<double> nodal;
    std::vector<double> x;
    std::vector<double> y;
  };
  // Largest rungs first so the longest solves start early.
  auto results = map_indices<Solved>(cfg.policy, tasks, [&](std::size_t k) {
    const std::size_t t = k / n_rungs;
    const std::size_t r = n_rungs - 1 - k % n_rungs;
    const Grid2D g = Grid2D::make(geom, cfg.L * geom.a, cfg.ladder[r], bc, truncs[t], cfg.ladder.front());
    const DiscreteOperator2D op = assemble(geom, g);
    const EigenResult2D e = smallest_eigenvalue(op, cfg.tol, cfg.policy);
    Solved s{{cfg.ladder[r], e.dimension, e.value, e.threshold_h, e.value - e.threshold_h, e.residual, e.iterations},
             {}, {}, {}};
    if (cfg.keep_vectors && r + 1 == n_rungs) {
      s.nodal = nodal_values(op, e.vector);
      s.x = g.x;
      s.y = g.y;
    }
    return s;
  });

  ThresholdGapReport rep;
  rep.geom = geom;
  rep.verdict_truncation = cfg.verdict_truncation;
  for (std::size_t t = 0; t < truncs.size(); ++t) {
    TruncationSeries s;
    s.trunc = truncs[t];
    for (std::size_t r = 0; r < n_rungs; ++r) s.rungs.push_back(results[t * n_rungs + (n_rungs - 1 - r)].rung);
    auto& finest = results[t * n_rungs];
    s.ground_state = std::move(finest.nodal);
    s.x_nodes = std::move(finest.x);
    s.y_nodes = std::move(finest.y);
    std::vector<double> gaps;
    std::vector<double> values;
    for (const auto& rr : s.rungs) {
      gaps.push_back(rr.gap);
      values.push_back(rr.value);
    }
    s.gap_fit = fit_ladder(gaps);
    s.value_fit = fit_ladder(values);
    rep.series.push_back(std::move(s));
  }
  const TruncationSeries* v = rep.find(cfg.verdict_truncation);
  rep.gap = v->gap_fit.extrapolated;
  rep.error_bar = v->gap_fit.error_bar;
  if (rep.gap - rep.error_bar > 0.0) {
    rep.verdict = GapVerdict::NoBoundState;
  } else if (rep.gap + rep.error_bar < 0.0) {
    rep.verdict = GapVerdict::BoundState;
  } else {
    rep.verdict = GapVerdict::Inconclusive;
  }
  return rep;
}

CriticalEpsReport critical_eps(const StripGeometry& geom, const SolverConfig& cfg, double eps_lo, double eps_hi,
                               double resolution) {
  if (!(eps_lo < eps_hi)) throw ConfigError("critical_eps: bracket must satisfy lo < hi");
  if (!(resolution > 0.0)) throw ConfigError("critical_eps: resolution must be positive");
  SolverConfig c = cfg;
  c.truncations = {cfg.verdict_truncation};
  c.layout = LayoutKind::Switched;

  CriticalEpsReport rep;
  rep.resolution = resolution;
  std::map<double, EpsEvaluation> cache;
  auto eval = [&](double eps) -> const EpsEvaluation& {
    auto it = cache.find(eps);
    if (it != cache.end()) return it->second;
    const auto g = threshold_gap(StripGeometry::make(geom.a, eps), c);
    EpsEvaluation e{eps, g.gap, g.error_bar, g.verdict};
    rep.evaluations.push_back(e);
    return cache.emplace(eps, e).first->second;
  };

  if (eval(eps_lo).verdict != GapVerdict::NoBoundState) {
    throw InconclusiveError(fmt::format("critical_eps: no certified absence of bound states at eps = {}", eps_lo));
  }
  if (eval(eps_hi).verdict != GapVerdict::BoundState) {
    throw InconclusiveError(fmt::format("critical_eps: no certified bound state at eps = {}", eps_hi));
  }

  double a = eps_lo;
  double b = eps_hi;
  while (b - a > resolution) {
    const double m = 0.5 * (a + b);
    (eval(m).verdict == GapVerdict::NoBoundState ? a : b) = m;
  }
  rep.lo = a;
  a = eps_lo;
  b = eps_hi;
  while (b - a > resolution) {
    const double m = 0.5 * (a + b);
    (eval(m).verdict == GapVerdict::BoundState ? b : a) = m;
  }
  rep.hi = b;

  rep.estimate = std::numeric_limits<double>::quiet_NaN();
  const EpsEvaluation* prev = nullptr;
  for (const auto& [eps, e] : cache) {
    if (prev && prev->gap > 0.0 && e.gap <= 0.0) {
      rep.estimate = prev->eps + (e.eps - prev->eps) * prev->gap / (prev->gap - e.gap);
      break;
    }
    prev = &e;
  }
  return rep;
}

HardyWeight HardyWeight::indicator_square(const StripGeometry& geom, double c) {
  HardyWeight w;
  w.kind = WeightKind::IndicatorSquare;
  w.strength = c > 0.0 ? c : solve_s1().value * geom.threshold();
  return w;
}

HardyWeight HardyWeight::corollary_rho(const StripGeometry& geom, double c) {
  if (!(c > 0.0)) c = solve_s1().value * geom.threshold();
  HardyWeight w;
  w.kind = WeightKind::CorollaryRho;
  w.strength = 1.0 / std::max(16.0, (2.0 + 16.0 / (geom.a * geom.a)) / c);
  return w;
}

HardyWeight HardyWeight::negative_eps(const StripGeometry& geom) {
  if (!(geom.eps < 0.0)) throw DomainError("negative-eps weight needs eps < 0");
  HardyWeight w;
  w.kind = WeightKind::NegativeEps;
  w.strength = 3.0 * geom.threshold();
  w.eps = geom.eps;
  return w;
}

HardyWeight HardyWeight::zero() {
  HardyWeight w;
  w.kind = WeightKind::Custom;
  w.custom = [](double, double) { return 0.0; };
  return w;
}

double HardyWeight::operator()(double x, double y, double a) const {
  switch (kind) {
    case WeightKind::IndicatorSquare: return (std::abs(x) < a && std::abs(y) < a) ? strength : 0.0;
    case WeightKind::CorollaryRho: return strength / (1.0 + x * x);
    case WeightKind::NegativeEps: return (eps < x && x < -eps && std::abs(y) < a) ? strength : 0.0;
    case WeightKind::Custom: return custom ? custom(x, y) : 0.0;
  }
  return 0.0;
}

std::vector<double> HardyWeight::breaks(double a) const {
  switch (kind) {
    case WeightKind::IndicatorSquare: return {-a, a};
    case WeightKind::NegativeEps: return {eps, -eps};
    default: return {};
  }
}

HardyReport hardy_form_check(const StripGeometry& geom, const HardyWeight& weight, const SolverConfig& cfg,
                             Truncation trunc) {
  check_ladder(cfg.ladder);
  const BCLayout bc = layout_for(cfg, geom);
  const std::vector<double> extra = weight.breaks(geom.a);
  const std::size_t n = cfg.ladder.size();
  HardyReport rep;
  rep.weight = weight.kind;
  rep.strength = weight.strength;
  rep.trunc = trunc;
  rep.rungs = map_indices<HardyRung>(cfg.policy, n, [&](std::size_t k) {
    const std::size_t r = n - 1 - k;
    const Grid2D g = Grid2D::make(geom, cfg.L * geom.a, cfg.ladder[r], bc, trunc, cfg.ladder.front(), extra);
    const DiscreteOperator2D op = assemble(geom, g);
    const RowMatrix shifted = subtract_potential(op, [&](double x, double y) { return weight(x, y, geom.a); });
    const EigenResult2D e = solve(shifted, op, options_for(g, cfg.tol, cfg.policy));
    return HardyRung{cfg.ladder[r], e.value - op.threshold_h, e.residual, e.iterations};
  });
  std::reverse(rep.rungs.begin(), rep.rungs.end());

  std::vector<double> mins;
  for (const auto& r : rep.rungs) mins.push_back(r.min_eig);
  rep.fit = fit_ladder(mins);
  const bool positive = std::all_of(mins.begin(), mins.end(), [](double v) { return v > 0.0; });
  const bool non_decreasing = std::is_sorted(mins.begin(), mins.end());
  rep.trend_ok = positive || non_decreasing;
  if (rep.fit.extrapolated < -rep.fit.error_bar) {
    rep.verdict = HardyVerdict::Fails;
  } else if (rep.trend_ok) {
    rep.verdict = HardyVerdict::Holds;
  } else {
    rep.verdict = HardyVerdict::Inconclusive;
  }
  return rep;
}

}  // namespace dnstrip
