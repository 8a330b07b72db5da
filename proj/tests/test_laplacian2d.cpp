#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "dnstrip/errors.hpp"
#include "dnstrip/laplacian2d.hpp"
#include "dnstrip/transcendental.hpp"

using namespace dnstrip;

namespace {

double unit(double a) { return StripGeometry{a, 0.0}.threshold(); }

DiscreteOperator2D build(const StripGeometry& g, double L, int ny, BCLayout bc, Truncation t) {
  return assemble(g, Grid2D::make(g, L, ny, bc, t));
}

double lowest(const DiscreteOperator2D& op) { return smallest_eigenvalue(op, 1e-11).value; }

SolverConfig small_config() {
  SolverConfig c;
  c.L = 8.0;
  c.ladder = {8, 16, 32};
  return c;
}

}  // namespace

TEST_CASE("grid construction") {
  const StripGeometry g{1.0, 0.5};
  const Grid2D grid = Grid2D::make(g, 8.0, 16, BCLayout::switched(0.5), Truncation::Dirichlet);
  CHECK(grid.x.front() == -8.0);
  CHECK(grid.x.back() == 8.0);
  CHECK(grid.y.size() == 17);
  CHECK(std::find(grid.x.begin(), grid.x.end(), 0.5) != grid.x.end());
  CHECK(std::find(grid.x.begin(), grid.x.end(), -0.5) != grid.x.end());
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    CHECK(grid.x[i] == doctest::Approx(-grid.x[grid.x.size() - 1 - i]).epsilon(1e-14));
  }

  // Rungs are nested: every coarse node is a fine node.
  const Grid2D coarse = Grid2D::make(g, 8.0, 16, BCLayout::switched(0.5), Truncation::Dirichlet, 16);
  const Grid2D fine = Grid2D::make(g, 8.0, 32, BCLayout::switched(0.5), Truncation::Dirichlet, 16);
  CHECK(fine.x.size() - 1 == 2 * (coarse.x.size() - 1));
  for (std::size_t i = 0; i < coarse.x.size(); ++i) CHECK(fine.x[2 * i] == doctest::Approx(coarse.x[i]));

  CHECK_THROWS_AS(Grid2D::make(g, 7.9, 16, BCLayout::switched(0.5), Truncation::Dirichlet), DomainError);
  CHECK_THROWS_AS(Grid2D::make(g, 8.0, 15, BCLayout::switched(0.5), Truncation::Dirichlet), DomainError);
  CHECK_THROWS_AS(Grid2D::make(g, 8.0, 24, BCLayout::switched(0.5), Truncation::Dirichlet, 16), DomainError);
}

TEST_CASE("operator is exactly symmetric for every truncation") {
  const StripGeometry g{1.0, 0.37};
  for (Truncation t : {Truncation::Dirichlet, Truncation::Neumann, Truncation::Transparent}) {
    const auto op = build(g, 8.0, 8, BCLayout::switched(g.eps), t);
    const RowMatrix at = op.matrix.transpose();
    CHECK((op.matrix - at).norm() == 0.0);
    CHECK(op.matrix.rows() == static_cast<Eigen::Index>(op.dimension()));
  }
}

TEST_CASE("all-Dirichlet box matches the closed-form discrete eigenvalue") {
  const StripGeometry g{1.0, 0.0};
  const double L = 8.0;
  const int ny = 16;
  const auto op = build(g, L, ny, {LayoutKind::AllDirichlet, 0.0}, Truncation::Dirichlet);
  const double hx = 2.0 * L / static_cast<double>(op.grid.x.size() - 1);
  const double hy = 2.0 / ny;
  const double sx = std::sin(kPi * hx / (4.0 * L));
  const double sy = std::sin(kPi * hy / 4.0);
  const double expected = 4.0 / (hx * hx) * sx * sx + 4.0 / (hy * hy) * sy * sy;
  CHECK(lowest(op) == doctest::Approx(expected).epsilon(1e-10));
  // Approaches the continuum (pi/2a)^2 + (pi/2L)^2 from below.
  const double fine = lowest(build(g, L, 32, {LayoutKind::AllDirichlet, 0.0}, Truncation::Dirichlet));
  const double cont = kPi * kPi / 4.0 + kPi * kPi / (4.0 * L * L);
  CHECK(lowest(op) < fine);
  CHECK(fine < cont);
}

TEST_CASE("all-Neumann box has a zero mode") {
  const StripGeometry g{1.0, 0.0};
  const auto op = build(g, 8.0, 8, {LayoutKind::AllNeumann, 0.0}, Truncation::Neumann);
  CHECK(std::abs(lowest(op)) <= 1e-10);
}

TEST_CASE("non-switched strip sits exactly at the discrete threshold") {
  const StripGeometry g{1.0, 0.0};
  const int ny = 16;
  const double hy = 2.0 / ny;
  const double s = std::sin(kPi * hy / 8.0);
  const double thr = 4.0 / (hy * hy) * s * s;  // Dirichlet-Neumann on (-a, a), mirror Neumann
  for (Truncation t : {Truncation::Neumann, Truncation::Transparent}) {
    const auto op = build(g, 8.0, ny, BCLayout::non_switched(), t);
    CHECK(op.threshold_h == doctest::Approx(thr).epsilon(1e-12));
    CHECK(lowest(op) == doctest::Approx(thr).epsilon(1e-10));
  }
  CHECK(thr < unit(1.0));
}

TEST_CASE("truncation ordering") {
  for (double eps : {-0.3, 0.0, 0.6}) {
    const StripGeometry g{1.0, eps};
    const double d = lowest(build(g, 8.0, 16, BCLayout::switched(eps), Truncation::Dirichlet));
    const double n = lowest(build(g, 8.0, 16, BCLayout::switched(eps), Truncation::Neumann));
    const double t = lowest(build(g, 8.0, 16, BCLayout::switched(eps), Truncation::Transparent));
    CHECK(d >= n);
    CHECK(t >= n - 1e-12);
    CHECK(d >= t - 1e-12);
  }
}

TEST_CASE("transparent truncation of uniform boxes") {
  const StripGeometry g{1.0, 0.0};
  // x-independent ground states only see the lowest transverse mode, on
  // which the exterior map vanishes.
  const auto n = build(g, 8.0, 8, {LayoutKind::AllNeumann, 0.0}, Truncation::Transparent);
  CHECK(n.threshold_h == doctest::Approx(0.0));
  CHECK(std::abs(lowest(n)) <= 1e-10);
  const auto d = build(g, 8.0, 8, {LayoutKind::AllDirichlet, 0.0}, Truncation::Transparent);
  CHECK(lowest(d) == doctest::Approx(d.threshold_h).epsilon(1e-10));
}

TEST_CASE("scaling: a -> 2a divides eigenvalues by 4") {
  const StripGeometry g1{1.0, 0.6};
  const StripGeometry g2{2.0, 1.2};
  for (Truncation t : {Truncation::Dirichlet, Truncation::Transparent}) {
    const double v1 = lowest(build(g1, 12.0, 16, BCLayout::switched(0.6), t));
    const double v2 = lowest(build(g2, 24.0, 16, BCLayout::switched(1.2), t));
    CHECK(std::abs(v2 - v1 / 4.0) <= 1e-10 * v1);
  }
}

TEST_CASE("ground state is symmetric under (x, y) -> (-x, -y)") {
  const StripGeometry g{1.0, 0.6};
  const auto op = build(g, 8.0, 16, BCLayout::switched(0.6), Truncation::Transparent);
  const auto e = smallest_eigenvalue(op, 1e-12);
  const auto psi = nodal_values(op, e.vector);
  const std::size_t nx = op.grid.x.size();
  const std::size_t ny = op.grid.y.size();
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      worst = std::max(worst, std::abs(psi[op.grid.node(i, j)] - psi[op.grid.node(nx - 1 - i, ny - 1 - j)]));
    }
  }
  CHECK(worst <= 1e-8 * peak);
}

TEST_CASE("subtract_potential shifts a constant exactly") {
  const StripGeometry g{1.0, 0.2};
  const auto op = build(g, 8.0, 8, BCLayout::switched(0.2), Truncation::Neumann);
  const RowMatrix s = subtract_potential(op, [](double, double) { return 0.25; });
  const RowMatrix diff = op.matrix - s;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (RowMatrix::InnerIterator it(diff, k); it; ++it) {
      if (it.row() != it.col()) {
        CHECK(it.value() == 0.0);
        continue;
      }
      CHECK(it.value() == doctest::Approx(0.25).epsilon(1e-15));
    }
  }
}

TEST_CASE("Lanczos agrees with a dense solver") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const int n = 40;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = nd(rng);
  }
  const Eigen::MatrixXd m = b + b.transpose();
  const RowMatrix s = m.sparseView();
  LanczosOptions opts;
  opts.scale = 10.0;
  opts.tol = 1e-12;
  const auto r = smallest_eigenpair(s, opts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(r.value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-11));

  RowMatrix one(1, 1);
  one.insert(0, 0) = 3.5;
  CHECK(smallest_eigenpair(one, LanczosOptions{}).value == doctest::Approx(3.5));
}

TEST_CASE("fit_ladder") {
  // Geometric increments are extrapolated exactly.
  const auto f = fit_ladder({1.0 + 0.64, 1.0 + 0.16, 1.0 + 0.04});
  CHECK(f.extrapolated == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.order == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.monotone);
  CHECK(f.error_bar == doctest::Approx(0.36).epsilon(1e-14));

  const auto osc = fit_ladder({1.0, 1.1, 1.05});
  CHECK(std::isnan(osc.order));
  CHECK(osc.extrapolated == 1.05);
  CHECK_FALSE(osc.monotone);
  CHECK_THROWS_AS(fit_ladder({1.0, 2.0}), DomainError);
}

TEST_CASE("threshold gap: ladder validation and vectors") {
  const StripGeometry g{1.0, 0.6};
  SolverConfig c = small_config();
  c.truncations = {Truncation::Transparent};
  c.keep_vectors = true;
  const auto rep = threshold_gap(g, c);
  REQUIRE(rep.series.size() == 1);
  const auto& s = rep.series[0];
  CHECK(s.rungs.size() == 3);
  CHECK(s.rungs[0].ny == 8);
  CHECK(s.ground_state.size() == s.x_nodes.size() * s.y_nodes.size());
  CHECK(s.y_nodes.size() == 33);
  CHECK(rep.verdict == GapVerdict::BoundState);

  c.ladder = {8, 16, 24};
  CHECK_THROWS_AS(threshold_gap(g, c), ConfigError);
  c.ladder = {8, 16};
  CHECK_THROWS_AS(threshold_gap(g, c), ConfigError);
}

TEST_CASE("threshold gap: serial and parallel agree bitwise") {
  const StripGeometry g{1.0, 0.4};
  SolverConfig c = small_config();
  c.policy = ExecPolicy::Serial;
  const auto a = threshold_gap(g, c);
  c.policy = ExecPolicy::Parallel;
  const auto b = threshold_gap(g, c);
  for (std::size_t t = 0; t < a.series.size(); ++t) {
    for (std::size_t r = 0; r < a.series[t].rungs.size(); ++r) {
      CHECK(a.series[t].rungs[r].value == b.series[t].rungs[r].value);
    }
  }
}

TEST_CASE("no bound state for eps <= 0 on Dirichlet truncation") {
  for (double eps : {-0.5, 0.0}) {
    SolverConfig c = small_config();
    c.truncations = {Truncation::Dirichlet};
    c.verdict_truncation = Truncation::Dirichlet;
    const auto rep = threshold_gap(StripGeometry{1.0, eps}, c);
    const auto& fit = rep.series[0].value_fit;
    CHECK(fit.extrapolated >= unit(1.0) - fit.error_bar);
  }
}

TEST_CASE("critical eps rejects uncertified brackets") {
  const StripGeometry g{1.0, 0.0};
  const SolverConfig c = small_config();
  CHECK_THROWS_AS(critical_eps(g, c, 0.6, 0.7, 0.05), InconclusiveError);
  CHECK_THROWS_AS(critical_eps(g, c, 0.7, 0.3, 0.05), ConfigError);
  CHECK_THROWS_AS(critical_eps(g, c, 0.3, 0.7, 0.0), ConfigError);
}

TEST_CASE("Hardy weights") {
  const StripGeometry g{1.0, 0.0};
  const auto sq = HardyWeight::indicator_square(g);
  CHECK(sq.strength == doctest::Approx(solve_s1().value * unit(1.0)));
  CHECK(sq(0.0, 0.0, 1.0) == sq.strength);
  CHECK(sq(1.0, 0.0, 1.0) == 0.0);
  CHECK(sq(0.5, -1.0, 1.0) == 0.0);

  const auto rho = HardyWeight::corollary_rho(g, 0.1);
  CHECK(rho.strength == doctest::Approx(1.0 / 180.0));
  CHECK(rho(1.0, 0.3, 1.0) == doctest::Approx(rho.strength / 2.0));
  CHECK(HardyWeight::corollary_rho(g, 10.0).strength == doctest::Approx(1.0 / 16.0));

  const StripGeometry gn{1.0, -0.3};
  const auto neg = HardyWeight::negative_eps(gn);
  CHECK(neg.strength == doctest::Approx(3.0 * unit(1.0)));
  CHECK(neg(0.0, 0.0, 1.0) == neg.strength);
  CHECK(neg(0.3, 0.0, 1.0) == 0.0);
  CHECK(neg.breaks(1.0) == std::vector<double>{-0.3, 0.3});
  CHECK_THROWS_AS(HardyWeight::negative_eps(g), DomainError);
  CHECK(HardyWeight::zero()(0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("zero weight reproduces the transparent gap") {
  const StripGeometry g{1.0, 0.3};
  SolverConfig c = small_config();
  c.truncations = {Truncation::Transparent};
  const auto gap = threshold_gap(g, c);
  const auto h = hardy_form_check(g, HardyWeight::zero(), c);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(h.rungs[r].min_eig == doctest::Approx(gap.series[0].rungs[r].gap).epsilon(1e-9));
  }
}

TEST_CASE("Hardy check on a coarse ladder") {
  const SolverConfig c = small_config();
  const StripGeometry g{1.0, 0.0};
  const auto sq = hardy_form_check(g, HardyWeight::indicator_square(g), c);
  CHECK(sq.verdict == HardyVerdict::Holds);
  // A weight of 2 (pi/4)^2 on the square breaks positivity.
  const auto big = hardy_form_check(g, HardyWeight::indicator_square(g, 2.0 * unit(1.0)), c);
  CHECK(big.verdict == HardyVerdict::Fails);
}
