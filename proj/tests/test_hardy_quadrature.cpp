#include <doctest.h>

#include <cmath>

#include "dnstrip/errors.hpp"
#include "dnstrip/hardy_quadrature.hpp"

using namespace dnstrip;

TEST_CASE("failure demo: non-switched quotients collapse") {
  const StripGeometry g{1.0, 0.0};
  const auto rep = hardy_failure_demo(g, LayoutKind::NonSwitched, HardyWeight::indicator_square(g));
  REQUIRE(rep.sequence.size() == 8);
  CHECK(rep.decreasing);
  CHECK(rep.ratio < 0.05);
  // The transverse ground state makes the numerator the longitudinal energy
  // of the cutoff alone, which scales like 2^-k.
  for (std::size_t i = 1; i < rep.sequence.size(); ++i) {
    const double r = rep.sequence[i].numerator / rep.sequence[i - 1].numerator;
    CHECK(r == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("failure demo: switched quotients stay bounded below") {
  const StripGeometry g{1.0, 0.0};
  const auto rep = hardy_failure_demo(g, LayoutKind::Switched, HardyWeight::indicator_square(g));
  CHECK(rep.floor > 1.0);
  CHECK(rep.sequence.back().quotient >= rep.floor);
  CHECK_THROWS_AS(hardy_failure_demo(StripGeometry{1.0, -0.2}, LayoutKind::Switched,
                                     HardyWeight::indicator_square(g)),
                  DomainError);
}

TEST_CASE("failure demo: quadrature is converged") {
  const StripGeometry g{1.0, 0.0};
  const auto w = HardyWeight::corollary_rho(g);
  const auto a = hardy_failure_demo(g, LayoutKind::NonSwitched, w, 1, 4, 8);
  const auto b = hardy_failure_demo(g, LayoutKind::NonSwitched, w, 1, 4, 16);
  for (std::size_t i = 0; i < a.sequence.size(); ++i) {
    CHECK(a.sequence[i].quotient == doctest::Approx(b.sequence[i].quotient).epsilon(1e-8));
  }
}

TEST_CASE("test functions: derivatives match finite differences") {
  const double h = 1e-6;
  for (const auto& f : default_strip_functions(1.0)) {
    for (double x : {-1.7, -0.2, 0.4, 2.5}) {
      for (double y : {-0.6, 0.1, 0.9}) {
        const double fd = (f.f(x + h, y) - f.f(x - h, y)) / (2.0 * h);
        CHECK_MESSAGE(std::abs(fd - f.dfdx(x, y)) <= 1e-6 * (1.0 + std::abs(fd)), f.name);
      }
    }
  }
  for (const auto& f : default_line_functions()) {
    CHECK_MESSAGE(f.v(0.0) == doctest::Approx(0.0).epsilon(1e-15), f.name);
    for (double x : {-2.1, -0.3, 0.7, 3.2}) {
      const double fd = (f.v(x + h) - f.v(x - h)) / (2.0 * h);
      CHECK_MESSAGE(std::abs(fd - f.dv(x)) <= 1e-6 * (1.0 + std::abs(fd)), f.name);
    }
  }
  CHECK(default_strip_functions(1.0).size() == 10);
  CHECK(default_line_functions().size() == 10);
}

TEST_CASE("weighted and classical Hardy inequalities by quadrature") {
  const StripGeometry g{1.0, 0.0};
  const auto rep = lemma_hardy_quadrature_check(g, default_strip_functions(1.0), default_line_functions(), -1.0, 1.0);
  CHECK(rep.strip.size() == 10);
  CHECK(rep.line.size() == 10);
  CHECK(rep.holds);
  CHECK(rep.stable);
  CHECK(rep.max_ratio < 1.0);
  CHECK(rep.max_refinement_change <= 1e-4);
  for (const auto& r : rep.line) CHECK(r.ratio > 0.0);
}

TEST_CASE("classical Hardy ratio for x exp(-x^2)") {
  // int x^-2 v^2 = sqrt(pi/2), 4 int v'^2 = 4 * (3/4) sqrt(pi/2): ratio 1/3.
  const StripGeometry g{1.0, 0.0};
  const TestFunction1D v{"gauss", [](double x) { return x * std::exp(-x * x); },
                         [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); }};
  const auto rep = lemma_hardy_quadrature_check(g, {}, {v}, -1.0, 1.0);
  REQUIRE(rep.line.size() == 1);
  CHECK(rep.line[0].ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}
