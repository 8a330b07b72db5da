#include <doctest.h>

#include <cmath>

#include "dnstrip/errors.hpp"
#include "dnstrip/optimize.hpp"
#include "dnstrip/transcendental.hpp"

using namespace dnstrip;

TEST_CASE("golden section on a parabola") {
  std::vector<ScanPoint> hist;
  const auto p = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-8, &hist);
  CHECK(std::abs(p.theta - 0.3) < 1e-8);
  // One evaluation per shrink by 1/phi after the first two.
  const double shrinks = std::ceil(std::log(1e-8) / std::log((std::sqrt(5.0) - 1.0) / 2.0));
  CHECK(hist.size() == static_cast<std::size_t>(shrinks) + 2);
  CHECK_THROWS_AS(golden_section_max([](double) { return 0.0; }, 1.0, 0.0, 1e-3), DomainError);
}

TEST_CASE("maximize_over_theta finds an interior maximum") {
  const auto r = maximize_over_theta([](double t) { return std::sin(3.0 * t); }, ThetaScanOptions{32, 1e-9});
  CHECK(r.theta_star == doctest::Approx(kPi / 6.0).epsilon(1e-8));
  CHECK(r.curve.size() == 32);
  CHECK(r.curve.front().theta > 0.0);
  CHECK(r.curve.back().theta < kPi / 3.0);
}

TEST_CASE("objectives tie back to the roots") {
  CHECK(hardy_objective(1.0, kPi / 4.0) == doctest::Approx(solve_s1().value).epsilon(1e-10));
  CHECK(hardy_objective(2.5, kPi / 4.0) == doctest::Approx(solve_s1().value).epsilon(1e-10));
  CHECK(eps_objective(kPi / 4.0) == doctest::Approx(solve_t1().value).epsilon(1e-10));
  // Near pi/6 lambda(v0) is negative.
  CHECK(hardy_objective(1.0, kPi / 6.0) == 0.0);
}

TEST_CASE("optimal angles") {
  const auto h = optimal_theta_hardy(StripGeometry{1.0, 0.0});
  CHECK(h.theta_star == doctest::Approx(0.77415).epsilon(2e-4));
  CHECK(h.objective_star == doctest::Approx(0.039711).epsilon(1e-4));
  const auto e = optimal_theta_eps(StripGeometry{1.0, 0.0});
  CHECK(e.theta_star == doctest::Approx(0.75940).epsilon(2e-4));
  CHECK(e.objective_star == doctest::Approx(0.063209).epsilon(1e-4));

  // Interior maxima, not grid edges.
  CHECK(h.theta_star > h.curve.front().theta);
  CHECK(h.theta_star < h.curve.back().theta);
  CHECK_THROWS_AS(optimal_theta_hardy(StripGeometry{1.0, 0.1}), DomainError);
}

TEST_CASE("grid doubling does not move the maximizer") {
  const auto a = optimal_theta_hardy(StripGeometry{1.0, 0.0}, ThetaScanOptions{64, 1e-6});
  const auto b = optimal_theta_hardy(StripGeometry{1.0, 0.0}, ThetaScanOptions{128, 1e-6});
  CHECK(std::abs(a.theta_star - b.theta_star) < 1e-5);
  CHECK(std::abs(a.objective_star - b.objective_star) < 1e-10);
}

TEST_CASE("objective curve is continuous where positive") {
  const auto h = optimal_theta_hardy(StripGeometry{1.0, 0.0});
  const double step = h.curve[1].theta - h.curve[0].theta;
  for (std::size_t i = 1; i < h.curve.size(); ++i) {
    if (h.curve[i].objective > 0.0 && h.curve[i - 1].objective > 0.0) {
      CHECK(std::abs(h.curve[i].objective - h.curve[i - 1].objective) < step);
    }
  }
}

TEST_CASE("theta scan: serial and parallel agree bitwise") {
  ThetaScanOptions o{48, 1e-5, ExecPolicy::Serial};
  const auto s = optimal_theta_eps(StripGeometry{1.0, 0.0}, o);
  o.policy = ExecPolicy::Parallel;
  const auto p = optimal_theta_eps(StripGeometry{1.0, 0.0}, o);
  CHECK(s.theta_star == p.theta_star);
  for (std::size_t i = 0; i < s.curve.size(); ++i) CHECK(s.curve[i].objective == p.curve[i].objective);
}
