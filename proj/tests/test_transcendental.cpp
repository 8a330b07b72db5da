#include <doctest.h>

#include <chrono>
#include <cmath>

#include "dnstrip/errors.hpp"
#include "dnstrip/transcendental.hpp"

using namespace dnstrip;

namespace {

const double kQuarterPi = kPi / 4.0;
const double kUnit = kQuarterPi * kQuarterPi;  // (pi/4)^2 at a = 1

ImplicitEqParams params(double eps, double theta, double a = 1.0) {
  return ImplicitEqParams::make(StripGeometry{a, eps}, theta);
}

}  // namespace

TEST_CASE("g1 values") {
  const auto p = params(0.0, kQuarterPi);
  CHECK(g1(p.frame.q_plus, p) == 0.0);
  // (pi/4) tanh(sqrt2 pi / 4), evaluated independently.
  CHECK(g1(0.0, p) == doctest::Approx(0.6317091037746281).epsilon(1e-13));
  CHECK(g1(0.0, params(1.0 - 1e-12, kQuarterPi)) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(g1(p.frame.q_plus * 1.0001, p), DomainError);
}

TEST_CASE("g2 values and poles") {
  const auto p = params(0.0, kQuarterPi);
  CHECK(g2(-p.frame.q_minus, p) == 0.0);
  // (pi/4) / sqrt2 * tan(pi/4).
  CHECK(g2(0.0, p) == doctest::Approx(0.5553603672697957).epsilon(1e-13));
  CHECK_THROWS_AS(g2(-p.frame.q_minus * 1.01, p), DomainError);

  // g2(0, eps, pi/4) grows without bound as eps -> a.
  double prev = 0.0;
  for (double eps : {0.5, 0.9, 0.99, 0.999}) {
    const double v = g2(0.0, params(eps, kQuarterPi));
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 100.0);

  // Exactly at the pole: tan argument pi(1 + t)/4 = pi/2 at t = 1 is out of
  // range for the frame, so place one by choosing lambda instead.
  const double flank = p.flank_length();
  const double lambda_pole = (kPi / 2.0 / flank) * (kPi / 2.0 / flank) - p.frame.q_minus;
  CHECK_THROWS_AS(g2(lambda_pole, p), PoleError);
}

TEST_CASE("the ratio g1/g2 at lambda = 0, eps = 0, theta = pi/4") {
  const auto p = params(0.0, kQuarterPi);
  const double ratio = g1(0.0, p) / g2(0.0, p);
  const double closed = std::sqrt(2.0) * std::tanh(std::sqrt(2.0) * kPi / 4.0);
  CHECK(std::abs(ratio - closed) < 1e-12);
  CHECK(ratio > 1.0);
}

TEST_CASE("monotonicity in lambda at eps = 0, theta = pi/4") {
  const auto p = params(0.0, kQuarterPi);
  // First pole of g2 beyond q+ here, so [0, q+] is pole free.
  const double flank = p.flank_length();
  const double first_pole = (kPi / 2.0 / flank) * (kPi / 2.0 / flank) - p.frame.q_minus;
  const double top = std::min(p.frame.q_plus, first_pole);
  double g1_prev = g1(0.0, p);
  double g2_prev = g2(0.0, p);
  for (int i = 1; i < 1000; ++i) {
    const double lam = top * i / 1000.0;
    const double a = g1(lam, p);
    const double b = g2(lam, p);
    CHECK(a < g1_prev);
    CHECK(b > g2_prev);
    g1_prev = a;
    g2_prev = b;
  }
}

TEST_CASE("monotonicity in eps at lambda = 0, theta = pi/4") {
  double g1_prev = g1(0.0, params(0.0, kQuarterPi));
  double g2_prev = g2(0.0, params(0.0, kQuarterPi));
  for (int i = 1; i <= 200; ++i) {
    const auto p = params(0.9 * i / 200.0, kQuarterPi);
    CHECK(g1(0.0, p) < g1_prev);
    CHECK(g2(0.0, p) > g2_prev);
    g1_prev = g1(0.0, p);
    g2_prev = g2(0.0, p);
  }
}

TEST_CASE("lambda(v0) by matching") {
  // Frozen from an independent bracketing solve of the same condition.
  const auto r = lambda_v0(params(0.0, kQuarterPi));
  CHECK(r.value == doctest::Approx(0.024325036264703503).epsilon(1e-11));
  CHECK(r.value / kUnit == doctest::Approx(0.039).epsilon(0.015));
  CHECK(r.bracket_lo <= r.value);
  CHECK(r.value <= r.bracket_hi);

  const auto best = lambda_v0(params(0.0, 0.774));
  CHECK(best.value == doctest::Approx(0.024495957897005042).epsilon(1e-11));
  CHECK(best.value / kUnit == doctest::Approx(0.040).epsilon(0.01 / 0.4));

  CHECK(lambda_v0(params(0.03, kQuarterPi)).value == doctest::Approx(0.01225669967479912).epsilon(1e-10));
}

TEST_CASE("lambda(v0) reaches zero at eps = t1 a") {
  const double t1 = solve_t1().value;
  const auto r = lambda_v0(params(t1 - 1e-9, kQuarterPi));
  CHECK(r.value / kUnit < 1e-6);
  CHECK_THROWS_AS(lambda_v0(params(t1 + 1e-6, kQuarterPi)), NoRootError);
}

TEST_CASE("lambda(v0) residual is small relative to the matching function scale") {
  const auto p = params(0.0, kQuarterPi);
  const auto r = lambda_v0(p, 1e-12);
  double scale = 0.0;
  for (int i = 0; i <= 256; ++i) scale = std::max(scale, std::abs(matching_function(p.frame.q_plus * i / 256.0, p)));
  CHECK(r.residual <= 1e-12 * scale);
}

TEST_CASE("negative endpoint ground state is reported by the full-interval route only") {
  const auto p = params(0.0, kPi / 6.0);
  CHECK(matching_function(0.0, p) < 0.0);
  CHECK_THROWS_AS(lambda_v0(p), NoRootError);
  CHECK(endpoint_ground_state(p).value == doctest::Approx(-0.004069903953279145).epsilon(1e-9));
  // Where lambda(v0) > 0 both routes agree.
  const auto q = params(0.0, 0.774);
  CHECK(std::abs(endpoint_ground_state(q).value - lambda_v0(q).value) < 1e-13);
}

TEST_CASE("s1") {
  const auto start = std::chrono::steady_clock::now();
  const auto r = solve_s1();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.value == doctest::Approx(0.039434263463720774).epsilon(1e-11));
  CHECK(std::abs(r.value - 0.039) < 0.0005);
  CHECK(ms < 10.0);

  // Signs at the ends of (0, 1): 0.80432 - 0.70711 > 0 at s = 0 and -sqrt(1.5) tan(...) < 0 at s = 1.
  const double c = kPi / (2.0 * std::sqrt(2.0));
  CHECK(std::tanh(c) - std::sqrt(0.5) * std::tan(c * std::sqrt(0.5)) == doctest::Approx(0.8043170116950651 - 0.7071067811865475));
}

TEST_CASE("s1 agrees with lambda(v0) in units of (pi/4a)^2 for several a") {
  const double tol = 1e-12;
  const double s1 = solve_s1(tol).value;
  for (double a : {0.5, 1.0, 2.0}) {
    const StripGeometry g{a, 0.0};
    const auto r = lambda_v0(ImplicitEqParams::make(g, kQuarterPi), tol);
    CHECK(std::abs(r.value / g.threshold() - s1) < 10.0 * tol);
  }
}

TEST_CASE("t1 from the general matching condition") {
  const auto r = solve_t1();
  CHECK(r.value == doctest::Approx(0.06143804424153609).epsilon(1e-10));
  CHECK(std::abs(r.value - 0.061) < 0.0005);

  // Independent dimensionless route: tanh(pi(1-t)/(2 sqrt2)) = sqrt(1/2) tan(pi(1+t)/4).
  auto derived = [](double t) {
    return std::tanh(kPi * (1.0 - t) / (2.0 * std::sqrt(2.0))) - std::sqrt(0.5) * std::tan(kPi * (1.0 + t) / 4.0);
  };
  CHECK(derived(r.value - 1e-7) > 0.0);
  CHECK(derived(r.value + 1e-7) < 0.0);

  // The variant with tan argument pi(1+t)/(2 sqrt2), multiplied through by the
  // cosine, has no root on (0, 1): it is negative throughout.
  auto variant = [](double t) {
    const double arg = kPi * (1.0 + t) / (2.0 * std::sqrt(2.0));
    return std::tanh(kPi * (1.0 - t) / (2.0 * std::sqrt(2.0))) * std::cos(arg) - std::sqrt(0.5) * std::sin(arg);
  };
  for (int i = 0; i < 1000; ++i) CHECK(variant(i / 1000.0) < 0.0);
}

TEST_CASE("t1 brackets: positive lambda(v0) at t = 0, sign change before t = 1") {
  CHECK(matching_function(0.0, params(0.0, kQuarterPi)) > 0.0);
  CHECK(matching_function(0.0, params(0.999, kQuarterPi)) < 0.0);
}

TEST_CASE("tighter tolerance gives the same roots with smaller residual") {
  const auto loose = solve_s1(1e-6);
  const auto tight = solve_s1(1e-10);
  CHECK(std::abs(loose.value - tight.value) < 1e-6);
  CHECK(tight.residual <= loose.residual + 1e-15);
}

TEST_CASE("eps_bound fails when lambda(v0) is not positive at eps = 0") {
  CHECK_THROWS_AS(eps_bound(kPi / 6.0), NoRootError);
  CHECK_NOTHROW(eps_bound(0.759));
}
