#include <doctest.h>

#include <cmath>

#include "graylap/schedule.hpp"
#include "graylap/types.hpp"

using namespace graylap;

namespace {

// Composite Simpson with many panels, independent of the cached table.
double reference(double s) {
  auto f = [](double x) { return x <= 0 || x >= 1 ? 0.0 : std::exp(-1.0 / (x * (1.0 - x))); };
  auto integrate = [&](double a, double b) {
    const int n = 20000;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  return integrate(0.0, s) / integrate(0.0, 1.0);
}

}  // namespace

TEST_CASE("bump endpoints and midpoint") {
  CHECK(std::abs(bump_schedule(0.0)) <= 1e-10);
  CHECK(std::abs(bump_schedule(1.0) - 1.0) <= 1e-10);
  CHECK(std::abs(bump_schedule(0.5) - 0.5) <= 1e-10);
}

TEST_CASE("bump is flat at both ends") {
  const double eps = 1e-3;
  CHECK((bump_schedule(eps) - bump_schedule(0.0)) / eps <= 1e-8);
  CHECK((bump_schedule(1.0) - bump_schedule(1.0 - eps)) / eps <= 1e-8);
  CHECK(bump_derivative(0.0) == 0.0);
  CHECK(bump_derivative(1.0) == 0.0);
  CHECK(bump_derivative(0.5) > 0.0);
}

TEST_CASE("bump is monotone and symmetric") {
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double s = i / 10000.0;
    const double b = bump_schedule(s);
    CHECK(b >= prev);
    prev = b;
    CHECK(std::abs(b + bump_schedule(1.0 - s) - 1.0) < 1e-14);
  }
}

TEST_CASE("cached table matches direct quadrature") {
  for (double s : {0.05, 0.13, 0.25, 0.377, 0.5, 0.61, 0.8, 0.93}) {
    CHECK(std::abs(bump_schedule(s) - reference(s)) < 1e-10);
  }
}

TEST_CASE("derivative agrees with finite differences") {
  for (double s : {0.2, 0.4, 0.5, 0.7}) {
    const double h = 1e-5;
    const double fd = (bump_schedule(s + h) - bump_schedule(s - h)) / (2 * h);
    CHECK(fd == doctest::Approx(bump_derivative(s)).epsilon(1e-6));
  }
}

TEST_CASE("out of range arguments clamp") {
  CHECK(bump_schedule(-0.5) == 0.0);
  CHECK(bump_schedule(1.5) == 1.0);
}

TEST_CASE("schedule kinds") {
  const auto c = Schedule::constant(2.5);
  CHECK(c(0.3) == 2.5);
  const auto b = Schedule::bump();
  CHECK(b(0.5) == doctest::Approx(0.5));
  const auto d = Schedule::delayed_bump(1.0, 1.5);
  CHECK(d(0.7) == 0.0);
  CHECK(d(1.25) == doctest::Approx(0.5));
  CHECK(d(1.5) == 1.0);
  CHECK(d(2.0) == 1.0);
  const auto l = Schedule::linear(0.0, 2.0);
  CHECK(l(0.5) == doctest::Approx(0.25));
  CHECK(l(3.0) == 1.0);
  CHECK_THROWS_AS(Schedule::delayed_bump(1.0, 1.0), ContractError);
  CHECK(parse_schedule_kind("delayed-bump") == ScheduleKind::delayed_bump);
  CHECK_THROWS_AS(parse_schedule_kind("cubic"), ConfigError);
  CHECK(d.describe() == "delayed_bump[1,1.5]");
}
