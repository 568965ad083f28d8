#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dampreg/integrate.hpp"
#include "doctest.h"

using namespace dampreg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IntegratorConfig tight(double t_end) {
  IntegratorConfig c;
  c.t_end = t_end;
  c.h_max = 0.1;
  return c;
}

double state_gap(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rk4_error(int steps) {
  RhsContext ctx;
  ctx.params.lambda = 0.0;
  ctx.script_e = 0.125;
  const std::vector<double> s0{0.7, -0.4, 0.5, 0.2, 0, 0, 0, 0, 0};
  IntegratorConfig cfg;
  cfg.method = Method::RK4;
  cfg.h_init = cfg.h_min = cfg.h_max = kTwoPi / steps;
  cfg.t_end = kTwoPi;
  const Trajectory t = integrate(SystemId::RegularizedKS, s0, ctx, cfg);
  return state_gap(t.samples.back().state, s0, 8);
}

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  c.rel_tol = 0.0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("rel_tol"), std::invalid_argument);
  c = IntegratorConfig{};
  c.h_min = 1.0;
  c.h_max = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = IntegratorConfig{};
  c.max_steps = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("max_steps"), std::invalid_argument);
}

TEST_CASE("KS harmonic oscillator returns after 2 pi") {
  RhsContext ctx;
  ctx.params.lambda = 0.0;
  ctx.script_e = 0.125;
  const std::vector<double> s0{0.7, -0.4, 0.5, 0.2, 0, 0, 0, 0, 0};
  const Trajectory t = integrate(SystemId::RegularizedKS, s0, ctx, tight(kTwoPi));
  REQUIRE(t.status == Status::Completed);
  CHECK(t.samples.back().time == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(state_gap(t.samples.back().state, s0, 4) < 1e-8);
  // Mid-way the oscillator follows cos(tau).
  for (const Sample& s : t.samples)
    CHECK(std::abs(s.state[0] - 0.7 * std::cos(s.time)) < 1e-9);
}

TEST_CASE("circular Kepler orbit") {
  RhsContext ctx;
  ctx.params.lambda = 0.0;
  const std::vector<double> s0{1, 0, 0, 1};
  const Trajectory t = integrate(SystemId::AutonomousKepler2D, s0, ctx, tight(kTwoPi));
  REQUIRE(t.status == Status::Completed);
  CHECK(state_gap(t.samples.back().state, s0, 2) < 1e-7);
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].time > t.samples[i - 1].time);
  CHECK(t.physical_time(t.samples.size() - 1) == t.samples.back().time);
}

TEST_CASE("conservation over ten periods") {
  RhsContext ctx;
  ctx.params.lambda = 0.1;
  const std::vector<double> s0{1, 0, 0, 0.8};
  const Trajectory t = integrate(SystemId::AutonomousKepler2D, s0, ctx, tight(40.0));
  REQUIRE(t.status == Status::Completed);
  const double e0 = *t.samples.front().conserved.script_e;
  const double l0 = t.samples.front().conserved.ang_mom.at(0);
  double de = 0.0, dl = 0.0;
  for (const Sample& s : t.samples) {
    de = std::max(de, std::abs(*s.conserved.script_e - e0) / std::abs(e0));
    dl = std::max(dl, std::abs(s.conserved.ang_mom.at(0) - l0));
  }
  CHECK(de < 1e-9);
  CHECK(dl < 1e-10);
}

TEST_CASE("RK4 is fourth order") {
  const double ratio = rk4_error(40) / rk4_error(80);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("radial fall aborts the singular system") {
  RhsContext ctx;
  ctx.params.lambda = 0.01;
  const Trajectory t = integrate(SystemId::DampedKepler2D, std::vector<double>{1, 0, 0, 0}, ctx, tight(5.0));
  CHECK((t.status == Status::CollisionAbort || t.status == Status::StepUnderflow));
  CHECK(t.samples.back().time < 5.0);
  CHECK_FALSE(t.message.empty());

}

TEST_CASE("step cap") {
  RhsContext ctx;
  IntegratorConfig c = tight(100.0);
  c.max_steps = 10;
  const Trajectory t = integrate(SystemId::AutonomousKepler2D, std::vector<double>{1, 0, 0, 1}, ctx, c);
  CHECK(t.status == Status::MaxSteps);
}

TEST_CASE("physical-time end condition") {
  RhsContext ctx;
  ctx.params.lambda = 0.0;
  ctx.script_e = 0.5;
  IntegratorConfig c = tight(3.0);
  c.end = EndCondition::PhysicalTime;
  const Trajectory t =
      integrate(SystemId::RegularizedKS, std::vector<double>{1, 0, 0, 0, 0, 0.3, 0, 0, 0}, ctx, c);
  REQUIRE(t.status == Status::Completed);
  CHECK(t.samples.back().state.back() == doctest::Approx(3.0).epsilon(1e-12));
  for (std::size_t i = 1; i < t.samples.size(); ++i)
    CHECK(t.samples[i].state.back() > t.samples[i - 1].state.back());
}

TEST_CASE("hermite interpolation is exact for cubics") {
  auto f = [](double x) { return 1 - 2 * x + 0.5 * x * x + 0.3 * x * x * x; };
  auto df = [](double x) { return -2 + x + 0.9 * x * x; };
  Sample a{0.4, {f(0.4)}, {df(0.4)}, {}};
  Sample b{1.1, {f(1.1)}, {df(1.1)}, {}};
  for (double x : {0.4, 0.5, 0.77, 1.1}) CHECK(hermite_interpolate(a, b, x)[0] == doctest::Approx(f(x)).epsilon(1e-14));
}

TEST_CASE("paired runs") {
  PairScenario s;
  s.family = PairFamily::LeviCivita;
  s.params.lambda = 0.01;
  s.position = {1, 0};
  s.velocity = {0, 0.8};
  s.config = tight(20.0);
  SUBCASE("LC agrees with the direct run") {
    const PairResult r = integrate_pair(s);
    REQUIRE(r.direct.status == Status::Completed);
    REQUIRE(r.regularized.status == Status::Completed);
    CHECK(r.mapped.samples.size() == r.direct.samples.size());
    CHECK(r.max_position_gap < 1e-6);
    CHECK(r.regularized.samples.back().state.back() == doctest::Approx(20.0).epsilon(1e-12));
  }
  SUBCASE("lambda = 0") {
    s.params.lambda = 0.0;
    CHECK(integrate_pair(s).max_position_gap < 1e-8);
  }
  SUBCASE("collision passage") {
    s.velocity = {0, 0};
    s.damped_direct_leg = true;
    s.config = tight(3.0);
    const PairResult r = integrate_pair(s);
    CHECK((r.direct.status == Status::CollisionAbort || r.direct.status == Status::StepUnderflow));
    REQUIRE(r.regularized.status == Status::Completed);
    double bound = 0.0;
    for (const Sample& x : r.regularized.samples)
      for (std::size_t i = 0; i < 4; ++i) bound = std::max(bound, std::abs(x.state[i]));
    CHECK(bound < 10.0);
  }
  SUBCASE("map_back inverts the initial regularization") {
    s.family = PairFamily::KustaanheimoStiefel;
    s.position = {1, 0.2, -0.3};
    s.velocity = {0.1, 0.8, 0.3};
    RhsContext ctx;
    const auto reg0 = regularized_initial_state(s, ctx);
    CHECK(reg0.size() == 9);
    CHECK(reg0.back() == 0.0);
    const auto back = map_back(s, reg0);
    const std::vector<double> expect{1, 0.2, -0.3, 0.1, 0.8, 0.3};
    CHECK(state_gap(back, expect, 6) < 1e-14);
    CHECK(regularized_system(s.family) == SystemId::RegularizedKS);
    CHECK(direct_system(s) == SystemId::AutonomousKepler3D);
    s.damped_direct_leg = true;
    CHECK(direct_system(s) == SystemId::DampedKepler3D);
  }
}
