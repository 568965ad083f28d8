#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dampreg/dynamics.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace dampreg;

namespace {

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> random_state(SystemId sys, testutil::Rng& rng) {
  std::vector<double> s(state_size(sys));
  for (auto& x : s) x = rng.uniform(-1.2, 1.2);
  if (system_info(sys).cointegrates_time) s.back() = rng.uniform(0, 3);
  return s;
}

// Rotates every d-dimensional block of the [q | v] part.
std::vector<double> rotate(const std::vector<double>& s, std::size_t d, const std::vector<double>& rot) {
  std::vector<double> out = s;
  for (std::size_t block = 0; block < 2; ++block)
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += rot[i * d + j] * s[block * d + j];
      out[block * d + i] = acc;
    }
  return out;
}

std::vector<double> rotation_matrix(std::size_t d, testutil::Rng& rng) {
  if (d == 2) {
    const double a = rng.uniform(0, 2 * std::numbers::pi);
    return {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)};
  }
  // Unit quaternion to rotation matrix.
  Coord4 q = rng.vec<4>();
  q = q / norm(q);
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
          2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
}

}  // namespace

TEST_CASE("system catalog") {
  for (SystemId sys : kAllSystems) {
    const auto& info = system_info(sys);
    CHECK(parse_system_id(info.name) == sys);
    CHECK(to_string(sys) == info.name);
    CHECK(state_size(sys) == 2 * info.coord_dim + (info.cointegrates_time ? 1 : 0));
  }
  CHECK_FALSE(parse_system_id("NotASystem").has_value());
  CHECK(state_size(SystemId::RegularizedKS) == 9);
  CHECK(state_size(SystemId::AutonomousKepler3D) == 6);
}

TEST_CASE("circular-orbit balance") {
  RhsContext ctx;
  const std::vector<double> s{1, 0, 0, 1};
  const auto d = rhs(SystemId::AutonomousKepler2D, 0.0, s, ctx);
  CHECK(max_gap(d, {0, 1, -1, 0}) < 1e-15);
  CHECK(max_gap(rhs(SystemId::DampedKepler2D, 0.0, s, ctx), d) < 1e-15);
}

TEST_CASE("kepler fields match the closed forms") {
  testutil::Rng rng(20);
  for (int n = 0; n < 200; ++n) {
    RhsContext ctx;
    ctx.params.m = rng.uniform(0.5, 2);
    ctx.params.k = rng.uniform(0.5, 2);
    ctx.params.lambda = rng.uniform(0, 0.5);
    const double mu = ctx.params.k / ctx.params.m, lam = ctx.params.lambda;
    const double t = rng.uniform(0, 5);
    const auto s = random_state(SystemId::DampedKepler3D, rng);
    const double r = std::hypot(s[0], s[1], s[2]);
    const auto damped = rhs(SystemId::DampedKepler3D, t, s, ctx);
    const auto autonomous = rhs(SystemId::AutonomousKepler3D, t, s, ctx);
    for (int i = 0; i < 3; ++i) {
      CHECK(damped[i] == s[3 + i]);
      const double grav = -mu * s[i] / (r * r * r);
      CHECK(damped[3 + i] == doctest::Approx(-lam * s[3 + i] + std::exp(-1.5 * lam * t) * grav).epsilon(1e-13));
      CHECK(autonomous[3 + i] == doctest::Approx(0.25 * lam * lam * s[i] + grav).epsilon(1e-13));
    }
  }
}

TEST_CASE("harmonic fields") {
  RhsContext ctx;
  ctx.params.omega = 1.3;
  ctx.params.lambda = 0.4;
  const std::vector<double> s{0.5, -0.2, 0.1, 0.7};
  const auto damped = rhs(SystemId::DampedHO2D, 2.0, s, ctx);
  const double w2 = 1.3 * 1.3;
  CHECK(damped[2] == doctest::Approx(-0.4 * 0.1 - w2 * 0.5));
  CHECK(damped[3] == doctest::Approx(-0.4 * 0.7 + w2 * 0.2));
  const std::vector<double> sh{0.5, -0.2, 0.1, 0.7, 0.0};
  const auto shifted = rhs(SystemId::ShiftedHO2D, 2.0, sh, ctx);
  const double ws = w2 - 0.04;
  CHECK(shifted[2] == doctest::Approx(-ws * 0.5));
  CHECK(shifted[3] == doctest::Approx(ws * 0.2));
  CHECK(shifted[4] == doctest::Approx(4 * (0.25 + 0.04)));
}

TEST_CASE("regularized fields") {
  RhsContext ctx;
  ctx.script_e = 0.7;
  ctx.params.lambda = 0.0;
  SUBCASE("KS at lambda = 0 is a harmonic oscillator of frequency^2 = 8 E") {
    const std::vector<double> s{0.3, -0.5, 0.2, 0.9, 0.1, 0.2, 0.3, 0.4, 0.0};
    const auto d = rhs(SystemId::RegularizedKS, 0.0, s, ctx);
    for (int i = 0; i < 4; ++i) CHECK(d[4 + i] == doctest::Approx(-8 * 0.7 * s[i]).epsilon(1e-15));
    CHECK(d[8] == doctest::Approx(4 * (0.09 + 0.25 + 0.04 + 0.81)));
  }
  SUBCASE("KS sextic term") {
    ctx.params.lambda = 0.3;
    const std::vector<double> s{0.3, -0.5, 0.2, 0.9, 0.1, 0.2, 0.3, 0.4, 0.0};
    const double r = 0.09 + 0.25 + 0.04 + 0.81;
    const auto d = rhs(SystemId::RegularizedKS, 0.0, s, ctx);
    for (int i = 0; i < 4; ++i)
      CHECK(d[4 + i] == doctest::Approx(-(8 * 0.7 - 3 * 0.09 * r * r) * s[i]).epsilon(1e-14));
  }
  SUBCASE("LC at the origin is finite") {
    ctx.params.lambda = 0.2;
    const std::vector<double> s{0, 0, 0.4, -0.1, 1.0};
    const auto d = rhs(SystemId::RegularizedLC, 0.0, s, ctx);
    CHECK(max_gap(d, {0.4, -0.1, 0, 0, 0}) == 0.0);
  }
  SUBCASE("LC at lambda = 0 has frequency^2 = E / (2 c^2)") {
    ctx.params.c = 0.6;
    const std::vector<double> s{0.8, -0.3, 0.1, 0.2, 0.0};
    const auto d = rhs(SystemId::RegularizedLC, 0.0, s, ctx);
    const double w2 = 0.7 / (2 * 0.36);
    CHECK(d[2] == doctest::Approx(-w2 * 0.8).epsilon(1e-15));
    CHECK(d[3] == doctest::Approx(w2 * 0.3).epsilon(1e-15));
    CHECK(d[4] == doctest::Approx((0.64 + 0.09) / 0.6));
  }
  SUBCASE("generalized LC with N = 1 equals LC with c = 1/4") {
    testutil::Rng rng(21);
    for (int n = 0; n < 200; ++n) {
      ctx.params.n_power = 1;
      ctx.params.c = 0.25;
      ctx.params.gamma = 1.0;
      ctx.params.lambda = rng.uniform(0, 1);
      ctx.script_e = rng.uniform(-1, 2);
      const auto s = random_state(SystemId::RegularizedLC, rng);
      CHECK(max_gap(rhs(SystemId::RegularizedLC, 0.0, s, ctx), rhs(SystemId::RegularizedGenLC, 0.0, s, ctx)) <
            1e-12);
    }
  }
  SUBCASE("generalized LC sign structure") {
    for (int nn = 1; nn <= 3; ++nn) {
      ctx.params.n_power = nn;
      const std::vector<double> s{0.6, 0.5, 0.0, 0.0, 0.0};
      ctx.params.lambda = 0.5;
      ctx.script_e = 0.0;
      auto d = rhs(SystemId::RegularizedGenLC, 0.0, s, ctx);
      const double r2 = 0.61;
      const double expect = 0.25 * 0.25 * (2 * nn + 1) * (nn + 1) * (nn + 1) * std::pow(r2, 2 * nn);
      CHECK(d[2] == doctest::Approx(expect * 0.6).epsilon(1e-14));
      ctx.params.lambda = 0.0;
      ctx.script_e = 0.9;
      d = rhs(SystemId::RegularizedGenLC, 0.0, s, ctx);
      CHECK(d[2] == doctest::Approx(-0.9 * 2 * nn * (nn + 1) * (nn + 1) * std::pow(r2, nn - 1) * 0.6).epsilon(1e-14));
    }
  }
}

TEST_CASE("bohlin image is a kepler field of strength E/4") {
  RhsContext ctx;
  ctx.kepler_energy = 2.0;
  const std::vector<double> s{3, 4, 0.1, 0.2};
  const auto d = rhs(SystemId::BohlinKepler2D, 0.0, s, ctx);
  CHECK(d[2] == doctest::Approx(-0.5 * 3 / 125.0));
  CHECK(d[3] == doctest::Approx(-0.5 * 4 / 125.0));
}

TEST_CASE("errors") {
  RhsContext ctx;
  CHECK_THROWS_AS(rhs(SystemId::AutonomousKepler2D, 0.0, std::vector<double>{0, 0, 1, 0}, ctx), CollisionError);
  CHECK_THROWS_AS(rhs(SystemId::DampedKepler3D, 0.0, std::vector<double>(6, 0.0), ctx), CollisionError);
  CHECK_THROWS_AS(rhs(SystemId::AutonomousKepler2D, 0.0, std::vector<double>{1, 0, 1}, ctx),
                  std::invalid_argument);
  CHECK_NOTHROW(rhs(SystemId::RegularizedKS, 0.0, std::vector<double>(9, 0.0), ctx));
  ctx.params.n_power = 0;
  CHECK_NOTHROW(rhs(SystemId::AutonomousPowerLaw2D, 0.0, std::vector<double>(4, 0.0), ctx));
}

TEST_CASE("autonomy and rotation equivariance") {
  testutil::Rng rng(22);
  for (SystemId sys : kAllSystems) {
    CAPTURE(to_string(sys));
    const auto& info = system_info(sys);
    RhsContext ctx;
    ctx.params.lambda = 0.3;
    ctx.params.n_power = 2;
    ctx.script_e = 0.4;
    ctx.kepler_energy = 0.8;
    for (int n = 0; n < 50; ++n) {
      const auto s = random_state(sys, rng);
      const auto a = rhs(sys, 0.3, s, ctx);
      const auto b = rhs(sys, 2.7, s, ctx);
      if (!info.explicit_time) CHECK(max_gap(a, b) == 0.0);
      if (sys == SystemId::DampedKepler2D || sys == SystemId::DampedPowerLaw2D) CHECK(max_gap(a, b) > 0.0);

      // KS coordinates rotate with the quaternion action; skip the field check there.
      if (sys == SystemId::RegularizedKS) continue;
      const auto rot = rotation_matrix(info.coord_dim, rng);
      const auto lhs = rhs(sys, 0.3, rotate(s, info.coord_dim, rot), ctx);
      const auto rhs_rot = rotate(a, info.coord_dim, rot);
      CHECK(max_gap(lhs, rhs_rot) < 1e-12 * (1 + max_gap(a, std::vector<double>(a.size(), 0.0))));
    }
  }
}

TEST_CASE("lagrangian residual") {
  RhsContext ctx;
  SUBCASE("zero state") {
    LagrangianSample z{0.0, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
    CHECK(lagrangian_residual(SystemId::RegularizedKS, z, ctx) == 0.0);
  }
  SUBCASE("closed-form KS oscillator") {
    ctx.script_e = 0.125;
    const std::vector<double> u0{0.7, -0.4, 0.5, 0.2};
    for (double tau : {0.0, 0.4, 1.3, 2.9}) {
      LagrangianSample s;
      s.time = tau;
      for (double x : u0) {
        s.q.push_back(x * std::cos(tau));
        s.v.push_back(-x * std::sin(tau));
        s.a.push_back(-x * std::cos(tau));
      }
      CHECK(lagrangian_residual(SystemId::RegularizedKS, s, ctx) < 1e-8);
      // A wrong acceleration is detected.
      s.a[0] += 1e-3;
      CHECK(lagrangian_residual(SystemId::RegularizedKS, s, ctx) > 1e-4);
    }
  }
  SUBCASE("every field solves its own Euler-Lagrange equation") {
    testutil::Rng rng(23);
    ctx.params.lambda = 0.2;
    ctx.params.n_power = 2;
    ctx.script_e = 0.6;
    ctx.kepler_energy = 1.1;
    for (SystemId sys : kAllSystems) {
      CAPTURE(to_string(sys));
      const std::size_t d = system_info(sys).coord_dim;
      for (int n = 0; n < 20; ++n) {
        const auto s = random_state(sys, rng);
        const double t = rng.uniform(0, 2);
        const auto f = rhs(sys, t, s, ctx);
        LagrangianSample ls{t, {s.begin(), s.begin() + d}, {s.begin() + d, s.begin() + 2 * d},
                            {f.begin() + d, f.begin() + 2 * d}};
        CHECK(lagrangian_residual(sys, ls, ctx) < 1e-9);
      }
    }
  }
}
