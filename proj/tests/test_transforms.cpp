#include <cmath>
#include <complex>
#include <stdexcept>

#include "dampreg/transforms.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace dampreg;
using testutil::max_diff;

TEST_CASE("point transform") {
  SystemParams p;
  p.lambda = 2.0;
  const PhaseState<2> s{Coord2{1, 0}, Coord2{0, 0}, 0.0};
  const auto a = damp_to_autonomous(s, p);
  CHECK(a.q == Coord2{1, 0});
  CHECK(a.v == Coord2{1, 0});
  const auto back = autonomous_to_damp(a, p);
  CHECK(back.q == Coord2{1, 0});
  CHECK(back.v == Coord2{0, 0});

  SystemParams still;
  still.lambda = 0.0;
  const PhaseState<3> s3{Coord3{0.3, -2, 1}, Coord3{4, 5, -6}, 7.5};
  CHECK(damp_to_autonomous(s3, still).q == s3.q);
  CHECK(damp_to_autonomous(s3, still).v == s3.v);
  CHECK(autonomous_to_damp(s3, still).v == s3.v);

  testutil::Rng rng(10);
  for (int n = 0; n < 500; ++n) {
    p.lambda = rng.uniform(0, 1);
    const PhaseState<3> x{rng.vec<3>(-2, 2), rng.vec<3>(-2, 2), rng.uniform(0, 10)};
    const auto X = damp_to_autonomous(x, p);
    const double e = std::exp(0.5 * p.lambda * x.t);
    CHECK(max_diff(X.q, x.q * e) < 1e-13 * e);
    CHECK(max_diff(X.v, (x.v + 0.5 * p.lambda * x.q) * e) < 1e-13 * e * 4);
    CHECK(X.t == x.t);
    const auto y = autonomous_to_damp(X, p);
    CHECK(max_diff(y.q, x.q) < 1e-14 * 4);
    CHECK(max_diff(y.v, x.v) < 1e-14 * 8);
  }
}

TEST_CASE("lc_forward and lc_inverse") {
  CHECK(lc_forward(Coord2{1, 0}) == Coord2{1, 0});
  CHECK(lc_forward(Coord2{0, 1}) == Coord2{-1, 0});
  CHECK(lc_forward(Coord2{1, 1}) == Coord2{0, 2});
  CHECK(lc_inverse(Coord2{1, 0}) == Coord2{1, 0});
  CHECK(max_diff(lc_inverse(Coord2{-1, 0}), Coord2{0, 1}) < 1e-15);
  CHECK(max_diff(lc_inverse(Coord2{0, 2}), Coord2{1, 1}) < 1e-15);
  CHECK(lc_inverse(Coord2{0, 0}) == Coord2{0, 0});

  testutil::Rng rng(11);
  for (int n = 0; n < 1000; ++n) {
    const double gamma = rng.uniform(0.2, 5.0);
    const Coord2 u = rng.scaled_vec<2>(-2, 2);
    const Coord2 z = lc_forward(u, gamma);
    const std::complex<double> w(u[0], u[1]);
    CHECK(max_diff(z, from_complex(gamma * w * w)) <= 1e-14 * norm(z));
    CHECK(std::abs(norm(z) - gamma * norm2(u)) <= 1e-14 * norm(z));
    CHECK(max_diff(z, gamma * (lc_matrix(u) * u)) <= 1e-14 * norm(z));
    const Coord2 v = lc_inverse(z, gamma);
    CHECK(max_diff(lc_forward(v, gamma), z) <= 1e-13 * norm(z));
    CHECK(v[0] >= 0.0);
  }
}

TEST_CASE("generalized lc maps") {
  testutil::Rng rng(12);
  for (int n = 0; n < 500; ++n) {
    const Coord2 u = rng.scaled_vec<2>(-1, 1);
    CHECK(gen_lc_forward(u, 1) == lc_forward(u, 1.0));
    CHECK(gen_lc_forward(u, 0) == u);
    for (int N = 0; N <= 4; ++N) {
      const Coord2 z = gen_lc_forward(u, N);
      const double rn = std::pow(norm(u), N + 1);
      CHECK(std::abs(norm(z) - rn) <= 1e-13 * rn);
      CHECK(max_diff(gen_lc_forward(gen_lc_inverse(z, N), N), z) <= 1e-12 * rn);
      // The nearest branch of the inverse recovers u itself.
      CHECK(max_diff(nearest_lc_branch(gen_lc_inverse(z, N), u, N), u) <= 1e-12 * norm(u));
    }
  }
}

TEST_CASE("lc velocity maps") {
  SystemParams p;
  p.c = 0.3;
  p.gamma = 1.0;
  CHECK(max_diff(lc_velocity_map(Coord2{1, 0}, Coord2{0, 2 * p.c}, p), Coord2{0, 1}) < 1e-15);
  CHECK(lc_velocity_map(Coord2{0.4, 0.2}, Coord2{0, 0}, p) == Coord2{0, 0});
  CHECK_THROWS_AS(lc_velocity_map(Coord2{0, 0}, Coord2{1, 0}, p), SingularInputError);

  // Finite-difference oracle along U(tau) = U0 + tau U': dZ/dt = (dZ/dtau) c / r.
  testutil::Rng rng(13);
  for (int n = 0; n < 200; ++n) {
    p.c = rng.uniform(0.1, 2);
    p.gamma = rng.uniform(0.5, 2);
    const Coord2 u = rng.vec<2>(), up = rng.vec<2>();
    const double h = 1e-5;
    const Coord2 dz = (lc_forward(u + h * up, p.gamma) - lc_forward(u - h * up, p.gamma)) / (2 * h);
    const double r = p.gamma * norm2(u);
    const Coord2 zdot = lc_physical_velocity(u, up, p);
    CHECK(max_diff(zdot, dz * (p.c / r)) < 1e-7 * (1 + norm(zdot)));
    CHECK(max_diff(lc_velocity_map(u, zdot, p), up) < 1e-12 * (1 + norm(up)));
  }
}

TEST_CASE("generalized lc velocity maps") {
  testutil::Rng rng(14);
  for (int N = 0; N <= 3; ++N)
    for (int n = 0; n < 100; ++n) {
      const Coord2 u = rng.vec<2>(), up = rng.vec<2>();
      const double h = 1e-5;
      const Coord2 dz = (gen_lc_forward(u + h * up, N) - gen_lc_forward(u - h * up, N)) / (2 * h);
      const double rate = (N + 1.0) * (N + 1.0) * std::pow(norm2(u), N);
      const Coord2 zdot = gen_lc_physical_velocity(u, up, N);
      CHECK(max_diff(zdot, dz / rate) < 1e-7 * (1 + norm(zdot)));
      CHECK(max_diff(gen_lc_velocity_map(u, zdot, N), up) < 1e-11 * (1 + norm(up)));
    }
}

TEST_CASE("ks_forward and ks_inverse") {
  CHECK(ks_forward(Coord4{1, 0, 0, 0}) == Coord3{1, 0, 0});
  CHECK(ks_forward(Coord4{0, 1, 0, 0}) == Coord3{-1, 0, 0});
  CHECK(ks_forward(Coord4{1, 1, 1, 1}) == Coord3{0, 0, 4});
  CHECK(ks_inverse(Coord3{1, 0, 0}) == Coord4{1, 0, 0, 0});
  CHECK(max_diff(ks_inverse(Coord3{2.5, 0, 0}), Coord4{std::sqrt(2.5), 0, 0, 0}) < 1e-15);
  CHECK(ks_inverse(Coord3{0, 0, 0}) == Coord4{0, 0, 0, 0});

  testutil::Rng rng(15);
  for (int n = 0; n < 1000; ++n) {
    const Coord4 u = rng.scaled_vec<4>(-1.5, 1.5);
    const Coord3 x = ks_forward(u);
    CHECK(std::abs(norm(x) - norm2(u)) <= 1e-14 * norm2(u));
    // X is the vector part of U star(U) with the k part dropped.
    const Quaternion q = quat_mul(to_quaternion(u), quat_star(to_quaternion(u)));
    CHECK(std::abs(q.u3) <= 1e-14 * norm2(u));
    CHECK(max_diff(x, Coord3{q.u0, q.u1, q.u2}) <= 1e-14 * norm2(u));
    CHECK(max_diff(ks_forward(ks_inverse(x)), x) <= 1e-13 * norm(x));
    // Fiber alignment keeps the image and lands on the reference point.
    const Coord4 v = ks_align_fiber(ks_inverse(x), u);
    CHECK(max_diff(ks_forward(v), x) <= 1e-13 * norm(x));
    CHECK(max_diff(v, u) <= 1e-12 * norm(u));
  }
  // Both sections are exercised.
  CHECK(max_diff(ks_forward(ks_inverse(Coord3{-3, 0.1, -0.2})), Coord3{-3, 0.1, -0.2}) < 1e-14);
  CHECK(max_diff(ks_forward(ks_inverse(Coord3{-3, 0, 0})), Coord3{-3, 0, 0}) < 1e-14);
}

TEST_CASE("ks velocity and momentum maps") {
  CHECK(ks_velocity_map(Coord4{0.3, 0.1, -0.4, 0.2}, Coord3{0, 0, 0}) == Coord4{});
  CHECK(ks_velocity_map(Coord4{1, 0, 0, 0}, Coord3{1, 0, 0}) == Coord4{2, 0, 0, 0});
  CHECK_THROWS_AS(ks_velocity_map(Coord4{}, Coord3{1, 0, 0}), SingularInputError);
  CHECK(ks_momentum_map(Coord4{0.3, 0.1, -0.4, 0.2}, Coord4{}) == Coord3{});
  CHECK(max_diff(ks_momentum_map(Coord4{1, 0, 0, 0}, Coord4{2, 0, 0, 0}), Coord3{1, 0, 0}) < 1e-15);
  CHECK_THROWS_AS(ks_momentum_map(Coord4{}, Coord4{1, 0, 0, 0}), SingularInputError);

  testutil::Rng rng(16);
  for (int n = 0; n < 1000; ++n) {
    const Coord4 u = rng.scaled_vec<4>(-1, 1);
    const Coord3 xdot = rng.vec<3>(-3, 3);
    const Coord4 up = ks_velocity_map(u, xdot);
    CHECK(std::abs(bilinear_constraint(u, up)) <= 1e-13 * norm(u) * norm(up));
    CHECK(max_diff(ks_physical_velocity(u, up), xdot) <= 1e-13 * (1 + norm(xdot)));
    // Constrained momenta map to a vanishing fourth component.
    const Coord4 full = ks_momentum_map_full(u, up);
    CHECK(std::abs(full[3]) <= 1e-13 * (1 + norm(full)));
    // Finite-difference oracle: dX/dtau = 4 r Xdot.
    const double h = 1e-6;
    const Coord3 dx = (ks_forward(u + h * up) - ks_forward(u - h * up)) / (2 * h);
    CHECK(max_diff(dx, 4.0 * norm2(u) * xdot) <= 1e-7 * (1 + norm(dx)));
  }
}

TEST_CASE("bilinear constraint") {
  const Coord4 u{0.3, -1.1, 0.4, 2.0};
  CHECK(bilinear_constraint(u, 2.5 * u) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bilinear_constraint(Coord4{1, 0, 0, 0}, Coord4{0, 0, 0, 1}) == 1.0);
  CHECK(bilinear_constraint(Coord4{}, Coord4{}) == 0.0);
}

TEST_CASE("bohlin maps") {
  CHECK(bohlin_forward(Coord2{1, 0}) == Coord2{1, 0});
  CHECK(bohlin_forward(Coord2{0, 1}) == Coord2{-1, 0});
  CHECK(max_diff(bohlin_velocity_map(Coord2{1, 0}, Coord2{0, 2}), Coord2{0, 1}) < 1e-15);
  CHECK_THROWS_AS(bohlin_velocity_map(Coord2{0, 0}, Coord2{0, 1}), SingularInputError);

  // d/dt = d/dtau / (4 |w|^2), so Zdot = 2 w w' / (4 |w|^2).
  testutil::Rng rng(17);
  for (int n = 0; n < 200; ++n) {
    const Coord2 w = rng.vec<2>(), wp = rng.vec<2>();
    const std::complex<double> cw(w[0], w[1]), cwp(wp[0], wp[1]);
    const Coord2 expect = from_complex(2.0 * cw * cwp / (4.0 * std::norm(cw)));
    CHECK(max_diff(bohlin_velocity_map(w, wp), expect) < 1e-12 * (1 + norm(expect)));
  }
}

TEST_CASE("time rates") {
  SystemParams p;
  CHECK(time_rate(Regularization::KustaanheimoStiefel, 1.0, p) == 4.0);
  p.n_power = 1;
  CHECK(time_rate(Regularization::PowerLaw, 1.0, p) == 4.0);
  p.c = 0.25;
  CHECK(time_rate(Regularization::LeviCivita, 1.0, p) == 4.0);
  for (double r : {0.0, 1e-6, 0.3, 2.0, 17.0})
    CHECK(time_rate(Regularization::PowerLaw, r, p) ==
          doctest::Approx(time_rate(Regularization::LeviCivita, r, p)).epsilon(1e-15));
  for (auto reg : {Regularization::LeviCivita, Regularization::KustaanheimoStiefel,
                   Regularization::BohlinSundman}) {
    CHECK(time_rate(reg, 0.0, p) == 0.0);
    CHECK_THROWS_AS(time_rate(reg, -1.0, p), std::invalid_argument);
  }
  p.n_power = 2;
  CHECK(time_rate(Regularization::PowerLaw, 0.0, p) == 0.0);
  CHECK(time_rate(Regularization::PowerLaw, 8.0, p) == doctest::Approx(9.0 * std::pow(8.0, 4.0 / 3.0)));
  CHECK(time_rate(Regularization::BohlinSundman, 2.0, p) == 8.0);
}
