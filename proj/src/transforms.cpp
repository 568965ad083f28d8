#include "dampreg/transforms.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace dampreg {

namespace {

using cplx = std::complex<double>;

void require_nonzero(double r2, const char* what) {
  if (!(r2 > 0.0)) throw SingularInputError(std::string(what) + ": undefined at |U| = 0");
}

}  // namespace

void SystemParams::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("params." + field + ": " + why);
  };
  if (!(m > 0.0) || !std::isfinite(m)) fail("m", "must be positive and finite");
  if (!std::isfinite(k)) fail("k", "must be finite");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda", "must be non-negative");
  if (n_power < 0) fail("n_power", "must be a non-negative integer");
  if (!(c > 0.0) || !std::isfinite(c)) fail("c", "must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("gamma", "must be positive");
  if (!std::isfinite(omega)) fail("omega", "must be finite");
}

template <std::size_t D>
PhaseState<D> damp_to_autonomous(const PhaseState<D>& s, const SystemParams& p) {
  const double g = std::exp(0.5 * p.lambda * s.t);
  PhaseState<D> out;
  out.q = g * s.q;
  out.v = g * (s.v + (0.5 * p.lambda) * s.q);
  out.t = s.t;
  return out;
}

template <std::size_t D>
PhaseState<D> autonomous_to_damp(const PhaseState<D>& s, const SystemParams& p) {
  const double g = std::exp(-0.5 * p.lambda * s.t);
  PhaseState<D> out;
  out.q = g * s.q;
  out.v = g * s.v - (0.5 * p.lambda) * out.q;
  out.t = s.t;
  return out;
}

template PhaseState<2> damp_to_autonomous(const PhaseState<2>&, const SystemParams&);
template PhaseState<3> damp_to_autonomous(const PhaseState<3>&, const SystemParams&);
template PhaseState<2> autonomous_to_damp(const PhaseState<2>&, const SystemParams&);
template PhaseState<3> autonomous_to_damp(const PhaseState<3>&, const SystemParams&);

Coord2 lc_forward(const Coord2& u, double gamma) {
  return Coord2{gamma * (u[0] * u[0] - u[1] * u[1]), gamma * 2.0 * u[0] * u[1]};
}

Coord2 lc_inverse(const Coord2& z, double gamma) {
  Coord2 u = from_complex(std::sqrt(to_complex(z) / gamma));
  // std::sqrt follows the sign of a signed-zero imaginary part on the cut.
  if (u[0] == 0.0 && u[1] < 0.0) u[1] = -u[1];
  u[0] = std::abs(u[0]);
  return u;
}

Coord2 lc_velocity_map(const Coord2& u, const Coord2& zdot, const SystemParams& p) {
  require_nonzero(norm2(u), "lc_velocity_map");
  const double r = p.gamma * norm2(u);
  const cplx dz_dtau = (r / p.c) * to_complex(zdot);
  return from_complex(dz_dtau / (2.0 * p.gamma * to_complex(u)));
}

Coord2 lc_physical_velocity(const Coord2& u, const Coord2& u_prime, const SystemParams& p) {
  require_nonzero(norm2(u), "lc_physical_velocity");
  const double r = p.gamma * norm2(u);
  return from_complex((p.c / r) * 2.0 * p.gamma * to_complex(u) * to_complex(u_prime));
}

Coord2 gen_lc_forward(const Coord2& u, int n) { return uhat_n(u, n) * u; }

Coord2 gen_lc_inverse(const Coord2& z, int n) {
  if (n < 0) throw std::invalid_argument("gen_lc_inverse requires N >= 0");
  if (n == 0) return z;
  const double modulus = std::pow(norm(z), 1.0 / (n + 1));
  const double angle = std::atan2(z[1], z[0]) / (n + 1);
  return Coord2{modulus * std::cos(angle), modulus * std::sin(angle)};
}

namespace {

cplx cpow_int(cplx base, int e) {
  cplx out{1.0, 0.0};
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Coord2 gen_lc_velocity_map(const Coord2& u, const Coord2& zdot, int n) {
  if (n < 0) throw std::invalid_argument("gen_lc_velocity_map requires N >= 0");
  if (n > 0) require_nonzero(norm2(u), "gen_lc_velocity_map");
  const double np1 = n + 1.0;
  const double g = np1 * np1 * std::pow(norm2(u), n);
  return from_complex(g * to_complex(zdot) / (np1 * cpow_int(to_complex(u), n)));
}

Coord2 gen_lc_physical_velocity(const Coord2& u, const Coord2& u_prime, int n) {
  if (n < 0) throw std::invalid_argument("gen_lc_physical_velocity requires N >= 0");
  if (n > 0) require_nonzero(norm2(u), "gen_lc_physical_velocity");
  const double np1 = n + 1.0;
  const double g = np1 * np1 * std::pow(norm2(u), n);
  return from_complex(np1 * cpow_int(to_complex(u), n) * to_complex(u_prime) / g);
}

Coord2 nearest_lc_branch(const Coord2& u, const Coord2& ref, int n) {
  const int roots = n + 1;
  Coord2 best = u;
  double best_d = norm2(u - ref);
  for (int j = 1; j < roots; ++j) {
    const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi * j / roots);
    const Coord2 cand = from_complex(to_complex(u) * rot);
    const double d = norm2(cand - ref);
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  }
  return best;
}

Coord3 ks_forward(const Coord4& u) {
  return Coord3{
      u[0] * u[0] - u[1] * u[1] - u[2] * u[2] + u[3] * u[3],
      2.0 * (u[0] * u[1] - u[2] * u[3]),
      2.0 * (u[0] * u[2] + u[1] * u[3]),
  };
}

Coord4 ks_inverse(const Coord3& x) {
  const double r = norm(x);
  if (r == 0.0) return Coord4{};
  if (x[0] >= 0.0) {
    const double u0 = std::sqrt(0.5 * (r + x[0]));
    return Coord4{u0, x[1] / (2.0 * u0), x[2] / (2.0 * u0), 0.0};
  }
  const double u1 = std::sqrt(0.5 * (r - x[0]));
  return Coord4{x[1] / (2.0 * u1), u1, 0.0, x[2] / (2.0 * u1)};
}

Coord4 ks_velocity_map(const Coord4& u, const Coord3& xdot) {
  require_nonzero(norm2(u), "ks_velocity_map");
  const Coord4 xdot4{xdot[0], xdot[1], xdot[2], 0.0};
  return 2.0 * (transpose(ks_matrix(u)) * xdot4);
}

Coord3 ks_physical_velocity(const Coord4& u, const Coord4& u_prime) {
  const double r = norm2(u);
  require_nonzero(r, "ks_physical_velocity");
  const Coord4 xd = (ks_matrix(u) * u_prime) / (2.0 * r);
  return Coord3{xd[0], xd[1], xd[2]};
}

Coord4 ks_momentum_map_full(const Coord4& u, const Coord4& p_tilde) {
  const double r = norm2(u);
  require_nonzero(r, "ks_momentum_map");
  return (ks_matrix(u) * p_tilde) / (2.0 * r);
}

Coord3 ks_momentum_map(const Coord4& u, const Coord4& p_tilde) {
  const Coord4 p = ks_momentum_map_full(u, p_tilde);
  return Coord3{p[0], p[1], p[2]};
}

double bilinear_constraint(const Coord4& u, const Coord4& up) {
  return u[0] * up[3] - u[3] * up[0] + u[2] * up[1] - u[1] * up[2];
}

Coord4 ks_align_fiber(const Coord4& u, const Coord4& ref) {
  // The fiber through u is u cos(phi) + (u k) sin(phi), with u k orthogonal to u.
  const Coord4 uk = to_coord(quat_mul(to_quaternion(u), Quaternion{0.0, 0.0, 0.0, 1.0}));
  const double phi = std::atan2(dot(uk, ref), dot(u, ref));
  return std::cos(phi) * u + std::sin(phi) * uk;
}

Coord2 bohlin_forward(const Coord2& w) { return lc_forward(w, 1.0); }

Coord2 bohlin_velocity_map(const Coord2& w, const Coord2& w_prime) {
  require_nonzero(norm2(w), "bohlin_velocity_map");
  return from_complex(to_complex(w_prime) / (2.0 * std::conj(to_complex(w))));
}

double time_rate(Regularization reg, double r, const SystemParams& p) {
  if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("time_rate: r must be non-negative");
  switch (reg) {
    case Regularization::LeviCivita:
      return r / p.c;
    case Regularization::PowerLaw: {
      const double np1 = p.n_power + 1.0;
      return np1 * np1 * std::pow(r, p.power_exponent());
    }
    case Regularization::KustaanheimoStiefel:
    case Regularization::BohlinSundman:
      return 4.0 * r;
  }
  throw std::invalid_argument("time_rate: unknown regularization");
}

}  // namespace dampreg
