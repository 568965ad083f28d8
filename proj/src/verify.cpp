#include "dampreg/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace dampreg {

namespace {

using Vecd = std::vector<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Failed preconditions inside a probe, reported as the check's error.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(gen_); }

  /// Log-uniform magnitude in [1e-3, 1e3].
  double magnitude() { return std::pow(10.0, uniform(-3.0, 3.0)); }

  template <std::size_t N>
  Vec<N> direction() {
    std::normal_distribution<> nd;
    Vec<N> v;
    do {
      for (auto& x : v.c) x = nd(gen_);
    } while (norm(v) < 1e-6);
    return v / norm(v);
  }

  template <std::size_t N>
  Vec<N> vec() { return magnitude() * direction<N>(); }

  template <std::size_t N>
  Vec<N> vec_in(double lo, double hi) { return uniform(lo, hi) * direction<N>(); }

 private:
  std::mt19937_64 gen_;
};

double rel(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

template <std::size_t N>
Vecd join(const Vec<N>& a, const Vec<N>& b) {
  Vecd out(a.c.begin(), a.c.end());
  out.insert(out.end(), b.c.begin(), b.c.end());
  return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

std::complex<double> cpow(std::complex<double> z, int n) {
  std::complex<double> out(1.0, 0.0);
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

PairScenario to_pair(const Scenario& s, const IntegratorConfig& cfg) {
  PairScenario p;
  p.family = s.family;
  p.params = s.params;
  p.position = s.position;
  p.velocity = s.velocity;
  p.damped_direct_leg = s.damped_direct_leg;
  p.config = cfg;
  return p;
}

void require_completed(const Trajectory& t, const char* leg) {
  if (t.status != Status::Completed)
    throw CheckFailure(std::string(leg) + " leg ended with " + std::string(to_string(t.status)) +
                       ": " + t.message);
}

// --- per-system reference states ----------------------------------------------

struct Setup {
  Vecd state;
  RhsContext ctx;
};

Setup setup_for(SystemId sys) {
  SystemParams p;
  p.lambda = 0.05;
  PairScenario pair;
  pair.params = p;
  pair.position = {1.0, 0.0};
  pair.velocity = {0.0, 0.8};
  Setup s;
  s.ctx.params = p;
  switch (sys) {
    case SystemId::DampedKepler2D:
    case SystemId::AutonomousKepler2D:
      s.state = {1.0, 0.0, 0.0, 0.8};
      break;
    case SystemId::DampedPowerLaw2D:
    case SystemId::AutonomousPowerLaw2D:
      s.ctx.params.n_power = 2;
      s.state = {1.0, 0.0, 0.0, 0.8};
      break;
    case SystemId::DampedKepler3D:
    case SystemId::AutonomousKepler3D:
      s.state = {1.0, 0.2, -0.3, 0.1, 0.8, 0.3};
      break;
    case SystemId::RegularizedLC:
      pair.family = PairFamily::LeviCivita;
      s.state = regularized_initial_state(pair, s.ctx);
      break;
    case SystemId::RegularizedGenLC:
      pair.family = PairFamily::PowerLaw;
      pair.params.n_power = 2;
      s.state = regularized_initial_state(pair, s.ctx);
      break;
    case SystemId::RegularizedKS:
      pair.family = PairFamily::KustaanheimoStiefel;
      pair.position = {1.0, 0.2, -0.3};
      pair.velocity = {0.1, 0.8, 0.3};
      s.state = regularized_initial_state(pair, s.ctx);
      break;
    case SystemId::DampedHO2D:
      s.state = {1.0, 0.0, 0.0, 0.7};
      break;
    case SystemId::ShiftedHO2D:
    case SystemId::BohlinKepler2D:
      pair.family = PairFamily::BohlinSundman;
      pair.velocity = {0.0, 0.7};
      s.state = regularized_initial_state(pair, s.ctx);
      if (sys == SystemId::BohlinKepler2D) s.state = map_back(pair, s.state);
      break;
  }
  return s;
}

// --- algebra -------------------------------------------------------------------

double probe_lc_gram(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.scenario.samples; ++i) {
    const Coord2 u = rng.vec<2>();
    const Matrix2 a = lc_matrix(u);
    worst = std::max(worst, rel(max_abs(transpose(a) * a - norm2(u) * Matrix2::identity()), norm2(u)));
  }
  return worst;
}

double probe_ks_gram(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.scenario.samples; ++i) {
    const Coord4 u = rng.vec<4>();
    const Matrix4 a = ks_matrix(u);
    worst = std::max(worst, rel(max_abs(transpose(a) * a - norm2(u) * Matrix4::identity()), norm2(u)));
  }
  return worst;
}

double probe_uhat_gram(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.scenario.samples; ++i) {
    const Coord2 u = rng.vec<2>();
    for (int n = 0; n <= 4; ++n) {
      const Matrix2 m = uhat_n(u, n);
      const double r2n = std::pow(norm2(u), n);
      worst = std::max(worst, rel(max_abs(transpose(m) * m - r2n * Matrix2::identity()), r2n));
    }
  }
  return worst;
}

double probe_uhat_power(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.scenario.samples; ++i) {
    const Coord2 u = rng.vec<2>();
    for (int n = 0; n <= 4; ++n) {
      const Coord2 expect = from_complex(cpow(to_complex(u), n + 1));
      const double scale = std::pow(norm(u), n + 1);
      worst = std::max(worst, rel(max_abs(uhat_n(u, n) * u - expect), scale));
      worst = std::max(worst, rel(max_abs(gen_lc_forward(u, n) - expect), scale));
    }
  }
  return worst;
}

double probe_planar_commute(const CheckSpec&) {
  const Matrix2 p1 = planar_permutation(1), p2 = planar_permutation(2);
  return max_abs(p1 * p2 - p2 * p1);
}

// 0 when some pair of 4-D permutations fails to commute, 1 otherwise.
double probe_quaternionic_noncommute(const CheckSpec&) {
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      const Matrix4 pi = quaternionic_permutation(i), pj = quaternionic_permutation(j);
      if (max_abs(pi * pj - pj * pi) > 0.5) return 0.0;
    }
  return 1.0;
}

double probe_permutation_orthogonality(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (int i = 1; i <= 2; ++i) {
    const Matrix2 p = planar_permutation(i);
    worst = std::max(worst, max_abs(transpose(p) * p - Matrix2::identity()));
  }
  for (int i = 0; i <= 3; ++i) {
    const Matrix4 p = quaternionic_permutation(i);
    worst = std::max(worst, max_abs(transpose(p) * p - Matrix4::identity()));
  }
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord2 u2 = rng.vec<2>();
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) {
        const double g = dot(permutation_apply(i, u2), permutation_apply(j, u2));
        worst = std::max(worst, rel(std::abs(g - (i == j ? norm2(u2) : 0.0)), norm2(u2)));
      }
    const Coord4 u4 = rng.vec<4>();
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        const double g = dot(permutation_apply(i, u4), permutation_apply(j, u4));
        worst = std::max(worst, rel(std::abs(g - (i == j ? norm2(u4) : 0.0)), norm2(u4)));
      }
  }
  return worst;
}

double probe_quaternion_norm(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Quaternion a = to_quaternion(rng.vec<4>());
    const Quaternion b = to_quaternion(rng.vec<4>());
    const Quaternion d = to_quaternion(rng.vec<4>());
    const double na = std::sqrt(quat_norm2(a)), nb = std::sqrt(quat_norm2(b));
    const double nd = std::sqrt(quat_norm2(d));
    const Coord4 left = to_coord(quat_mul(quat_mul(a, b), d));
    const Coord4 right = to_coord(quat_mul(a, quat_mul(b, d)));
    worst = std::max(worst, rel(max_abs(left - right), na * nb * nd));
    worst = std::max(worst, rel(std::abs(std::sqrt(quat_norm2(quat_mul(a, b))) - na * nb), na * nb));
  }
  return worst;
}

double probe_ks_hamilton(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord4 u = rng.vec<4>();
    const Coord4 prod = to_coord(quat_mul(to_quaternion(u), quat_star(to_quaternion(u))));
    const Coord3 x = ks_forward(u);
    const Coord4 lifted{x[0], x[1], x[2], 0.0};
    worst = std::max(worst, rel(max_abs(prod - lifted), norm2(u)));
    worst = std::max(worst, rel(std::abs(norm(x) - norm2(u)), norm2(u)));
  }
  return worst;
}

// --- static transform round-trips ----------------------------------------------

double probe_lc_inverse(const CheckSpec& c) {
  Sampler rng(c.seed);
  const double g = c.scenario.params.gamma;
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord2 z = rng.vec<2>();
    worst = std::max(worst, rel(max_abs(lc_forward(lc_inverse(z, g), g) - z), norm(z)));
  }
  return worst;
}

double probe_gen_lc_inverse(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord2 z = rng.vec<2>();
    for (int n = 0; n <= 3; ++n)
      worst = std::max(worst, rel(max_abs(gen_lc_forward(gen_lc_inverse(z, n), n) - z), norm(z)));
  }
  return worst;
}

double probe_ks_inverse(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord3 x = rng.vec<3>();
    worst = std::max(worst, rel(max_abs(ks_forward(ks_inverse(x)) - x), norm(x)));
  }
  return worst;
}

double probe_ks_velocity(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    const Coord4 u = rng.vec<4>();
    const Coord3 xd = rng.vec<3>();
    const Coord4 up = ks_velocity_map(u, xd);
    worst = std::max(worst, rel(max_abs(ks_physical_velocity(u, up) - xd), norm(xd)));
    worst = std::max(worst, rel(std::abs(bilinear_constraint(u, up)), norm(u) * norm(up)));
  }
  return worst;
}

template <std::size_t D>
double point_roundtrip_once(Sampler& rng) {
  SystemParams p;
  p.lambda = rng.uniform(0.0, 0.5);
  const PhaseState<D> s{rng.template vec<D>(), rng.template vec<D>(), rng.uniform(0.0, 10.0)};
  const PhaseState<D> back = autonomous_to_damp(damp_to_autonomous(s, p), p);
  return std::max(rel(max_abs(back.q - s.q), norm(s.q)),
                  rel(max_abs(back.v - s.v), norm(s.v) + 0.5 * p.lambda * norm(s.q)));
}

double probe_point_transform(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    worst = std::max(worst, point_roundtrip_once<2>(rng));
    worst = std::max(worst, point_roundtrip_once<3>(rng));
  }
  return worst;
}

// Damped acceleration carried through the point transform versus the
// autonomous field at the transformed state.
template <std::size_t D>
double field_gap(SystemId damped, SystemId autonomous, const RhsContext& ctx, Sampler& rng) {
  const double lam = ctx.params.lambda;
  const double t = rng.uniform(0.0, 5.0);
  const Vec<D> q = rng.template vec_in<D>(0.2, 5.0);
  const Vec<D> v = rng.template vec_in<D>(0.0, 2.0);
  const Vecd dd = rhs(damped, t, join(q, v), ctx);
  const Vec<D> a = from_span<D>(std::span<const double>(dd).subspan(D, D));
  const PhaseState<D> x = damp_to_autonomous(PhaseState<D>{q, v, t}, ctx.params);
  const Vec<D> carried = std::exp(0.5 * lam * t) * (a + lam * v + (0.25 * lam * lam) * q);
  Vecd xs = join(x.q, x.v);
  if (system_info(autonomous).cointegrates_time) xs.push_back(t);
  const Vecd ad = rhs(autonomous, t, xs, ctx);
  const Vec<D> direct = from_span<D>(std::span<const double>(ad).subspan(D, D));
  return rel(max_abs(carried - direct), norm(direct) + norm(carried));
}

double probe_point_transform_field(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    RhsContext ctx;
    ctx.params.lambda = rng.uniform(0.0, 0.5);
    ctx.params.omega = rng.uniform(0.5, 2.0);
    worst = std::max(worst, field_gap<2>(SystemId::DampedKepler2D, SystemId::AutonomousKepler2D, ctx, rng));
    worst = std::max(worst, field_gap<3>(SystemId::DampedKepler3D, SystemId::AutonomousKepler3D, ctx, rng));
    worst = std::max(worst, field_gap<2>(SystemId::DampedHO2D, SystemId::ShiftedHO2D, ctx, rng) );
    for (int n = 0; n <= 3; ++n) {
      ctx.params.n_power = n;
      worst = std::max(worst,
                       field_gap<2>(SystemId::DampedPowerLaw2D, SystemId::AutonomousPowerLaw2D, ctx, rng));
    }
  }
  return worst;
}

// --- dynamics ------------------------------------------------------------------

double probe_autonomy(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (SystemId sys : c.systems) {
    if (system_info(sys).explicit_time) continue;
    const Setup s = setup_for(sys);
    const Vecd f0 = rhs(sys, 0.0, s.state, s.ctx);
    for (int i = 0; i < 16; ++i) {
      const Vecd f1 = rhs(sys, rng.uniform(-50.0, 50.0), s.state, s.ctx);
      worst = std::max(worst, rel(max_abs_diff(f0, f1), max_abs(f0)));
    }
  }
  return worst;
}

double probe_rotation(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (SystemId sys : c.systems) {
    if (system_info(sys).coord_dim != 2) continue;
    const Setup s = setup_for(sys);
    for (int i = 0; i < 16; ++i) {
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double ct = std::cos(th), st = std::sin(th);
      auto rot = [&](std::span<const double> x) {
        Vecd out(x.begin(), x.end());
        for (std::size_t k = 0; k < 4; k += 2) {
          out[k] = ct * x[k] - st * x[k + 1];
          out[k + 1] = st * x[k] + ct * x[k + 1];
        }
        return out;
      };
      const double t = rng.uniform(0.0, 3.0);
      const Vecd lhs = rhs(sys, t, rot(s.state), s.ctx);
      const Vecd rhs_rot = rot(rhs(sys, t, s.state, s.ctx));
      worst = std::max(worst, rel(max_abs_diff(lhs, rhs_rot), max_abs(lhs)));
    }
  }
  return worst;
}

double probe_lagrangian(const CheckSpec& c) {
  double worst = 0.0;
  for (SystemId sys : c.systems) {
    const Setup s = setup_for(sys);
    IntegratorConfig cfg = reference_config(c.scenario.t_end);
    cfg.h_max = 0.05;
    const Trajectory tr = integrate(sys, s.state, s.ctx, cfg);
    require_completed(tr, to_string(sys).data());
    const std::size_t d = system_info(sys).coord_dim;
    for (const Sample& smp : tr.samples) {
      LagrangianSample ls;
      ls.time = smp.time;
      ls.q.assign(smp.state.begin(), smp.state.begin() + d);
      ls.v.assign(smp.state.begin() + d, smp.state.begin() + 2 * d);
      ls.a.assign(smp.derivative.begin() + d, smp.derivative.begin() + 2 * d);
      worst = std::max(worst, lagrangian_residual(sys, ls, s.ctx));
    }
  }
  return worst;
}

double probe_lagrangian_fd(const CheckSpec& c) {
  const SystemId sys = SystemId::AutonomousKepler2D;
  RhsContext ctx;
  ctx.params = c.scenario.params;
  IntegratorConfig cfg;
  cfg.method = Method::RK4;
  cfg.h_init = 1e-4;
  cfg.h_min = 1e-4;
  cfg.h_max = 1e-4;
  cfg.t_end = c.scenario.t_end;
  const Vecd s0 = join(from_span<2>(c.scenario.position), from_span<2>(c.scenario.velocity));
  const Trajectory tr = integrate(sys, s0, ctx, cfg);
  require_completed(tr, "direct");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < tr.samples.size(); i += 50) {
    const Sample& a = tr.samples[i - 1];
    const Sample& b = tr.samples[i];
    const Sample& n = tr.samples[i + 1];
    LagrangianSample ls;
    ls.time = b.time;
    ls.q = {b.state[0], b.state[1]};
    ls.v = {b.state[2], b.state[3]};
    const double h2 = n.time - a.time;
    ls.a = {(n.state[2] - a.state[2]) / h2, (n.state[3] - a.state[3]) / h2};
    worst = std::max(worst, lagrangian_residual(sys, ls, ctx));
  }
  return worst;
}

// --- integration ---------------------------------------------------------------

double probe_pair_roundtrip(const CheckSpec& c) {
  const PairResult r = integrate_pair(to_pair(c.scenario, reference_config(c.scenario.t_end)));
  require_completed(r.direct, "direct");
  require_completed(r.regularized, "regularized");
  if (r.mapped.samples.size() != r.direct.samples.size())
    throw CheckFailure("regularized leg did not cover the direct time grid");
  return r.max_position_gap;
}

double probe_bilinear_drift(const CheckSpec& c) {
  const PairResult r = integrate_pair(to_pair(c.scenario, reference_config(c.scenario.t_end)));
  require_completed(r.regularized, "regularized");
  const double b0 = *r.regularized.samples.front().conserved.bilinear;
  double worst = 0.0;
  for (const Sample& s : r.regularized.samples)
    worst = std::max(worst, std::abs(*s.conserved.bilinear - b0));
  return worst;
}

double probe_collision(const CheckSpec& c) {
  const PairResult r = integrate_pair(to_pair(c.scenario, reference_config(c.scenario.t_end)));
  if (r.direct.status != Status::CollisionAbort && r.direct.status != Status::StepUnderflow)
    throw CheckFailure("direct leg did not fail at the collision (status " +
                       std::string(to_string(r.direct.status)) + ")");
  require_completed(r.regularized, "regularized");
  const auto& rs = r.regularized.samples;
  const std::size_t d = system_info(r.regularized.system).coord_dim;
  const std::span<const double> u0(rs.front().state.data(), d);
  bool crossed = false;
  double h0 = *rs.front().conserved.h_oscillator, drift = 0.0, bound = 0.0;
  for (const Sample& s : rs) {
    const std::span<const double> u(s.state.data(), d);
    double proj = 0.0;
    for (std::size_t i = 0; i < d; ++i) proj += u[i] * u0[i];
    crossed = crossed || proj < 0.0;
    bound = std::max(bound, max_abs(std::span<const double>(s.state.data(), 2 * d)));
    drift = std::max(drift, rel(std::abs(*s.conserved.h_oscillator - h0), std::abs(h0)));
  }
  if (!crossed) throw CheckFailure("regularized leg never passed through U = 0");
  if (!(bound < 1e3)) throw CheckFailure("regularized state unbounded");
  return drift;
}

template <class Get>
double drift_of(const Trajectory& t, Get get) {
  const double v0 = get(t.samples.front());
  double worst = 0.0;
  for (const Sample& s : t.samples) worst = std::max(worst, rel(std::abs(get(s) - v0), std::abs(v0)));
  return worst;
}

double ang_mom_drift(const Trajectory& t) {
  const auto& l0 = t.samples.front().conserved.ang_mom;
  double n0 = 0.0;
  for (double x : l0) n0 += x * x;
  double worst = 0.0;
  for (const Sample& s : t.samples)
    worst = std::max(worst, rel(max_abs_diff(s.conserved.ang_mom, l0), std::sqrt(n0)));
  return worst;
}

double probe_energy_drift(const CheckSpec& c) {
  const PairScenario pair = to_pair(c.scenario, reference_config(c.scenario.t_end));
  RhsContext ctx;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const SystemId sys = direct_system(pair);
  const Trajectory t = integrate(sys, map_back(pair, reg0), ctx, pair.config);
  require_completed(t, "direct");
  return std::max(drift_of(t, [](const Sample& s) { return s.conserved.script_e.value(); }),
                  ang_mom_drift(t));
}

double probe_regularized_drift(const CheckSpec& c) {
  const PairScenario pair = to_pair(c.scenario, reference_config(c.scenario.t_end));
  RhsContext ctx;
  if (pair.family == PairFamily::BohlinSundman) {
    ctx.params = pair.params;
    const Vecd s0 = join(from_span<2>(pair.position), from_span<2>(pair.velocity));
    const Trajectory t = integrate(SystemId::DampedHO2D, s0, ctx, pair.config);
    require_completed(t, "damped oscillator");
    return std::max(drift_of(t, [](const Sample& s) { return s.conserved.h_oscillator.value(); }),
                    ang_mom_drift(t));
  }
  IntegratorConfig cfg = pair.config;
  cfg.end = EndCondition::PhysicalTime;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const Trajectory t = integrate(regularized_system(pair.family), reg0, ctx, cfg);
  require_completed(t, "regularized");
  return std::max(drift_of(t, [](const Sample& s) { return s.conserved.h_oscillator.value(); }),
                  drift_of(t, [](const Sample& s) { return s.conserved.script_e.value(); }));
}

double probe_energy_cross(const CheckSpec& c) {
  const PairScenario pair = to_pair(c.scenario, reference_config(c.scenario.t_end));
  RhsContext ctx;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const SystemId sys = direct_system(pair);
  const Trajectory t = integrate(sys, map_back(pair, reg0), ctx, pair.config);
  require_completed(t, "direct");
  const SystemParams& p = pair.params;
  const double scale = std::abs(ctx.script_e);
  double worst = 0.0;
  Vecd prev(reg0.begin(), reg0.end() - 1);
  for (const Sample& s : t.samples) {
    const double direct = s.conserved.script_e.value();
    double regular = 0.0;
    if (pair.family == PairFamily::KustaanheimoStiefel) {
      const Coord3 x = from_span<3>(std::span<const double>(s.state).first(3));
      const Coord3 xd = from_span<3>(std::span<const double>(s.state).subspan(3, 3));
      const Coord4 u = ks_align_fiber(ks_inverse(x), from_span<4>(std::span<const double>(prev).first(4)));
      const Coord4 up = ks_velocity_map(u, xd);
      regular = script_e_regularized(OscillatorFamily::KustaanheimoStiefel, u.span(), up.span(), p);
      prev = join(u, up);
    } else {
      const Coord2 x = from_span<2>(std::span<const double>(s.state).first(2));
      const Coord2 xd = from_span<2>(std::span<const double>(s.state).subspan(2, 2));
      const Coord2 ref = from_span<2>(std::span<const double>(prev).first(2));
      const bool lc = pair.family == PairFamily::LeviCivita;
      const int n = lc ? 1 : p.n_power;
      const Coord2 u = lc ? nearest_lc_branch(lc_inverse(x, p.gamma), ref, 1)
                          : nearest_lc_branch(gen_lc_inverse(x, n), ref, n);
      const Coord2 up = lc ? lc_velocity_map(u, xd, p) : gen_lc_velocity_map(u, xd, n);
      regular = script_e_regularized(
          lc ? OscillatorFamily::LeviCivita : OscillatorFamily::GeneralizedLeviCivita, u.span(),
          up.span(), p);
      prev = join(u, up);
    }
    worst = std::max(worst, rel(std::abs(direct - regular), scale));
  }
  return worst;
}

double probe_circular(const CheckSpec& c) {
  RhsContext ctx;
  ctx.params = c.scenario.params;
  const Vecd s0 = join(from_span<2>(c.scenario.position), from_span<2>(c.scenario.velocity));
  const Trajectory t = integrate(SystemId::AutonomousKepler2D, s0, ctx, reference_config(c.scenario.t_end));
  require_completed(t, "direct");
  const Vecd& end = t.samples.back().state;
  return std::hypot(end[0] - s0[0], end[1] - s0[1]);
}

Vecd ks_sho_state(const CheckSpec& c) {
  Vecd s0(c.scenario.position);
  s0.resize(8, 0.0);
  s0.push_back(0.0);
  return s0;
}

double probe_ks_period(const CheckSpec& c) {
  RhsContext ctx;
  ctx.params = c.scenario.params;
  ctx.script_e = 0.125;
  const Vecd s0 = ks_sho_state(c);
  const Trajectory t = integrate(SystemId::RegularizedKS, s0, ctx, reference_config(2.0 * std::numbers::pi));
  require_completed(t, "regularized");
  return max_abs_diff(std::span<const double>(t.samples.back().state).first(4),
                      std::span<const double>(s0).first(4));
}

double probe_time_monotone(const CheckSpec& c) {
  const PairResult r = integrate_pair(to_pair(c.scenario, reference_config(c.scenario.t_end)));
  require_completed(r.regularized, "regularized");
  double bad = 0.0;
  const auto& rs = r.regularized.samples;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (!(rs[i].time > rs[i - 1].time)) bad += 1.0;
    if (!(rs[i].state.back() > rs[i - 1].state.back())) bad += 1.0;
  }
  return bad;
}

// |observed error ratio under step halving - 16|.
double probe_rk4_order(const CheckSpec& c) {
  RhsContext ctx;
  ctx.params = c.scenario.params;
  ctx.script_e = 0.125;
  const Vecd s0 = ks_sho_state(c);
  const double period = 2.0 * std::numbers::pi;
  auto error_for = [&](int steps) {
    IntegratorConfig cfg;
    cfg.method = Method::RK4;
    cfg.h_init = cfg.h_min = cfg.h_max = period / steps;
    cfg.t_end = period;
    const Trajectory t = integrate(SystemId::RegularizedKS, s0, ctx, cfg);
    require_completed(t, "rk4");
    return max_abs_diff(std::span<const double>(t.samples.back().state).first(8),
                        std::span<const double>(s0).first(8));
  };
  return std::abs(error_for(40) / error_for(80) - 16.0);
}

// --- limits --------------------------------------------------------------------

double probe_genlc_matches_lc(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    RhsContext lc;
    lc.params.lambda = rng.uniform(0.0, 0.5);
    lc.params.c = 0.25;
    lc.params.gamma = 1.0;
    lc.script_e = rng.uniform(-2.0, 2.0);
    RhsContext gen = lc;
    gen.params.n_power = 1;
    Vecd st = join(rng.vec_in<2>(0.1, 3.0), rng.vec_in<2>(0.0, 3.0));
    st.push_back(rng.uniform(0.0, 10.0));
    const double tau = rng.uniform(0.0, 10.0);
    const Vecd a = rhs(SystemId::RegularizedLC, tau, st, lc);
    const Vecd b = rhs(SystemId::RegularizedGenLC, tau, st, gen);
    worst = std::max(worst, rel(max_abs_diff(a, b), max_abs(a)));
  }
  return worst;
}

template <std::size_t D>
double harmonic_gap(SystemId sys, Sampler& rng, double c_param) {
  RhsContext ctx;
  ctx.params.lambda = 0.0;
  ctx.params.c = c_param;
  ctx.params.gamma = rng.uniform(0.5, 2.0);
  ctx.script_e = rng.uniform(-2.0, 2.0);
  const Vec<D> u = rng.template vec_in<D>(0.1, 3.0);
  Vecd st = join(u, rng.template vec_in<D>(0.0, 3.0));
  st.push_back(0.0);
  const Vecd f = rhs(sys, 0.0, st, ctx);
  const double w2 = D == 2 ? ctx.script_e / (2.0 * c_param * c_param) : 8.0 * ctx.script_e;
  double gap = 0.0;
  for (std::size_t i = 0; i < D; ++i) gap = std::max(gap, std::abs(f[D + i] + w2 * u[i]));
  return rel(gap, std::abs(w2) * norm(u));
}

double probe_lc_harmonic(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s)
    worst = std::max(worst, harmonic_gap<2>(SystemId::RegularizedLC, rng, rng.uniform(0.1, 1.0)));
  return worst;
}

double probe_ks_harmonic(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < c.scenario.samples; ++s)
    worst = std::max(worst, harmonic_gap<4>(SystemId::RegularizedKS, rng, 0.25));
  return worst;
}

double probe_damped_limit(const CheckSpec& c) {
  Sampler rng(c.seed);
  double worst = 0.0;
  const std::pair<SystemId, SystemId> pairs[] = {
      {SystemId::DampedKepler2D, SystemId::AutonomousKepler2D},
      {SystemId::DampedPowerLaw2D, SystemId::AutonomousPowerLaw2D},
      {SystemId::DampedKepler3D, SystemId::AutonomousKepler3D},
      {SystemId::DampedHO2D, SystemId::ShiftedHO2D},
  };
  for (std::size_t s = 0; s < c.scenario.samples; ++s) {
    RhsContext ctx;
    ctx.params.lambda = 0.0;
    ctx.params.n_power = static_cast<int>(s % 4);
    for (const auto& [damped, autonomous] : pairs) {
      const std::size_t d = system_info(damped).coord_dim;
      Vecd st(2 * d);
      for (auto& x : st) x = rng.uniform(0.2, 3.0);
      Vecd st_auto = st;
      if (system_info(autonomous).cointegrates_time) st_auto.push_back(0.0);
      const double t = rng.uniform(0.0, 10.0);
      const Vecd a = rhs(damped, t, st, ctx);
      const Vecd b = rhs(autonomous, t, st_auto, ctx);
      worst = std::max(worst, rel(max_abs_diff(a, std::span<const double>(b).first(2 * d)), max_abs(a)));
    }
  }
  return worst;
}

double probe_analytic_ellipse(const CheckSpec& c) {
  IntegratorConfig cfg = reference_config(c.scenario.t_end);
  cfg.end = EndCondition::PhysicalTime;
  const PairScenario pair = to_pair(c.scenario, cfg);
  RhsContext ctx;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const Trajectory t = integrate(regularized_system(pair.family), reg0, ctx, cfg);
  require_completed(t, "regularized");
  const std::size_t d = pair.position.size();
  double worst = 0.0;
  for (const Sample& s : t.samples) {
    const Vecd x = map_back(pair, s.state);
    const KeplerState ref = kepler_propagate(pair.position, pair.velocity, pair.params.mu(), s.state.back());
    worst = std::max(worst, max_abs_diff(std::span<const double>(x).first(d), ref.position));
  }
  return worst;
}

// --- Hamiltonians --------------------------------------------------------------

HomogeneousEquivalenceReport ks_homogeneous(const CheckSpec& c) {
  IntegratorConfig cfg = reference_config(c.scenario.t_end);
  cfg.end = EndCondition::PhysicalTime;
  const PairScenario pair = to_pair(c.scenario, cfg);
  RhsContext ctx;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const Trajectory t = integrate(SystemId::RegularizedKS, reg0, ctx, cfg);
  require_completed(t, "regularized");
  std::vector<RegularizedState<4>> states;
  states.reserve(t.samples.size());
  for (const Sample& s : t.samples) {
    const std::span<const double> x(s.state);
    states.push_back({from_span<4>(x.first(4)), from_span<4>(x.subspan(4, 4)), s.time, x.back()});
  }
  return homogeneous_equivalence_check(states, ctx);
}

double probe_sextic(const CheckSpec& c) { return ks_homogeneous(c).sextic_relative_drift; }

double probe_homogeneous(const CheckSpec& c) {
  const HomogeneousEquivalenceReport r = ks_homogeneous(c);
  const double strength = 4.0 * c.scenario.params.k;
  return std::max({r.strength_relative_gap, r.max_identity_gap / strength, r.max_constraint / strength});
}

double probe_lc_oscillator_value(const CheckSpec& c) {
  IntegratorConfig cfg = reference_config(c.scenario.t_end);
  cfg.end = EndCondition::PhysicalTime;
  const PairScenario pair = to_pair(c.scenario, cfg);
  RhsContext ctx;
  const Vecd reg0 = regularized_initial_state(pair, ctx);
  const Trajectory t = integrate(SystemId::RegularizedLC, reg0, ctx, cfg);
  require_completed(t, "regularized");
  const SystemParams& p = pair.params;
  const double expect = p.k / (4.0 * p.c * p.c * p.gamma);
  double worst = 0.0;
  for (const Sample& s : t.samples)
    worst = std::max(worst, rel(std::abs(s.conserved.h_oscillator.value() - expect), expect));
  return worst;
}

// --- Bohlin-Sundman chain ------------------------------------------------------

struct BohlinImage {
  double kepler_energy;
  double strength;
};

// Damped oscillator run, carried to the shifted oscillator and then to the
// Kepler plane; per-sample Kepler energy and measured strength m|Zdd||Z|^2.
std::vector<BohlinImage> bohlin_images(const CheckSpec& c, double& e_shifted) {
  const SystemParams& p = c.scenario.params;
  RhsContext ctx;
  ctx.params = p;
  const Vecd s0 = join(from_span<2>(c.scenario.position), from_span<2>(c.scenario.velocity));
  const Trajectory t = integrate(SystemId::DampedHO2D, s0, ctx, reference_config(c.scenario.t_end));
  require_completed(t, "damped oscillator");

  const PhaseState<2> q0{from_span<2>(c.scenario.position), from_span<2>(c.scenario.velocity), 0.0};
  e_shifted = bohlin_energies(q0, p).e_shifted;
  const double k = e_shifted / 4.0;
  const double lam = p.lambda;

  std::vector<BohlinImage> out;
  for (const Sample& s : t.samples) {
    const std::span<const double> st(s.state), dv(s.derivative);
    const Coord2 q = from_span<2>(st.first(2)), qd = from_span<2>(st.subspan(2, 2));
    const Coord2 qdd = from_span<2>(dv.subspan(2, 2));
    const PhaseState<2> x = damp_to_autonomous(PhaseState<2>{q, qd, s.time}, p);
    const Coord2 xdd = std::exp(0.5 * lam * s.time) * (qdd + lam * qd + (0.25 * lam * lam) * q);

    const Coord2 z = bohlin_forward(x.q);
    const Coord2 zd = bohlin_velocity_map(x.q, x.v);
    const std::complex<double> w = to_complex(x.q), wp = to_complex(x.v), wpp = to_complex(xdd);
    const std::complex<double> dzd_dtau =
        wpp / (2.0 * std::conj(w)) - wp * std::conj(wp) / (2.0 * std::conj(w) * std::conj(w));
    const std::complex<double> zdd = dzd_dtau / (4.0 * std::norm(w));
    out.push_back({kepler_energy_2d(z, zd, p.m, k), p.m * std::abs(zdd) * norm2(z)});
  }
  return out;
}

double probe_bohlin_energy(const CheckSpec& c) {
  double e = 0.0;
  const auto images = bohlin_images(c, e);
  const double predicted = bohlin_energies({}, c.scenario.params).e_kepler_predicted;
  double worst = 0.0;
  for (const auto& im : images) worst = std::max(worst, std::abs(im.kepler_energy - predicted));
  return worst;
}

double probe_bohlin_strength(const CheckSpec& c) {
  double e = 0.0;
  const auto images = bohlin_images(c, e);
  double worst = 0.0;
  for (const auto& im : images) worst = std::max(worst, std::abs(im.strength - e / 4.0));
  return worst;
}

double dispatch(const CheckSpec& c) {
  switch (c.probe) {
    case Probe::LcGram: return probe_lc_gram(c);
    case Probe::KsGram: return probe_ks_gram(c);
    case Probe::UhatGram: return probe_uhat_gram(c);
    case Probe::UhatPower: return probe_uhat_power(c);
    case Probe::PlanarCommute: return probe_planar_commute(c);
    case Probe::QuaternionicNonCommute: return probe_quaternionic_noncommute(c);
    case Probe::PermutationOrthogonality: return probe_permutation_orthogonality(c);
    case Probe::QuaternionNorm: return probe_quaternion_norm(c);
    case Probe::KsHamiltonProduct: return probe_ks_hamilton(c);
    case Probe::LcInverse: return probe_lc_inverse(c);
    case Probe::GenLcInverse: return probe_gen_lc_inverse(c);
    case Probe::KsInverse: return probe_ks_inverse(c);
    case Probe::KsVelocity: return probe_ks_velocity(c);
    case Probe::PointTransform: return probe_point_transform(c);
    case Probe::PointTransformField: return probe_point_transform_field(c);
    case Probe::Autonomy: return probe_autonomy(c);
    case Probe::RotationEquivariance: return probe_rotation(c);
    case Probe::LagrangianResidual: return probe_lagrangian(c);
    case Probe::LagrangianFiniteDifference: return probe_lagrangian_fd(c);
    case Probe::PairRoundTrip: return probe_pair_roundtrip(c);
    case Probe::BilinearDrift: return probe_bilinear_drift(c);
    case Probe::CollisionPair: return probe_collision(c);
    case Probe::EnergyDrift: return probe_energy_drift(c);
    case Probe::RegularizedDrift: return probe_regularized_drift(c);
    case Probe::EnergyCrossCoordinates: return probe_energy_cross(c);
    case Probe::CircularOrbit: return probe_circular(c);
    case Probe::KsHarmonicPeriod: return probe_ks_period(c);
    case Probe::TimeMonotone: return probe_time_monotone(c);
    case Probe::Rk4Order: return probe_rk4_order(c);
    case Probe::GenLcMatchesLc: return probe_genlc_matches_lc(c);
    case Probe::LcHarmonicLimit: return probe_lc_harmonic(c);
    case Probe::KsHarmonicLimit: return probe_ks_harmonic(c);
    case Probe::DampedLimit: return probe_damped_limit(c);
    case Probe::AnalyticEllipse: return probe_analytic_ellipse(c);
    case Probe::SexticConstancy: return probe_sextic(c);
    case Probe::HomogeneousStrength: return probe_homogeneous(c);
    case Probe::LcOscillatorValue: return probe_lc_oscillator_value(c);
    case Probe::BohlinKeplerEnergy: return probe_bohlin_energy(c);
    case Probe::BohlinStrength: return probe_bohlin_strength(c);
  }
  throw std::invalid_argument("unknown probe");
}

}  // namespace

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::RoundTrip: return "RoundTrip";
    case CheckKind::ConservationDrift: return "ConservationDrift";
    case CheckKind::LimitReduction: return "LimitReduction";
    case CheckKind::CollisionPassage: return "CollisionPassage";
    case CheckKind::AlgebraicIdentity: return "AlgebraicIdentity";
    case CheckKind::HamiltonianEquivalence: return "HamiltonianEquivalence";
    case CheckKind::BohlinEnergy: return "BohlinEnergy";
  }
  return "?";
}

IntegratorConfig reference_config(double t_end) {
  IntegratorConfig cfg;
  cfg.method = Method::AdaptiveRK45;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-12;
  cfg.h_init = 1e-3;
  cfg.h_min = 1e-16;
  cfg.h_max = 0.1;
  cfg.t_end = t_end;
  return cfg;
}

KeplerState kepler_propagate(const std::vector<double>& r0, const std::vector<double>& v0, double mu,
                             double t) {
  if (r0.size() != v0.size()) throw std::invalid_argument("kepler_propagate: dimension mismatch");
  double rn = 0.0, v2 = 0.0, rv = 0.0;
  for (std::size_t i = 0; i < r0.size(); ++i) {
    rn += r0[i] * r0[i];
    v2 += v0[i] * v0[i];
    rv += r0[i] * v0[i];
  }
  rn = std::sqrt(rn);
  const double energy = 0.5 * v2 - mu / rn;
  if (!(energy < 0.0)) throw std::invalid_argument("kepler_propagate: orbit is not bound");
  const double a = -mu / (2.0 * energy);
  const double n = std::sqrt(mu / (a * a * a));
  const double sigma = rv / std::sqrt(mu);
  const double ec = 1.0 - rn / a;           // e cos E0
  const double es = sigma / std::sqrt(a);  // e sin E0

  // n t = dE - ec sin dE + es (1 - cos dE)
  const double mt = n * t;
  double de = mt;
  for (int it = 0; it < 100; ++it) {
    const double f = de - ec * std::sin(de) + es * (1.0 - std::cos(de)) - mt;
    const double fp = 1.0 - ec * std::cos(de) + es * std::sin(de);
    const double step = f / fp;
    de -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(de))) break;
  }
  const double r = a + (rn - a) * std::cos(de) + sigma * std::sqrt(a) * std::sin(de);
  const double f = 1.0 - a / rn * (1.0 - std::cos(de));
  const double g = t - (de - std::sin(de)) / n;
  const double fd = -std::sqrt(mu * a) / (r * rn) * std::sin(de);
  const double gd = 1.0 - a / r * (1.0 - std::cos(de));
  KeplerState out;
  for (std::size_t i = 0; i < r0.size(); ++i) {
    out.position.push_back(f * r0[i] + g * v0[i]);
    out.velocity.push_back(fd * r0[i] + gd * v0[i]);
  }
  return out;
}

CheckResult run_check(const CheckSpec& spec) {
  CheckResult res;
  res.name = spec.name;
  res.kind = spec.kind;
  res.tolerance = spec.tolerance;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!(spec.tolerance > 0.0)) throw CheckFailure("tolerance must be positive");
    res.measured = dispatch(spec);
    res.pass = res.measured <= spec.tolerance;
  } catch (const std::exception& e) {
    res.measured = kInf;
    res.pass = false;
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CheckSpec> standard_suite(std::uint64_t seed) {
  using K = CheckKind;
  using P = Probe;
  using S = SystemId;
  std::vector<CheckSpec> suite;

  auto add = [&](std::string name, K kind, P probe, double tol, std::vector<S> systems = {},
                 Scenario sc = {}) {
    CheckSpec c;
    c.name = std::move(name);
    c.kind = kind;
    c.probe = probe;
    c.tolerance = tol;
    c.systems = std::move(systems);
    c.scenario = std::move(sc);
    c.seed = seed;
    suite.push_back(std::move(c));
  };
  auto scenario = [](PairFamily f, double lambda, std::vector<double> x, std::vector<double> v,
                     double t_end, int n_power = 1, bool damped = false) {
    Scenario s;
    s.family = f;
    s.params.lambda = lambda;
    s.params.n_power = n_power;
    s.position = std::move(x);
    s.velocity = std::move(v);
    s.t_end = t_end;
    s.damped_direct_leg = damped;
    return s;
  };
  const std::vector<double> x2{1.0, 0.0}, v2{0.0, 0.8};
  const std::vector<double> x3{1.0, 0.2, -0.3}, v3{0.1, 0.8, 0.3};
  const std::vector<S> all(kAllSystems.begin(), kAllSystems.end());

  // Algebra.
  add("algebra.lc_matrix_gram", K::AlgebraicIdentity, P::LcGram, 1e-13);
  add("algebra.ks_matrix_gram", K::AlgebraicIdentity, P::KsGram, 1e-13);
  add("algebra.uhat_gram", K::AlgebraicIdentity, P::UhatGram, 1e-13);
  add("algebra.uhat_power", K::AlgebraicIdentity, P::UhatPower, 1e-13);
  add("algebra.planar_permutations_commute", K::AlgebraicIdentity, P::PlanarCommute, 1e-15);
  add("algebra.quaternionic_permutations_noncommuting_pair", K::AlgebraicIdentity,
      P::QuaternionicNonCommute, 0.5);
  add("algebra.permutation_orthogonality", K::AlgebraicIdentity, P::PermutationOrthogonality, 1e-13);
  add("algebra.quaternion_norm_and_associativity", K::AlgebraicIdentity, P::QuaternionNorm, 1e-13);
  add("algebra.ks_forward_hamilton_product", K::AlgebraicIdentity, P::KsHamiltonProduct, 1e-13);

  // Static transform round-trips.
  {
    Scenario s;
    s.params.gamma = 2.5;
    add("transforms.lc_inverse_roundtrip", K::RoundTrip, P::LcInverse, 1e-13, {}, s);
  }
  add("transforms.gen_lc_inverse_roundtrip", K::RoundTrip, P::GenLcInverse, 1e-12);
  add("transforms.ks_inverse_roundtrip", K::RoundTrip, P::KsInverse, 1e-13);
  add("transforms.ks_velocity_roundtrip", K::RoundTrip, P::KsVelocity, 1e-13);
  add("transforms.point_transform_roundtrip", K::RoundTrip, P::PointTransform, 1e-13);
  add("transforms.point_transform_fields", K::RoundTrip, P::PointTransformField, 1e-12,
      {S::DampedKepler2D, S::AutonomousKepler2D, S::DampedPowerLaw2D, S::AutonomousPowerLaw2D,
       S::DampedKepler3D, S::AutonomousKepler3D, S::DampedHO2D, S::ShiftedHO2D});

  // Dynamics.
  add("dynamics.autonomy", K::AlgebraicIdentity, P::Autonomy, 1e-15, all);
  add("dynamics.rotation_equivariance", K::AlgebraicIdentity, P::RotationEquivariance, 1e-13, all);
  {
    Scenario s;
    s.t_end = 2.0;
    add("dynamics.lagrangian_residual", K::AlgebraicIdentity, P::LagrangianResidual, 1e-9, all, s);
  }
  add("dynamics.lagrangian_finite_difference", K::AlgebraicIdentity, P::LagrangianFiniteDifference,
      1e-6, {S::AutonomousKepler2D}, scenario(PairFamily::LeviCivita, 0.05, x2, v2, 2.0));

  // Paired round-trips.
  add("roundtrip.lc.lambda_0", K::RoundTrip, P::PairRoundTrip, 1e-8,
      {S::AutonomousKepler2D, S::RegularizedLC}, scenario(PairFamily::LeviCivita, 0.0, x2, v2, 20.0));
  for (double lam : {0.01, 0.1}) {
    add(lam == 0.01 ? "roundtrip.lc.lambda_0.01" : "roundtrip.lc.lambda_0.1", K::RoundTrip,
        P::PairRoundTrip, 1e-6, {S::AutonomousKepler2D, S::RegularizedLC},
        scenario(PairFamily::LeviCivita, lam, x2, v2, 20.0));
  }
  add("roundtrip.lc.damped", K::RoundTrip, P::PairRoundTrip, 1e-6,
      {S::DampedKepler2D, S::RegularizedLC},
      scenario(PairFamily::LeviCivita, 0.01, x2, v2, 20.0, 1, true));
  for (int n = 0; n <= 3; ++n)
    add("roundtrip.power_law.n" + std::to_string(n), K::RoundTrip, P::PairRoundTrip, 1e-6,
        {S::AutonomousPowerLaw2D, S::RegularizedGenLC},
        scenario(PairFamily::PowerLaw, 0.01, x2, v2, 20.0, n));
  add("roundtrip.power_law.damped_n2", K::RoundTrip, P::PairRoundTrip, 1e-6,
      {S::DampedPowerLaw2D, S::RegularizedGenLC},
      scenario(PairFamily::PowerLaw, 0.01, x2, v2, 20.0, 2, true));
  add("roundtrip.ks", K::RoundTrip, P::PairRoundTrip, 1e-6, {S::AutonomousKepler3D, S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.01, x3, v3, 20.0));
  add("roundtrip.ks.damped", K::RoundTrip, P::PairRoundTrip, 1e-6, {S::DampedKepler3D, S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.01, x3, v3, 20.0, 1, true));
  add("roundtrip.ks.bilinear_drift", K::ConservationDrift, P::BilinearDrift, 1e-10, {S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.01, x3, v3, 20.0));
  add("roundtrip.bohlin", K::RoundTrip, P::PairRoundTrip, 1e-6, {S::ShiftedHO2D, S::BohlinKepler2D},
      scenario(PairFamily::BohlinSundman, 0.2, {1.0, 0.0}, {0.0, 0.7}, 5.0));

  // Collision passage.
  add("collision.lc_2d", K::CollisionPassage, P::CollisionPair, 1e-6,
      {S::DampedKepler2D, S::RegularizedLC},
      scenario(PairFamily::LeviCivita, 0.01, {1.0, 0.0}, {0.0, 0.0}, 3.0, 1, true));
  add("collision.ks_3d", K::CollisionPassage, P::CollisionPair, 1e-6,
      {S::DampedKepler3D, S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.01, {0.6, -0.5, 0.3}, {0.0, 0.0, 0.0}, 3.0, 1, true));
  add("collision.power_law_n2", K::CollisionPassage, P::CollisionPair, 1e-6,
      {S::AutonomousPowerLaw2D, S::RegularizedGenLC},
      scenario(PairFamily::PowerLaw, 0.01, {0.0, 1.0}, {0.0, -0.2}, 3.0, 2));
  add("integrate.time_monotone", K::CollisionPassage, P::TimeMonotone, 0.5, {S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.01, {0.6, -0.5, 0.3}, {0.0, 0.0, 0.0}, 3.0));

  // Conservation along autonomous and regularized flows, ten periods.
  add("conservation.autonomous_kepler_2d", K::ConservationDrift, P::EnergyDrift, 1e-9,
      {S::AutonomousKepler2D}, scenario(PairFamily::LeviCivita, 0.1, x2, v2, 40.0));
  add("conservation.autonomous_power_law_n2", K::ConservationDrift, P::EnergyDrift, 1e-9,
      {S::AutonomousPowerLaw2D}, scenario(PairFamily::PowerLaw, 0.1, x2, v2, 40.0, 2));
  add("conservation.autonomous_kepler_3d", K::ConservationDrift, P::EnergyDrift, 1e-9,
      {S::AutonomousKepler3D}, scenario(PairFamily::KustaanheimoStiefel, 0.1, x3, v3, 40.0));
  add("conservation.regularized_lc", K::ConservationDrift, P::RegularizedDrift, 1e-9,
      {S::RegularizedLC}, scenario(PairFamily::LeviCivita, 0.1, x2, v2, 40.0));
  add("conservation.regularized_power_law_n2", K::ConservationDrift, P::RegularizedDrift, 1e-9,
      {S::RegularizedGenLC}, scenario(PairFamily::PowerLaw, 0.1, x2, v2, 40.0, 2));
  add("conservation.regularized_ks", K::ConservationDrift, P::RegularizedDrift, 1e-9,
      {S::RegularizedKS}, scenario(PairFamily::KustaanheimoStiefel, 0.1, x3, v3, 40.0));
  add("conservation.damped_oscillator", K::ConservationDrift, P::RegularizedDrift, 1e-9,
      {S::DampedHO2D}, scenario(PairFamily::BohlinSundman, 0.2, {1.0, 0.0}, {0.0, 0.7}, 20.0));
  add("consistency.script_e_lc", K::ConservationDrift, P::EnergyCrossCoordinates, 1e-10,
      {S::AutonomousKepler2D}, scenario(PairFamily::LeviCivita, 0.1, x2, v2, 20.0));
  add("consistency.script_e_power_law_n2", K::ConservationDrift, P::EnergyCrossCoordinates, 1e-10,
      {S::AutonomousPowerLaw2D}, scenario(PairFamily::PowerLaw, 0.1, x2, v2, 20.0, 2));
  add("consistency.script_e_ks", K::ConservationDrift, P::EnergyCrossCoordinates, 1e-10,
      {S::AutonomousKepler3D}, scenario(PairFamily::KustaanheimoStiefel, 0.1, x3, v3, 20.0));

  // Integrator sanity.
  add("integrate.circular_orbit", K::LimitReduction, P::CircularOrbit, 1e-7, {S::AutonomousKepler2D},
      scenario(PairFamily::LeviCivita, 0.0, {1.0, 0.0}, {0.0, 1.0}, 2.0 * std::numbers::pi));
  add("integrate.ks_harmonic_period", K::LimitReduction, P::KsHarmonicPeriod, 1e-8, {S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.0, {0.7, -0.4, 0.5, 0.2}, {}, 0.0));
  add("integrate.rk4_order", K::LimitReduction, P::Rk4Order, 4.0, {S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.0, {0.7, -0.4, 0.5, 0.2}, {}, 0.0));

  // lambda -> 0 and N = 1 reductions.
  add("limit.power_law_n1_matches_lc", K::LimitReduction, P::GenLcMatchesLc, 1e-12,
      {S::RegularizedLC, S::RegularizedGenLC});
  add("limit.lc_harmonic_field", K::LimitReduction, P::LcHarmonicLimit, 1e-13, {S::RegularizedLC});
  add("limit.ks_harmonic_field", K::LimitReduction, P::KsHarmonicLimit, 1e-13, {S::RegularizedKS});
  add("limit.damped_equals_autonomous", K::LimitReduction, P::DampedLimit, 1e-15,
      {S::DampedKepler2D, S::DampedPowerLaw2D, S::DampedKepler3D, S::DampedHO2D});
  add("limit.lc_analytic_ellipse", K::LimitReduction, P::AnalyticEllipse, 1e-6, {S::RegularizedLC},
      scenario(PairFamily::LeviCivita, 0.0, x2, v2, 20.0));
  add("limit.ks_analytic_ellipse", K::LimitReduction, P::AnalyticEllipse, 1e-6, {S::RegularizedKS},
      scenario(PairFamily::KustaanheimoStiefel, 0.0, x3, v3, 20.0));

  // Hamiltonians.
  add("hamiltonian.sextic_constancy", K::HamiltonianEquivalence, P::SexticConstancy, 1e-9,
      {S::RegularizedKS}, scenario(PairFamily::KustaanheimoStiefel, 0.05, x3, v3, 20.0));
  add("hamiltonian.homogeneous_strength", K::HamiltonianEquivalence, P::HomogeneousStrength, 1e-8,
      {S::RegularizedKS}, scenario(PairFamily::KustaanheimoStiefel, 0.05, x3, v3, 20.0));
  {
    Scenario s = scenario(PairFamily::LeviCivita, 0.05, x2, v2, 20.0);
    s.params.c = 0.5;
    s.params.gamma = 2.0;
    add("hamiltonian.lc_oscillator_value", K::HamiltonianEquivalence, P::LcOscillatorValue, 1e-9,
        {S::RegularizedLC}, s);
  }

  // Bohlin-Sundman chain.
  add("bohlin.kepler_energy", K::BohlinEnergy, P::BohlinKeplerEnergy, 1e-8,
      {S::DampedHO2D, S::ShiftedHO2D, S::BohlinKepler2D},
      scenario(PairFamily::BohlinSundman, 0.2, {1.0, 0.0}, {0.0, 0.7}, 20.0));
  add("bohlin.identified_strength", K::BohlinEnergy, P::BohlinStrength, 1e-8,
      {S::DampedHO2D, S::ShiftedHO2D, S::BohlinKepler2D},
      scenario(PairFamily::BohlinSundman, 0.2, {1.0, 0.0}, {0.0, 0.7}, 20.0));

  return suite;
}

std::vector<CheckSpec> filter_suite(const std::vector<CheckSpec>& suite, const std::string& filter) {
  std::vector<CheckSpec> out;
  for (const auto& c : suite)
    if (filter.empty() || c.name.find(filter) != std::string::npos) out.push_back(c);
  return out;
}

std::vector<CheckResult> run_suite(const std::vector<CheckSpec>& specs, unsigned threads) {
  std::vector<CheckResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) results[i] = run_check(specs[i]);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(specs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string report_json(const std::vector<CheckResult>& results, bool with_timing) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["kind"] = std::string(to_string(r.kind));
    if (std::isfinite(r.measured))
      e["measured"] = r.measured;
    else
      e["measured"] = nullptr;
    e["tolerance"] = r.tolerance;
    e["pass"] = r.pass;
    e["seconds"] = with_timing ? r.seconds : 0.0;
    if (!r.error.empty()) e["error"] = r.error;
    arr.push_back(std::move(e));
  }
  return arr.dump(2) + "\n";
}

}  // namespace dampreg
