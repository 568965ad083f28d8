#include "dampreg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperdual.hpp"

namespace dampreg {

namespace {

using LC = Regularization;

constexpr std::array<SystemInfo, 12> kInfo = {{
    {"DampedKepler2D", 2, false, true, true, std::nullopt},
    {"AutonomousKepler2D", 2, false, true, false, std::nullopt},
    {"DampedPowerLaw2D", 2, false, true, true, std::nullopt},
    {"AutonomousPowerLaw2D", 2, false, true, false, std::nullopt},
    {"RegularizedLC", 2, true, false, false, LC::LeviCivita},
    {"RegularizedGenLC", 2, true, false, false, LC::PowerLaw},
    {"DampedKepler3D", 3, false, true, true, std::nullopt},
    {"AutonomousKepler3D", 3, false, true, false, std::nullopt},
    {"RegularizedKS", 4, true, false, false, LC::KustaanheimoStiefel},
    {"DampedHO2D", 2, false, false, false, std::nullopt},
    {"ShiftedHO2D", 2, true, false, false, LC::BohlinSundman},
    {"BohlinKepler2D", 2, false, true, false, std::nullopt},
}};

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

bool is_singular(SystemId sys, const SystemParams& p) {
  if (sys == SystemId::DampedPowerLaw2D || sys == SystemId::AutonomousPowerLaw2D)
    return p.n_power > 0;
  return system_info(sys).singular;
}

}  // namespace

const SystemInfo& system_info(SystemId sys) { return kInfo[static_cast<std::size_t>(sys)]; }

std::string_view to_string(SystemId sys) { return system_info(sys).name; }

std::optional<SystemId> parse_system_id(std::string_view name) {
  for (SystemId s : kAllSystems)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::size_t state_size(SystemId sys) {
  const auto& info = system_info(sys);
  return 2 * info.coord_dim + (info.cointegrates_time ? 1 : 0);
}

double physical_radius(SystemId sys, std::span<const double> state, const RhsContext& ctx) {
  const auto d = system_info(sys).coord_dim;
  const double q2 = sum_sq(state.first(d));
  switch (sys) {
    case SystemId::RegularizedLC:
      return ctx.params.gamma * q2;
    case SystemId::RegularizedGenLC:
      return std::pow(q2, 0.5 * (ctx.params.n_power + 1));
    case SystemId::RegularizedKS:
    case SystemId::ShiftedHO2D:
      return q2;
    default:
      return std::sqrt(q2);
  }
}

void rhs(SystemId sys, double time, std::span<const double> state, const RhsContext& ctx,
         std::span<double> out) {
  const auto& info = system_info(sys);
  const std::size_t n = state_size(sys);
  if (state.size() != n || out.size() != n)
    throw std::invalid_argument(std::string(info.name) + ": expected state of size " +
                                std::to_string(n) + ", got " + std::to_string(state.size()));

  const std::size_t d = info.coord_dim;
  const auto q = state.first(d);
  const auto v = state.subspan(d, d);
  auto qdot = out.first(d);
  auto acc = out.subspan(d, d);
  std::copy(v.begin(), v.end(), qdot.begin());

  const SystemParams& p = ctx.params;
  const double lam = p.lambda;
  const double q2 = sum_sq(q);
  const double r = std::sqrt(q2);

  if (is_singular(sys, p) && r < kCollisionRadius)
    throw CollisionError(std::string(info.name) + ": collision at r = " + std::to_string(r));

  // acc = coef_q * q + coef_v * v
  double coef_q = 0.0;
  double coef_v = 0.0;
  switch (sys) {
    case SystemId::DampedKepler2D:
    case SystemId::DampedKepler3D:
      coef_v = -lam;
      coef_q = -p.mu() * std::exp(-1.5 * lam * time) / (q2 * r);
      break;
    case SystemId::AutonomousKepler2D:
    case SystemId::AutonomousKepler3D:
      coef_q = 0.25 * lam * lam - p.mu() / (q2 * r);
      break;
    case SystemId::DampedPowerLaw2D: {
      coef_v = -lam;
      const double a = p.power_exponent();
      if (p.n_power > 0) {
        const double decay = std::exp(-(2.0 * p.n_power + 1.0) / (p.n_power + 1.0) * lam * time);
        coef_q = -a * p.mu() * decay / std::pow(r, a + 2.0);
      }
      break;
    }
    case SystemId::AutonomousPowerLaw2D: {
      const double a = p.power_exponent();
      coef_q = 0.25 * lam * lam;
      if (p.n_power > 0) coef_q -= a * p.mu() / std::pow(r, a + 2.0);
      break;
    }
    case SystemId::RegularizedLC:
      coef_q = -(ctx.script_e - 0.375 * lam * lam * p.gamma * p.gamma * q2 * q2) / (2.0 * p.c * p.c);
      break;
    case SystemId::RegularizedGenLC: {
      const int nn = p.n_power;
      const double np1sq = (nn + 1.0) * (nn + 1.0);
      coef_q = 0.25 * lam * lam * (2.0 * nn + 1.0) * np1sq * std::pow(q2, 2 * nn);
      if (nn > 0) coef_q -= 2.0 * nn * ctx.script_e * np1sq * std::pow(q2, nn - 1);
      break;
    }
    case SystemId::RegularizedKS:
      coef_q = -(8.0 * ctx.script_e - 3.0 * lam * lam * q2 * q2);
      break;
    case SystemId::DampedHO2D:
      coef_v = -lam;
      coef_q = -p.omega * p.omega;
      break;
    case SystemId::ShiftedHO2D:
      coef_q = -p.shifted_omega2();
      break;
    case SystemId::BohlinKepler2D:
      coef_q = -ctx.kepler_energy / (4.0 * p.m) / (q2 * r);
      break;
  }
  for (std::size_t i = 0; i < d; ++i) acc[i] = coef_q * q[i] + coef_v * v[i];

  if (info.cointegrates_time)
    out[2 * d] = time_rate(*info.regularization, physical_radius(sys, state, ctx), p);
}

std::vector<double> rhs(SystemId sys, double time, std::span<const double> state,
                        const RhsContext& ctx) {
  std::vector<double> out(state_size(sys));
  rhs(sys, time, state, ctx, out);
  return out;
}

// --- Lagrangians --------------------------------------------------------------

namespace {

template <class T>
T dot_t(std::span<const T> a, std::span<const T> b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

template <class T>
T lagrangian_t(SystemId sys, const T& time, std::span<const T> q, std::span<const T> v,
               const RhsContext& ctx) {
  using std::exp;
  using std::pow;
  using detail::exp;
  using detail::pow;

  const SystemParams& p = ctx.params;
  const double m = p.m;
  const double lam = p.lambda;
  const T q2 = dot_t(q, q);
  const T v2 = dot_t(v, v);
  const T qv = dot_t(q, v);
  const T kinetic = T(0.5 * m) * v2;
  // Total-derivative term shared by the autonomous forms.
  const T autonomous_extra = T(m * lam * lam / 8.0) * q2 - T(0.5 * m * lam) * qv;

  switch (sys) {
    case SystemId::DampedKepler2D:
    case SystemId::DampedKepler3D:
      return exp(T(lam) * time) *
             (kinetic + T(p.k) * exp(T(-1.5 * lam) * time) * pow(q2, -0.5));
    case SystemId::AutonomousKepler2D:
    case SystemId::AutonomousKepler3D:
      return kinetic + autonomous_extra + T(p.k) * pow(q2, -0.5);
    case SystemId::DampedPowerLaw2D: {
      const double nn = p.n_power;
      const double a = p.power_exponent();
      return exp(T(lam) * time) *
             (kinetic + T(p.k) * exp(T(-(2.0 * nn + 1.0) / (nn + 1.0) * lam) * time) *
                            pow(q2, -0.5 * a));
    }
    case SystemId::AutonomousPowerLaw2D:
      return kinetic + autonomous_extra + T(p.k) * pow(q2, -0.5 * p.power_exponent());
    case SystemId::RegularizedLC:
      return kinetic - T(m * ctx.script_e / (4.0 * p.c * p.c)) * q2 +
             T(m * lam * lam * p.gamma * p.gamma / (32.0 * p.c * p.c)) * pow(q2, 3.0);
    case SystemId::RegularizedGenLC: {
      const double nn = p.n_power;
      const double np1sq = (nn + 1.0) * (nn + 1.0);
      return kinetic - T(ctx.script_e * m * np1sq) * pow(q2, nn) +
             T(lam * lam / 8.0 * m * np1sq) * pow(q2, 2.0 * nn + 1.0);
    }
    case SystemId::RegularizedKS:
      return kinetic - T(4.0 * m * ctx.script_e) * q2 + T(0.5 * m * lam * lam) * pow(q2, 3.0);
    case SystemId::DampedHO2D:
      return exp(T(lam) * time) * (kinetic - T(0.5 * m * p.omega * p.omega) * q2);
    case SystemId::ShiftedHO2D:
      return kinetic - T(0.5 * m * p.shifted_omega2()) * q2 - T(0.5 * m * lam) * qv;
    case SystemId::BohlinKepler2D:
      return kinetic + T(0.25 * ctx.kepler_energy) * pow(q2, -0.5);
  }
  return T(0.0);
}

using detail::HyperDual;

// Variables are ordered [q | v | time]; seeds eps1 on index i and eps2 on index j.
HyperDual eval_seeded(SystemId sys, const LagrangianSample& s, const RhsContext& ctx, std::size_t i,
                      std::optional<std::size_t> j) {
  const std::size_t d = s.q.size();
  std::vector<HyperDual> q(d), v(d);
  HyperDual t(s.time);
  auto slot = [&](std::size_t idx) -> HyperDual& {
    if (idx < d) return q[idx];
    if (idx < 2 * d) return v[idx - d];
    return t;
  };
  for (std::size_t k = 0; k < d; ++k) {
    q[k] = HyperDual(s.q[k]);
    v[k] = HyperDual(s.v[k]);
  }
  slot(i).e1 = 1.0;
  if (j) slot(*j).e2 = 1.0;
  return lagrangian_t<HyperDual>(sys, t, q, v, ctx);
}

}  // namespace

double lagrangian_value(SystemId sys, double time, std::span<const double> q,
                        std::span<const double> v, const RhsContext& ctx) {
  return lagrangian_t<double>(sys, time, q, v, ctx);
}

double lagrangian_residual(SystemId sys, const LagrangianSample& s, const RhsContext& ctx) {
  const std::size_t d = system_info(sys).coord_dim;
  if (s.q.size() != d || s.v.size() != d || s.a.size() != d)
    throw std::invalid_argument(std::string(to_string(sys)) + ": sample dimension mismatch");

  double res2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t vi = d + i;
    double el = eval_seeded(sys, s, ctx, vi, 2 * d).e12;  // d2L/dv_i dt
    for (std::size_t j = 0; j < d; ++j) {
      el += eval_seeded(sys, s, ctx, vi, d + j).e12 * s.a[j];
      el += eval_seeded(sys, s, ctx, vi, j).e12 * s.v[j];
    }
    el -= eval_seeded(sys, s, ctx, i, std::nullopt).e1;
    res2 += el * el;
  }
  return std::sqrt(res2);
}

}  // namespace dampreg
