#include "dampreg/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dampreg {

namespace {

using Vecd = std::vector<double>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

struct Stepper {
  SystemId sys;
  const RhsContext& ctx;
  std::size_t n;
  Vecd k2, k3, k4, k5, k6, tmp;

  Stepper(SystemId s, const RhsContext& c, std::size_t size)
      : sys(s), ctx(c), n(size), k2(size), k3(size), k4(size), k5(size), k6(size), tmp(size) {}

  void f(double t, const Vecd& y, Vecd& out) { rhs(sys, t, y, ctx, out); }

  // One DOPRI5 step from (t, y) with derivative k1. Writes the new state,
  // its derivative (FSAL) and the scaled error norm.
  double dopri(double t, const Vecd& y, const Vecd& k1, double h, Vecd& y_new, Vecd& k7,
               const IntegratorConfig& cfg) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(t + h, y_new, k7);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      sum += (err / scale) * (err / scale);
    }
    return std::sqrt(sum / static_cast<double>(n));
  }

  void rk4(double t, const Vecd& y, const Vecd& k1, double h, Vecd& y_new) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  // Untimed single step used by the terminal-event bisection.
  void advance(Method m, double t, const Vecd& y, const Vecd& k1, double h, Vecd& y_new,
               const IntegratorConfig& cfg) {
    if (m == Method::RK4) {
      rk4(t, y, k1, h, y_new);
    } else {
      Vecd k7(n);
      dopri(t, y, k1, h, y_new, k7, cfg);
    }
  }
};

bool all_finite(const Vecd& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string_view to_string(Method m) {
  return m == Method::RK4 ? "RK4" : "AdaptiveRK45";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Completed: return "Completed";
    case Status::CollisionAbort: return "CollisionAbort";
    case Status::StepUnderflow: return "StepUnderflow";
    case Status::MaxSteps: return "MaxSteps";
  }
  return "?";
}

void IntegratorConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("integrator." + field + ": " + why);
  };
  if (!(rel_tol > 0.0)) fail("rel_tol", "must be positive");
  if (!(abs_tol > 0.0)) fail("abs_tol", "must be positive");
  if (!(h_min > 0.0)) fail("h_min", "must be positive");
  if (!(h_min <= h_init)) fail("h_init", "must be >= h_min");
  if (!(h_init <= h_max)) fail("h_init", "must be <= h_max");
  if (!std::isfinite(t_end)) fail("t_end", "must be finite");
  if (max_steps == 0) fail("max_steps", "must be positive");
  if (!(collision_r >= 0.0)) fail("collision_r", "must be non-negative");
}

double Trajectory::physical_time(std::size_t i) const {
  const Sample& s = samples.at(i);
  return system_info(system).cointegrates_time ? s.state.back() : s.time;
}

std::vector<double> rk4_advance(SystemId sys, double t, std::span<const double> state, double h,
                                const RhsContext& ctx) {
  Stepper st(sys, ctx, state.size());
  Vecd y(state.begin(), state.end()), k1(state.size()), out(state.size());
  st.f(t, y, k1);
  st.rk4(t, y, k1, h, out);
  return out;
}

std::vector<double> hermite_interpolate(const Sample& a, const Sample& b, double x) {
  const double h = b.time - a.time;
  const double s = (x - a.time) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  Vecd out(a.state.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * a.state[i] + h10 * h * a.derivative[i] + h01 * b.state[i] +
             h11 * h * b.derivative[i];
  return out;
}

Trajectory integrate(SystemId sys, std::span<const double> s0, const RhsContext& ctx,
                     const IntegratorConfig& cfg, double t0) {
  cfg.validate();
  ctx.params.validate();
  const auto& info = system_info(sys);
  const std::size_t n = state_size(sys);
  if (s0.size() != n)
    throw std::invalid_argument(std::string(info.name) + ": initial state has size " +
                                std::to_string(s0.size()) + ", expected " + std::to_string(n));
  const bool phys_end = cfg.end == EndCondition::PhysicalTime;
  if (phys_end && !info.cointegrates_time)
    throw std::invalid_argument(std::string(info.name) +
                                ": physical-time end needs a co-integrated time");
  const double t_start_end = phys_end ? s0.back() : t0;
  if (!(cfg.t_end > t_start_end))
    throw std::invalid_argument("integrator.t_end: must exceed the initial time");

  const bool singular =
      info.singular && !((sys == SystemId::DampedPowerLaw2D ||
                          sys == SystemId::AutonomousPowerLaw2D) && ctx.params.n_power == 0);

  Trajectory traj;
  traj.system = sys;
  Stepper st(sys, ctx, n);

  Vecd y(s0.begin(), s0.end()), k1(n), y_new(n), k7(n);
  double t = t0;

  auto abort = [&](Status s, std::string why) {
    traj.status = s;
    traj.message = std::move(why);
    return traj;
  };
  auto record = [&](double time, const Vecd& state, const Vecd& deriv) {
    Sample smp;
    smp.time = time;
    smp.state = state;
    smp.derivative = deriv;
    smp.conserved = evaluate_conserved(sys, time, state, ctx);
    traj.samples.push_back(std::move(smp));
  };
  auto end_of = [&](const Vecd& state, double time) { return phys_end ? state.back() : time; };
  auto collided = [&](const Vecd& state) {
    return singular && physical_radius(sys, state, ctx) < cfg.collision_r;
  };

  try {
    if (collided(y)) return abort(Status::CollisionAbort, "initial state inside collision radius");
    st.f(t, y, k1);
  } catch (const CollisionError& e) {
    return abort(Status::CollisionAbort, e.what());
  }
  record(t, y, k1);

  double h = cfg.method == Method::RK4 ? cfg.h_init : std::min(cfg.h_init, cfg.h_max);
  double fac_old = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (true) {
    if (++steps > cfg.max_steps) return abort(Status::MaxSteps, "step cap reached");

    double h_try = h;
    if (!phys_end) h_try = std::min(h_try, cfg.t_end - t);
    if (t + h_try == t)
      return abort(Status::StepUnderflow, "step no longer advances time at t = " + std::to_string(t));

    double err = 0.0;
    bool ok = true;
    try {
      if (cfg.method == Method::RK4) {
        st.rk4(t, y, k1, h_try, y_new);
        if (all_finite(y_new)) st.f(t + h_try, y_new, k7);
      } else {
        err = st.dopri(t, y, k1, h_try, y_new, k7, cfg);
      }
      ok = all_finite(y_new) && all_finite(k7) && std::isfinite(err);
    } catch (const CollisionError&) {
      ok = false;
      if (cfg.method == Method::RK4)
        return abort(Status::CollisionAbort, "field evaluated at the singularity");
    }

    if (cfg.method == Method::AdaptiveRK45) {
      if (!ok) err = 1e10;
      const double fac11 = std::pow(err, 0.2 - kBeta * 0.75);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(fac_old, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        double h_new = h_try / fac;
        if (last_rejected) h_new = std::min(h_new, h_try);
        fac_old = std::max(err, 1e-4);
        last_rejected = false;
        h = std::min(h_new, cfg.h_max);
      } else {
        ++traj.rejected_steps;
        last_rejected = true;
        h = h_try / std::min(1.0 / kFacMin, fac11 / kSafe);
        if (h < cfg.h_min)
          return abort(Status::StepUnderflow, "step size fell below h_min at t = " +
                                                  std::to_string(t));
        continue;
      }
    } else if (!ok) {
      return abort(Status::StepUnderflow, "non-finite state at t = " + std::to_string(t));
    }

    // Terminal event on co-integrated physical time.
    if (phys_end && y_new.back() >= cfg.t_end) {
      double lo = 0.0, hi = h_try;
      Vecd y_mid(n);
      try {
        for (int it = 0; it < 200 && hi - lo > 4e-16 * std::abs(t + hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          st.advance(cfg.method, t, y, k1, mid, y_mid, cfg);
          (y_mid.back() < cfg.t_end ? lo : hi) = mid;
        }
        st.advance(cfg.method, t, y, k1, hi, y_new, cfg);
        st.f(t + hi, y_new, k7);
      } catch (const CollisionError& e) {
        return abort(Status::CollisionAbort, e.what());
      }
      h_try = hi;
    }

    t += h_try;
    y.swap(y_new);
    k1.swap(k7);
    record(t, y, k1);

    if (collided(y))
      return abort(Status::CollisionAbort, "r fell below collision_r at t = " + std::to_string(t));
    if (end_of(y, t) >= cfg.t_end) break;
    if (cfg.method == Method::AdaptiveRK45 && h < cfg.h_min)
      return abort(Status::StepUnderflow, "step size fell below h_min at t = " + std::to_string(t));
  }
  traj.status = Status::Completed;
  return traj;
}

// --- paired runs ---------------------------------------------------------------

namespace {

void require_size(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw std::invalid_argument(std::string("scenario.") + what + ": expected " +
                                std::to_string(n) + " components, got " + std::to_string(v.size()));
}

std::size_t family_dim(PairFamily f) { return f == PairFamily::KustaanheimoStiefel ? 3 : 2; }

template <std::size_t D>
Vecd join(const Vec<D>& a, const Vec<D>& b) {
  Vecd out(a.c.begin(), a.c.end());
  out.insert(out.end(), b.c.begin(), b.c.end());
  return out;
}

template <std::size_t D>
Vecd maybe_damp(const PairScenario& s, const Vec<D>& x, const Vec<D>& xd, double t) {
  if (!s.damped_direct_leg) return join(x, xd);
  const PhaseState<D> d = autonomous_to_damp(PhaseState<D>{x, xd, t}, s.params);
  return join(d.q, d.v);
}

}  // namespace

SystemId regularized_system(PairFamily f) {
  switch (f) {
    case PairFamily::LeviCivita: return SystemId::RegularizedLC;
    case PairFamily::PowerLaw: return SystemId::RegularizedGenLC;
    case PairFamily::KustaanheimoStiefel: return SystemId::RegularizedKS;
    case PairFamily::BohlinSundman: return SystemId::ShiftedHO2D;
  }
  throw std::invalid_argument("unknown pair family");
}

SystemId direct_system(const PairScenario& s) {
  const bool d = s.damped_direct_leg;
  switch (s.family) {
    case PairFamily::LeviCivita:
      return d ? SystemId::DampedKepler2D : SystemId::AutonomousKepler2D;
    case PairFamily::PowerLaw:
      return d ? SystemId::DampedPowerLaw2D : SystemId::AutonomousPowerLaw2D;
    case PairFamily::KustaanheimoStiefel:
      return d ? SystemId::DampedKepler3D : SystemId::AutonomousKepler3D;
    case PairFamily::BohlinSundman:
      return SystemId::BohlinKepler2D;
  }
  throw std::invalid_argument("unknown pair family");
}

std::vector<double> regularized_initial_state(const PairScenario& s, RhsContext& ctx) {
  const SystemParams& p = s.params;
  ctx.params = p;
  const std::size_t d = family_dim(s.family);
  require_size(s.position, d, "position");
  require_size(s.velocity, d, "velocity");
  Vecd out;
  switch (s.family) {
    case PairFamily::LeviCivita: {
      const PhaseState<2> x{from_span<2>(s.position), from_span<2>(s.velocity), 0.0};
      ctx.script_e = script_e(EnergyFamily::Kepler2D, x, p);
      const Coord2 u = lc_inverse(x.q, p.gamma);
      out = join(u, lc_velocity_map(u, x.v, p));
      break;
    }
    case PairFamily::PowerLaw: {
      const PhaseState<2> x{from_span<2>(s.position), from_span<2>(s.velocity), 0.0};
      ctx.script_e = script_e(EnergyFamily::PowerLaw2D, x, p);
      const Coord2 u = gen_lc_inverse(x.q, p.n_power);
      out = join(u, gen_lc_velocity_map(u, x.v, p.n_power));
      break;
    }
    case PairFamily::KustaanheimoStiefel: {
      const PhaseState<3> x{from_span<3>(s.position), from_span<3>(s.velocity), 0.0};
      ctx.script_e = script_e(EnergyFamily::Kepler3D, x, p);
      const Coord4 u = ks_inverse(x.q);
      out = join(u, ks_velocity_map(u, x.v));
      break;
    }
    case PairFamily::BohlinSundman: {
      const PhaseState<2> q{from_span<2>(s.position), from_span<2>(s.velocity), 0.0};
      const PhaseState<2> x = damp_to_autonomous(q, p);
      ctx.kepler_energy = shifted_oscillator_energy(x.q, x.v, p);
      out = join(x.q, x.v);
      break;
    }
  }
  out.push_back(0.0);
  return out;
}

std::vector<double> map_back(const PairScenario& s, std::span<const double> reg) {
  const SystemParams& p = s.params;
  const double t = reg.back();
  switch (s.family) {
    case PairFamily::LeviCivita: {
      const Coord2 u = from_span<2>(reg.first(2)), up = from_span<2>(reg.subspan(2, 2));
      return maybe_damp(s, lc_forward(u, p.gamma), lc_physical_velocity(u, up, p), t);
    }
    case PairFamily::PowerLaw: {
      const Coord2 u = from_span<2>(reg.first(2)), up = from_span<2>(reg.subspan(2, 2));
      return maybe_damp(s, gen_lc_forward(u, p.n_power),
                        gen_lc_physical_velocity(u, up, p.n_power), t);
    }
    case PairFamily::KustaanheimoStiefel: {
      const Coord4 u = from_span<4>(reg.first(4)), up = from_span<4>(reg.subspan(4, 4));
      return maybe_damp(s, ks_forward(u), ks_physical_velocity(u, up), t);
    }
    case PairFamily::BohlinSundman: {
      const Coord2 w = from_span<2>(reg.first(2)), wp = from_span<2>(reg.subspan(2, 2));
      return join(bohlin_forward(w), bohlin_velocity_map(w, wp));
    }
  }
  throw std::invalid_argument("unknown pair family");
}

PairResult integrate_pair(const PairScenario& s) {
  PairResult res;
  const Vecd reg0 = regularized_initial_state(s, res.ctx);
  const SystemId dsys = direct_system(s);
  const SystemId rsys = regularized_system(s.family);
  const std::size_t d = family_dim(s.family);

  // The direct leg starts from the mapped-back regularized IC so both legs share one state.
  IntegratorConfig dcfg = s.config;
  dcfg.end = EndCondition::IndependentVariable;
  res.direct = integrate(dsys, map_back(s, reg0), res.ctx, dcfg);

  IntegratorConfig rcfg = s.config;
  rcfg.end = EndCondition::PhysicalTime;
  res.regularized = integrate(rsys, reg0, res.ctx, rcfg);

  res.mapped.system = dsys;
  res.mapped.status = res.regularized.status;
  res.mapped.message = res.regularized.message;

  const auto& rs = res.regularized.samples;
  std::size_t k = 0;
  for (const Sample& ds : res.direct.samples) {
    const double target = ds.time;
    if (rs.empty() || target > rs.back().state.back()) break;
    while (k + 1 < rs.size() && rs[k + 1].state.back() < target) ++k;

    Vecd reg_state;
    if (rs[k].state.back() >= target) {
      reg_state = rs[k].state;
    } else {
      // Solve t(tau) = target on the Hermite cubic of the time component.
      const Sample& a = rs[k];
      const Sample& b = rs[k + 1];
      double lo = a.time, hi = b.time;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermite_interpolate(a, b, mid).back() < target ? lo : hi) = mid;
      }
      reg_state = hermite_interpolate(a, b, 0.5 * (lo + hi));
    }

    Sample m;
    m.time = target;
    m.state = map_back(s, reg_state);
    m.conserved = evaluate_conserved(dsys, target, m.state, res.ctx);
    try {
      m.derivative = rhs(dsys, target, m.state, res.ctx);
    } catch (const CollisionError&) {
      m.derivative.assign(m.state.size(), 0.0);
    }
    double gx = 0.0, gv = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      gx += std::pow(m.state[i] - ds.state[i], 2);
      gv += std::pow(m.state[d + i] - ds.state[d + i], 2);
    }
    res.max_position_gap = std::max(res.max_position_gap, std::sqrt(gx));
    res.max_velocity_gap = std::max(res.max_velocity_gap, std::sqrt(gv));
    res.mapped.samples.push_back(std::move(m));
  }
  return res;
}

}  // namespace dampreg
