#include "dampreg/conserved.hpp"

#include <cmath>
#include <stdexcept>

namespace dampreg {

namespace {

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

template <std::size_t D>
double script_e_impl(EnergyFamily family, const PhaseState<D>& s, const SystemParams& p) {
  const double r = norm(s.q);
  const double lam2 = p.lambda * p.lambda;
  const double kinetic = 0.5 * norm2(s.v);
  const double repulsive = lam2 / 8.0 * r * r;
  double potential = 0.0;
  if (family == EnergyFamily::PowerLaw2D) {
    if (p.n_power == 0) {
      potential = p.mu();
    } else {
      if (r == 0.0) throw SingularInputError("script_e: undefined at r = 0");
      potential = p.mu() / std::pow(r, p.power_exponent());
    }
  } else {
    if (r == 0.0) throw SingularInputError("script_e: undefined at r = 0");
    potential = p.mu() / r;
  }
  return -(kinetic - repulsive - potential);
}

}  // namespace

double script_e(EnergyFamily family, const PhaseState<2>& s, const SystemParams& p) {
  if (family == EnergyFamily::Kepler3D)
    throw std::invalid_argument("script_e: Kepler3D needs a 3-D state");
  return script_e_impl(family, s, p);
}

double script_e(EnergyFamily family, const PhaseState<3>& s, const SystemParams& p) {
  if (family != EnergyFamily::Kepler3D)
    throw std::invalid_argument("script_e: planar families need a 2-D state");
  return script_e_impl(family, s, p);
}

double angular_momentum(const PhaseState<2>& s, const SystemParams& p) {
  const Coord2 mom = p.m * s.v - (0.5 * p.lambda * p.m) * s.q;
  return s.q[0] * mom[1] - s.q[1] * mom[0];
}

Coord3 angular_momentum(const PhaseState<3>& s, const SystemParams& p) {
  const Coord3 mom = p.m * s.v - (0.5 * p.lambda * p.m) * s.q;
  return cross(s.q, mom);
}

double oscillator_hamiltonian(OscillatorFamily family, std::span<const double> u,
                              std::span<const double> u_prime, const RhsContext& ctx) {
  const SystemParams& p = ctx.params;
  const double m = p.m;
  const double lam2 = p.lambda * p.lambda;
  const double u2 = sum_sq(u);
  const double kinetic = 0.5 * m * sum_sq(u_prime);
  switch (family) {
    case OscillatorFamily::LeviCivita:
      return kinetic + m * ctx.script_e / (4.0 * p.c * p.c) * u2 -
             m * lam2 * p.gamma * p.gamma / (32.0 * p.c * p.c) * u2 * u2 * u2;
    case OscillatorFamily::GeneralizedLeviCivita: {
      const int n = p.n_power;
      const double np1sq = (n + 1.0) * (n + 1.0);
      return kinetic + ctx.script_e * m * np1sq * std::pow(u2, n) -
             lam2 / 8.0 * m * np1sq * std::pow(u2, 2 * n + 1);
    }
    case OscillatorFamily::KustaanheimoStiefel:
      return kinetic + 4.0 * m * ctx.script_e * u2 - 0.5 * m * lam2 * u2 * u2 * u2;
  }
  throw std::invalid_argument("oscillator_hamiltonian: unknown family");
}

double script_e_regularized(OscillatorFamily family, std::span<const double> u,
                            std::span<const double> u_prime, const SystemParams& p) {
  const double u2 = sum_sq(u);
  const double up2 = sum_sq(u_prime);
  const double lam2 = p.lambda * p.lambda;
  const double mu = p.mu();
  switch (family) {
    case OscillatorFamily::LeviCivita: {
      if (u2 == 0.0) throw SingularInputError("script_e_regularized: undefined at U = 0");
      const double r = p.gamma * u2;
      return -(2.0 * p.c * p.c * p.gamma * up2 / r - lam2 / 8.0 * r * r - mu / r);
    }
    case OscillatorFamily::GeneralizedLeviCivita: {
      const int n = p.n_power;
      if (n > 0 && u2 == 0.0)
        throw SingularInputError("script_e_regularized: undefined at U = 0");
      const double np1sq = (n + 1.0) * (n + 1.0);
      const double r2n = std::pow(u2, n);
      return -(0.5 * up2 / (np1sq * r2n) - lam2 / 8.0 * r2n * u2 - mu / r2n);
    }
    case OscillatorFamily::KustaanheimoStiefel: {
      if (u2 == 0.0) throw SingularInputError("script_e_regularized: undefined at U = 0");
      const double r = u2;
      // -16 script_e r = 2|U'|^2 - 2 lambda^2 r^3 - 16 mu
      return (16.0 * mu + 2.0 * lam2 * r * r * r - 2.0 * up2) / (16.0 * r);
    }
  }
  throw std::invalid_argument("script_e_regularized: unknown family");
}

double homogeneous_reduced_hamiltonian(const Coord4& u, const Coord4& p_tilde, double energy,
                                       const SystemParams& p) {
  const double r = norm2(u);
  return norm2(p_tilde) / (2.0 * p.m) + 4.0 * energy * r -
         0.5 * p.m * p.lambda * p.lambda * r * r * r;
}

double homogeneous_hamiltonian(const Coord4& u, const Coord4& p_tilde, double energy,
                               const SystemParams& p) {
  const double p_s = -4.0 * p.k;
  return homogeneous_reduced_hamiltonian(u, p_tilde, energy, p) + p_s;
}

HomogeneousEquivalenceReport homogeneous_equivalence_check(
    std::span<const RegularizedState<4>> trajectory, const RhsContext& ctx) {
  const SystemParams& p = ctx.params;
  const double energy = p.m * ctx.script_e;
  const double strength = 4.0 * p.k;
  HomogeneousEquivalenceReport rep;
  rep.samples = trajectory.size();
  if (trajectory.empty()) return rep;

  const auto h_of = [&](const RegularizedState<4>& s) {
    return oscillator_hamiltonian(OscillatorFamily::KustaanheimoStiefel, s.u.span(),
                                  s.u_prime.span(), ctx);
  };
  const double h0 = h_of(trajectory.front());
  for (const auto& s : trajectory) {
    const Coord4 p_tilde = p.m * s.u_prime;
    const double h_red = homogeneous_reduced_hamiltonian(s.u, p_tilde, energy, p);
    const double h_osc = h_of(s);
    rep.max_identity_gap = std::max(rep.max_identity_gap, std::abs(h_red - h_osc));
    rep.sextic_relative_drift = std::max(rep.sextic_relative_drift, std::abs(h_osc - h0) / std::abs(h0));
    rep.strength_relative_gap =
        std::max(rep.strength_relative_gap, std::abs(h_red - strength) / std::abs(strength));
    rep.max_constraint =
        std::max(rep.max_constraint, std::abs(homogeneous_hamiltonian(s.u, p_tilde, energy, p)));
  }
  return rep;
}

double oscillator_frequency_from_energy(double energy, double m) {
  if (!(energy > 0.0)) throw std::invalid_argument("oscillator frequency needs E > 0");
  return std::sqrt(8.0 * energy / m);
}

double shifted_oscillator_energy(const Coord2& x, const Coord2& x_prime, const SystemParams& p) {
  return 0.5 * p.m * (norm2(x_prime) + p.shifted_omega2() * norm2(x));
}

BohlinEnergies bohlin_energies(const PhaseState<2>& damped_ho, const SystemParams& p) {
  const PhaseState<2> shifted = damp_to_autonomous(damped_ho, p);
  BohlinEnergies out;
  out.e_shifted = shifted_oscillator_energy(shifted.q, shifted.v, p);
  out.e_kepler_predicted = -p.m / 8.0 * p.shifted_omega2();
  out.k_identified = out.e_shifted / 4.0;
  return out;
}

double kepler_energy_2d(const Coord2& z, const Coord2& zdot, double m, double k) {
  const double r = norm(z);
  if (r == 0.0) throw SingularInputError("kepler_energy_2d: undefined at Z = 0");
  return 0.5 * m * norm2(zdot) - k / r;
}

ConservedSet evaluate_conserved(SystemId sys, double time, std::span<const double> state,
                                const RhsContext& ctx) {
  const SystemParams& p = ctx.params;
  const std::size_t d = system_info(sys).coord_dim;
  const auto q = state.first(d);
  const auto v = state.subspan(d, d);
  ConservedSet out;

  auto planar = [&](bool damped) {
    PhaseState<2> s{from_span<2>(q), from_span<2>(v), time};
    return damped ? damp_to_autonomous(s, p) : s;
  };
  auto try_energy = [&](auto&& f) {
    try {
      out.script_e = f();
    } catch (const SingularInputError&) {
    }
  };

  switch (sys) {
    case SystemId::DampedKepler2D:
    case SystemId::AutonomousKepler2D:
    case SystemId::DampedPowerLaw2D:
    case SystemId::AutonomousPowerLaw2D: {
      const bool damped = sys == SystemId::DampedKepler2D || sys == SystemId::DampedPowerLaw2D;
      const bool power = sys == SystemId::DampedPowerLaw2D || sys == SystemId::AutonomousPowerLaw2D;
      const PhaseState<2> s = planar(damped);
      try_energy([&] { return script_e(power ? EnergyFamily::PowerLaw2D : EnergyFamily::Kepler2D, s, p); });
      out.ang_mom = {angular_momentum(s, p)};
      break;
    }
    case SystemId::DampedKepler3D:
    case SystemId::AutonomousKepler3D: {
      PhaseState<3> s{from_span<3>(q), from_span<3>(v), time};
      if (sys == SystemId::DampedKepler3D) s = damp_to_autonomous(s, p);
      try_energy([&] { return script_e(EnergyFamily::Kepler3D, s, p); });
      const Coord3 l = angular_momentum(s, p);
      out.ang_mom = {l[0], l[1], l[2]};
      break;
    }
    case SystemId::RegularizedLC:
    case SystemId::RegularizedGenLC:
    case SystemId::RegularizedKS: {
      const OscillatorFamily fam = sys == SystemId::RegularizedLC ? OscillatorFamily::LeviCivita
                                   : sys == SystemId::RegularizedGenLC
                                       ? OscillatorFamily::GeneralizedLeviCivita
                                       : OscillatorFamily::KustaanheimoStiefel;
      try_energy([&] { return script_e_regularized(fam, q, v, p); });
      out.h_oscillator = oscillator_hamiltonian(fam, q, v, ctx);
      if (sys == SystemId::RegularizedKS)
        out.bilinear = bilinear_constraint(from_span<4>(q), from_span<4>(v));
      break;
    }
    case SystemId::DampedHO2D:
    case SystemId::ShiftedHO2D: {
      const PhaseState<2> s = planar(sys == SystemId::DampedHO2D);
      out.h_oscillator = shifted_oscillator_energy(s.q, s.v, p);
      out.ang_mom = {p.m * (s.q[0] * s.v[1] - s.q[1] * s.v[0])};
      break;
    }
    case SystemId::BohlinKepler2D: {
      const Coord2 z = from_span<2>(q);
      const Coord2 zd = from_span<2>(v);
      try_energy([&] { return -kepler_energy_2d(z, zd, p.m, 0.25 * ctx.kepler_energy) / p.m; });
      out.ang_mom = {p.m * (z[0] * zd[1] - z[1] * zd[0])};
      break;
    }
  }
  return out;
}

}  // namespace dampreg
