#pragma once

// Conserved quantities of the autonomous and regularized flows, the
// homogeneous-Hamiltonian identity for the K-S oscillator, and the energy
// identifications of the Bohlin-Sundman chain.
//
// Sign convention: -script_e equals the autonomous Hamiltonian per unit mass,
// so bound orbits have script_e > 0. All script_e values are per unit mass
// (script_e = E/m); the regularized oscillators multiply by m where their
// Lagrangians carry it.

#include <optional>
#include <span>
#include <vector>

#include "dampreg/dynamics.hpp"
#include "dampreg/transforms.hpp"

namespace dampreg {

enum class EnergyFamily { Kepler2D, PowerLaw2D, Kepler3D };

enum class OscillatorFamily { LeviCivita, GeneralizedLeviCivita, KustaanheimoStiefel };

/// Per-mass script_e of an autonomous state. Throws SingularInputError at r = 0
/// (except the N = 0 power law, whose potential is constant).
double script_e(EnergyFamily family, const PhaseState<2>& s, const SystemParams& p);
double script_e(EnergyFamily family, const PhaseState<3>& s, const SystemParams& p);

/// X1 P2 - X2 P1 with canonical momenta P = m Xdot - (lambda/2) m X.
double angular_momentum(const PhaseState<2>& s, const SystemParams& p);
Coord3 angular_momentum(const PhaseState<3>& s, const SystemParams& p);

/// Oscillator Hamiltonian with momenta p = m U'. u and u_prime have length 2
/// (LC, generalized LC) or 4 (KS).
double oscillator_hamiltonian(OscillatorFamily family, std::span<const double> u,
                              std::span<const double> u_prime, const RhsContext& ctx);

/// Per-mass script_e computed from regularized coordinates only.
double script_e_regularized(OscillatorFamily family, std::span<const double> u,
                            std::span<const double> u_prime, const SystemParams& p);

/// Non-homogeneous Hamiltonian obtained from the homogeneous formalism,
///   |p~|^2/2m + 4E |U|^2 - (m lambda^2/2) |U|^6,
/// with E = m script_e. Along a true flow it equals -p_s = 4k.
double homogeneous_reduced_hamiltonian(const Coord4& u, const Coord4& p_tilde, double energy,
                                       const SystemParams& p);

/// Homogeneous Hamiltonian H^H = H_reduced + p_s with p_s = -4k; zero on shell.
double homogeneous_hamiltonian(const Coord4& u, const Coord4& p_tilde, double energy,
                               const SystemParams& p);

struct HomogeneousEquivalenceReport {
  std::size_t samples = 0;
  double max_identity_gap = 0.0;   ///< max |H_reduced - H_oscillator| (absolute)
  double sextic_relative_drift = 0.0;  ///< max |H(s) - H(0)| / |H(0)|
  double strength_relative_gap = 0.0;  ///< max |H_reduced - 4k| / 4k
  double max_constraint = 0.0;     ///< max |H^H|
};

HomogeneousEquivalenceReport homogeneous_equivalence_check(
    std::span<const RegularizedState<4>> trajectory, const RhsContext& ctx);

/// Harmonic frequency omega_0 from 4E = m omega_0^2 / 2. Requires E > 0.
double oscillator_frequency_from_energy(double energy, double m);

struct BohlinEnergies {
  double e_shifted = 0.0;           ///< (m/2)(|x'|^2 + Omega~^2 |x|^2)
  double e_kepler_predicted = 0.0;  ///< -(m/8)(Omega^2 - lambda^2/4)
  double k_identified = 0.0;        ///< E_shifted / 4
};

/// The state is a damped-oscillator state (q, q', tau); it is carried to the
/// shifted oscillator by x = q exp(lambda tau/2) before evaluation.
BohlinEnergies bohlin_energies(const PhaseState<2>& damped_ho, const SystemParams& p);

/// (m/2)(|x'|^2 + Omega~^2 |x|^2) of a shifted-oscillator state.
double shifted_oscillator_energy(const Coord2& x, const Coord2& x_prime, const SystemParams& p);

/// (m/2)|Zdot|^2 - k/|Z|.
double kepler_energy_2d(const Coord2& z, const Coord2& zdot, double m, double k);

struct ConservedSet {
  std::optional<double> script_e;
  std::vector<double> ang_mom;  ///< one entry in 2-D, three in 3-D, empty if n/a
  std::optional<double> h_oscillator;
  std::optional<double> bilinear;
};

/// Everything conserved (or constraint-like) that applies to the system,
/// evaluated at one state. Quantities undefined at the state (e.g. script_e
/// at r = 0) are left empty.
ConservedSet evaluate_conserved(SystemId sys, double time, std::span<const double> state,
                                const RhsContext& ctx);

}  // namespace dampreg
