#pragma once

// Executable checks of every equivalence between the damped systems and their
// regularizations, and the JSON report they produce.

#include <cstdint>
#include <string>
#include <vector>

#include "dampreg/integrate.hpp"

namespace dampreg {

enum class CheckKind {
  RoundTrip,
  ConservationDrift,
  LimitReduction,
  CollisionPassage,
  AlgebraicIdentity,
  HamiltonianEquivalence,
  BohlinEnergy,
};

std::string_view to_string(CheckKind k);

/// The computation a check performs. Each probe reduces to one measured
/// number that passes when it is <= the tolerance.
enum class Probe {
  // algebra
  LcGram,
  KsGram,
  UhatGram,
  UhatPower,
  PlanarCommute,
  QuaternionicNonCommute,
  PermutationOrthogonality,
  QuaternionNorm,
  KsHamiltonProduct,
  // static transform round-trips
  LcInverse,
  GenLcInverse,
  KsInverse,
  KsVelocity,
  PointTransform,
  PointTransformField,
  // dynamics
  Autonomy,
  RotationEquivariance,
  LagrangianResidual,
  LagrangianFiniteDifference,
  // integration
  PairRoundTrip,
  BilinearDrift,
  CollisionPair,
  EnergyDrift,
  RegularizedDrift,
  EnergyCrossCoordinates,
  CircularOrbit,
  KsHarmonicPeriod,
  TimeMonotone,
  Rk4Order,
  // limits
  GenLcMatchesLc,
  LcHarmonicLimit,
  KsHarmonicLimit,
  DampedLimit,
  AnalyticEllipse,
  // Hamiltonians
  SexticConstancy,
  HomogeneousStrength,
  LcOscillatorValue,
  // Bohlin-Sundman chain
  BohlinKeplerEnergy,
  BohlinStrength,
};

struct Scenario {
  PairFamily family = PairFamily::LeviCivita;
  SystemParams params;
  std::vector<double> position;
  std::vector<double> velocity;
  double t_end = 20.0;
  bool damped_direct_leg = false;
  std::size_t samples = 1000;  ///< randomized draws
};

struct CheckSpec {
  std::string name;
  CheckKind kind = CheckKind::AlgebraicIdentity;
  Probe probe = Probe::LcGram;
  Scenario scenario;
  double tolerance = 1e-12;
  std::vector<SystemId> systems;  ///< systems the check exercises
  std::uint64_t seed = 0xC0FFEE;
};

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::AlgebraicIdentity;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string error;  ///< set when the check could not run
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Integrator settings shared by the trajectory checks.
IntegratorConfig reference_config(double t_end);

/// Runs one check. Never throws: failures to construct or run the scenario
/// are reported through CheckResult::error with pass = false.
CheckResult run_check(const CheckSpec& spec);

std::vector<CheckSpec> standard_suite(std::uint64_t seed = kDefaultSeed);

/// Keeps the checks whose name contains filter (all of them when empty).
std::vector<CheckSpec> filter_suite(const std::vector<CheckSpec>& suite, const std::string& filter);

/// Runs the checks on up to `threads` workers. Results keep the input order.
std::vector<CheckResult> run_suite(const std::vector<CheckSpec>& specs, unsigned threads = 1);

/// Report as a JSON array of {name, kind, measured, tolerance, pass, seconds}
/// (plus "error" when present). Without timing, seconds is written as 0 so
/// repeated runs are byte-identical.
std::string report_json(const std::vector<CheckResult>& results, bool with_timing = true);

// Oracles exposed for tests.

/// Position and velocity of the unperturbed Kepler orbit after time t, by the
/// Lagrange f and g functions (bound orbits only).
struct KeplerState {
  std::vector<double> position;
  std::vector<double> velocity;
};
KeplerState kepler_propagate(const std::vector<double>& r0, const std::vector<double>& v0,
                             double mu, double t);

}  // namespace dampreg
