#pragma once

// Vector fields for the damped central-force systems, their autonomous
// equivalents and the regularized oscillators.
//
// Every state is a flat array laid out as [q | v] or, for systems that
// co-integrate physical time, [q | v | t]. The independent variable passed to
// rhs() is physical time t for the original systems and fictitious time tau
// for the regularized ones.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "dampreg/transforms.hpp"

namespace dampreg {

enum class SystemId {
  DampedKepler2D,
  AutonomousKepler2D,
  DampedPowerLaw2D,
  AutonomousPowerLaw2D,
  RegularizedLC,
  RegularizedGenLC,
  DampedKepler3D,
  AutonomousKepler3D,
  RegularizedKS,
  DampedHO2D,
  ShiftedHO2D,
  BohlinKepler2D,
};

inline constexpr std::array<SystemId, 12> kAllSystems = {
    SystemId::DampedKepler2D,   SystemId::AutonomousKepler2D, SystemId::DampedPowerLaw2D,
    SystemId::AutonomousPowerLaw2D, SystemId::RegularizedLC,  SystemId::RegularizedGenLC,
    SystemId::DampedKepler3D,   SystemId::AutonomousKepler3D, SystemId::RegularizedKS,
    SystemId::DampedHO2D,       SystemId::ShiftedHO2D,        SystemId::BohlinKepler2D,
};

struct SystemInfo {
  std::string_view name;
  std::size_t coord_dim;
  bool cointegrates_time;  ///< state carries physical time as its last entry
  bool singular;           ///< field blows up at r = 0
  bool explicit_time;      ///< field depends on the independent variable
  std::optional<Regularization> regularization;
};

const SystemInfo& system_info(SystemId sys);
std::string_view to_string(SystemId sys);
std::optional<SystemId> parse_system_id(std::string_view name);
std::size_t state_size(SystemId sys);

/// Constants a vector field may need beyond SystemParams. script_e is the
/// per-mass conserved quantity that labels the constant-energy surface of the
/// regularized oscillators. kepler_energy is the conserved energy E of the
/// shifted oscillator; it fixes the Kepler strength k = E/4 of the Bohlin image.
struct RhsContext {
  SystemParams params;
  double script_e = 0.0;
  double kepler_energy = 0.0;
};

/// Thrown when a singular field is evaluated closer to the origin than
/// kCollisionRadius.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kCollisionRadius = 1e-10;

/// Writes d(state)/d(time) into out. Throws CollisionError for singular
/// systems at r < kCollisionRadius and std::invalid_argument on a dimension
/// mismatch.
void rhs(SystemId sys, double time, std::span<const double> state, const RhsContext& ctx,
         std::span<double> out);

std::vector<double> rhs(SystemId sys, double time, std::span<const double> state,
                        const RhsContext& ctx);

/// Physical separation r for the state (gamma|U|^2, |U|^2, R^(N+1), |q|, ...).
double physical_radius(SystemId sys, std::span<const double> state, const RhsContext& ctx);

/// One point along a trajectory with an externally supplied acceleration.
struct LagrangianSample {
  double time = 0.0;
  std::vector<double> q;
  std::vector<double> v;
  std::vector<double> a;
};

/// Norm of the Euler-Lagrange expression d/dt(dL/dv) - dL/dq of the system's
/// Lagrangian, evaluated with exact (hyper-dual) second derivatives of L.
/// Vanishes along true trajectories; the error is set by the supplied
/// accelerations.
double lagrangian_residual(SystemId sys, const LagrangianSample& sample, const RhsContext& ctx);

/// The Lagrangian itself (for tests).
double lagrangian_value(SystemId sys, double time, std::span<const double> q,
                        std::span<const double> v, const RhsContext& ctx);

}  // namespace dampreg
