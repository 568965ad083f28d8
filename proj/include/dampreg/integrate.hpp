#pragma once

// Explicit integration of any SystemId (classic RK4 or Dormand-Prince 5(4)
// with PI step control), and the paired direct/regularized runs used to
// compare a singular flow with its regularization.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dampreg/conserved.hpp"
#include "dampreg/dynamics.hpp"

namespace dampreg {

enum class Method { RK4, AdaptiveRK45 };

enum class Status { Completed, CollisionAbort, StepUnderflow, MaxSteps };

/// What t_end refers to. PhysicalTime is only meaningful for systems that
/// co-integrate physical time; the run then stops when the last state entry
/// reaches t_end (located by bisection on the final sub-step).
enum class EndCondition { IndependentVariable, PhysicalTime };

std::string_view to_string(Method m);
std::string_view to_string(Status s);

struct IntegratorConfig {
  Method method = Method::AdaptiveRK45;
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double h_init = 1e-3;  ///< fixed step for RK4
  double h_min = 1e-16;
  double h_max = 1.0;
  double t_end = 1.0;
  std::size_t max_steps = 2'000'000;
  double collision_r = 1e-8;
  EndCondition end = EndCondition::IndependentVariable;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct Sample {
  double time = 0.0;  ///< independent variable (t, or tau for regularized systems)
  std::vector<double> state;
  std::vector<double> derivative;
  ConservedSet conserved;
};

struct Trajectory {
  SystemId system = SystemId::AutonomousKepler2D;
  std::vector<Sample> samples;
  Status status = Status::Completed;
  std::string message;  ///< reason for a non-Completed status
  std::size_t rejected_steps = 0;

  /// Physical time of a sample: the co-integrated entry when present.
  double physical_time(std::size_t i) const;
};

Trajectory integrate(SystemId sys, std::span<const double> s0, const RhsContext& ctx,
                     const IntegratorConfig& cfg, double t0 = 0.0);

/// One classic RK4 step of size h (h may be negative).
std::vector<double> rk4_advance(SystemId sys, double t, std::span<const double> state, double h,
                                const RhsContext& ctx);

/// Cubic Hermite interpolation of a state between two samples at time x.
std::vector<double> hermite_interpolate(const Sample& a, const Sample& b, double x);

// --- paired runs ---------------------------------------------------------------

enum class PairFamily { LeviCivita, PowerLaw, KustaanheimoStiefel, BohlinSundman };

/// ICs are autonomous coordinates at t = 0 (position/velocity of length 2,
/// or 3 for K-S). For BohlinSundman they are the damped-oscillator state
/// (q, dq/dtau) and t_end is Kepler time.
struct PairScenario {
  PairFamily family = PairFamily::LeviCivita;
  SystemParams params;
  std::vector<double> position;
  std::vector<double> velocity;
  bool damped_direct_leg = false;  ///< integrate the damped system instead of the autonomous one
  IntegratorConfig config;
};

struct PairResult {
  RhsContext ctx;
  Trajectory direct;
  Trajectory regularized;  ///< raw regularized run, samples in tau
  Trajectory mapped;       ///< regularized leg mapped back onto the direct time grid
  double max_position_gap = 0.0;
  double max_velocity_gap = 0.0;
};

SystemId direct_system(const PairScenario& s);
SystemId regularized_system(PairFamily f);

/// Initial regularized state [U | U' | t] and the context (script_e or the
/// shifted-oscillator energy) for the scenario.
std::vector<double> regularized_initial_state(const PairScenario& s, RhsContext& ctx);

/// Maps a regularized state [U | U' | t] back to the direct system's state.
std::vector<double> map_back(const PairScenario& s, std::span<const double> reg_state);

PairResult integrate_pair(const PairScenario& s);

}  // namespace dampreg
