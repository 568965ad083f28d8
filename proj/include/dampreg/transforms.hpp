#pragma once

// Coordinate, velocity/momentum and time maps between the damped systems,
// their autonomous equivalents and the regularized oscillators.

#include <stdexcept>
#include <string>

#include "dampreg/algebra.hpp"
#include "dampreg/vec.hpp"

namespace dampreg {

/// Raised by maps that are undefined at the collision point (|U| = 0).
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical constants of one scenario.
struct SystemParams {
  double m = 1.0;       ///< reduced mass
  double k = 1.0;       ///< potential strength
  double lambda = 0.0;  ///< damping coefficient (1/time)
  int n_power = 1;      ///< N in the potential r^(-2N/(N+1)); N = 1 is Kepler
  double c = 0.25;      ///< Levi-Civita time-reparametrization constant
  double gamma = 1.0;   ///< Levi-Civita scale (1/length)
  double omega = 1.0;   ///< oscillator frequency for the damped harmonic oscillator

  double mu() const { return k / m; }

  /// Exponent 2N/(N+1) of the power-law potential.
  double power_exponent() const { return 2.0 * n_power / (n_power + 1.0); }

  /// Shifted oscillator frequency squared, Omega^2 - lambda^2/4.
  double shifted_omega2() const { return omega * omega - 0.25 * lambda * lambda; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

template <std::size_t D>
struct PhaseState {
  Vec<D> q;
  Vec<D> v;
  double t = 0.0;
};

template <std::size_t D>
struct RegularizedState {
  Vec<D> u;
  Vec<D> u_prime;  ///< dU/dtau
  double tau = 0.0;
  double t = 0.0;  ///< co-integrated physical time
};

// --- time-dependent point transform X = x exp(lambda t / 2) -----------------

template <std::size_t D>
PhaseState<D> damp_to_autonomous(const PhaseState<D>& s, const SystemParams& p);

template <std::size_t D>
PhaseState<D> autonomous_to_damp(const PhaseState<D>& s, const SystemParams& p);

// --- Levi-Civita -------------------------------------------------------------

/// Z = gamma U^2.
Coord2 lc_forward(const Coord2& u, double gamma = 1.0);

/// Principal square root of Z/gamma: U1 >= 0, and U2 >= 0 when U1 == 0.
Coord2 lc_inverse(const Coord2& z, double gamma = 1.0);

/// dU/dtau from the physical velocity dZ/dt, using dt/dtau = r/c.
Coord2 lc_velocity_map(const Coord2& u, const Coord2& zdot, const SystemParams& p);

/// dZ/dt from (U, dU/dtau); inverse of lc_velocity_map.
Coord2 lc_physical_velocity(const Coord2& u, const Coord2& u_prime, const SystemParams& p);

// --- power-law generalization ------------------------------------------------

/// Z = U_hat_N U, i.e. the complex power U^(N+1).
Coord2 gen_lc_forward(const Coord2& u, int n);

/// Principal (N+1)-th root.
Coord2 gen_lc_inverse(const Coord2& z, int n);

/// dU/dtau from dZ/dt with dt/dtau = (N+1)^2 R^(2N).
Coord2 gen_lc_velocity_map(const Coord2& u, const Coord2& zdot, int n);

Coord2 gen_lc_physical_velocity(const Coord2& u, const Coord2& u_prime, int n);

/// Among the N+1 roots U e^(2 pi i j/(N+1)) that share the image of u,
/// returns the one closest to ref.
Coord2 nearest_lc_branch(const Coord2& u, const Coord2& ref, int n);

// --- Kustaanheimo-Stiefel ----------------------------------------------------

/// X = U U*, k-component dropped.
Coord3 ks_forward(const Coord4& u);

/// One point on the fiber over X. For X0 >= 0 the section U3 = 0 is used,
/// otherwise U2 = 0. ks_forward(ks_inverse(x)) == x.
Coord4 ks_inverse(const Coord3& x);

/// U' = 2 A(U)^T (Xdot, 0). The result always satisfies the bilinear relation.
Coord4 ks_velocity_map(const Coord4& u, const Coord3& xdot);

/// Xdot = A(U) U' / (2r), first three components.
Coord3 ks_physical_velocity(const Coord4& u, const Coord4& u_prime);

/// P = A(U) p~ / (2r) with r = |U|^2, all four components. The last one
/// vanishes when (U, p~) satisfies the bilinear constraint.
Coord4 ks_momentum_map_full(const Coord4& u, const Coord4& p_tilde);

Coord3 ks_momentum_map(const Coord4& u, const Coord4& p_tilde);

/// U0 U3' - U3 U0' + U2 U1' - U1 U2'.
double bilinear_constraint(const Coord4& u, const Coord4& u_prime);

/// Point on the fiber of u (u e^(k phi)) closest to ref.
Coord4 ks_align_fiber(const Coord4& u, const Coord4& ref);

// --- Bohlin-Sundman ----------------------------------------------------------

/// Z = omega^2 (complex square).
Coord2 bohlin_forward(const Coord2& w);

/// dZ/dt = (dw/dtau) / (2 conj(w)).
Coord2 bohlin_velocity_map(const Coord2& w, const Coord2& w_prime);

// --- time reparametrizations -------------------------------------------------

enum class Regularization { LeviCivita, PowerLaw, KustaanheimoStiefel, BohlinSundman };

/// dt/dtau as a function of the physical separation r:
///   LeviCivita          r / c
///   PowerLaw            (N+1)^2 r^(2N/(N+1))
///   KustaanheimoStiefel 4 r
///   BohlinSundman       4 r   (r = |omega|^2)
/// Throws std::invalid_argument for r < 0.
double time_rate(Regularization reg, double r, const SystemParams& p);

}  // namespace dampreg
