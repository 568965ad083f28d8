#pragma once

// Quaternions, the Levi-Civita and Kustaanheimo-Stiefel coordinate matrices,
// their signed-permutation column operators, and the power-law matrix
// recursion U_hat_N.

#include "dampreg/vec.hpp"

namespace dampreg {

/// Quaternion U0 + i U1 + j U2 + k U3, scalar first.
struct Quaternion {
  double u0 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Hamilton product with i*j = k, j*k = i, k*i = j.
Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

/// Negates the three imaginary parts.
Quaternion quat_conj(const Quaternion& q);

/// Negates the k part only. U * star(U) has vanishing k component.
Quaternion quat_star(const Quaternion& q);

double quat_norm2(const Quaternion& q);

inline Coord4 to_coord(const Quaternion& q) { return Coord4{q.u0, q.u1, q.u2, q.u3}; }
inline Quaternion to_quaternion(const Coord4& c) { return Quaternion{c[0], c[1], c[2], c[3]}; }

/// [[U1, -U2], [U2, U1]]; the matrix form of complex multiplication by U.
Matrix2 lc_matrix(const Coord2& u);

/// The 4x4 K-S matrix. Column j is permutation_apply(j, u), and
/// ks_matrix(u)^T ks_matrix(u) = |u|^2 I.
Matrix4 ks_matrix(const Coord4& u);

/// Signed permutation matrices. Planar indices are {1, 2}; quaternionic
/// indices are {0, 1, 2, 3}. Throws std::out_of_range for other indices.
Matrix2 planar_permutation(int index);
Matrix4 quaternionic_permutation(int index);

Coord2 permutation_apply(int index, const Coord2& u);
Coord4 permutation_apply(int index, const Coord4& u);

/// U_hat_0 = I, U^(N) = U_hat_{N-1} U, U_hat_N = (P1 U^(N), P2 U^(N)).
/// U_hat_N U is the complex power U^(N+1). Throws std::invalid_argument for n < 0.
Matrix2 uhat_n(const Coord2& u, int n);

}  // namespace dampreg
