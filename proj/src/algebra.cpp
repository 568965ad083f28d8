#include "dampreg/algebra.hpp"

#include <stdexcept>
#include <string>

namespace dampreg {

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  return Quaternion{
      a.u0 * b.u0 - a.u1 * b.u1 - a.u2 * b.u2 - a.u3 * b.u3,
      a.u0 * b.u1 + a.u1 * b.u0 + a.u2 * b.u3 - a.u3 * b.u2,
      a.u0 * b.u2 - a.u1 * b.u3 + a.u2 * b.u0 + a.u3 * b.u1,
      a.u0 * b.u3 + a.u1 * b.u2 - a.u2 * b.u1 + a.u3 * b.u0,
  };
}

Quaternion quat_conj(const Quaternion& q) { return Quaternion{q.u0, -q.u1, -q.u2, -q.u3}; }

Quaternion quat_star(const Quaternion& q) { return Quaternion{q.u0, q.u1, q.u2, -q.u3}; }

double quat_norm2(const Quaternion& q) {
  return q.u0 * q.u0 + q.u1 * q.u1 + q.u2 * q.u2 + q.u3 * q.u3;
}

Matrix2 lc_matrix(const Coord2& u) {
  Matrix2 m;
  m(0, 0) = u[0];
  m(0, 1) = -u[1];
  m(1, 0) = u[1];
  m(1, 1) = u[0];
  return m;
}

Matrix4 ks_matrix(const Coord4& u) {
  Matrix4 m;
  m.a = {
      u[0], -u[1], -u[2], u[3],   //
      u[1], u[0],  -u[3], -u[2],  //
      u[2], u[3],  u[0],  u[1],   //
      u[3], -u[2], u[1],  -u[0],
  };
  return m;
}

Matrix2 planar_permutation(int index) {
  Matrix2 p;
  switch (index) {
    case 1:
      return Matrix2::identity();
    case 2:
      // (U1, U2) -> (-U2, U1)
      p(0, 1) = -1.0;
      p(1, 0) = 1.0;
      return p;
    default:
      throw std::out_of_range("planar permutation index must be 1 or 2, got " +
                              std::to_string(index));
  }
}

Matrix4 quaternionic_permutation(int index) {
  Matrix4 p;
  switch (index) {
    case 0:
      return Matrix4::identity();
    case 1:
      // (-U1, U0, U3, -U2)
      p(0, 1) = -1.0;
      p(1, 0) = 1.0;
      p(2, 3) = 1.0;
      p(3, 2) = -1.0;
      return p;
    case 2:
      // (-U2, -U3, U0, U1)
      p(0, 2) = -1.0;
      p(1, 3) = -1.0;
      p(2, 0) = 1.0;
      p(3, 1) = 1.0;
      return p;
    case 3:
      // (U3, -U2, U1, -U0)
      p(0, 3) = 1.0;
      p(1, 2) = -1.0;
      p(2, 1) = 1.0;
      p(3, 0) = -1.0;
      return p;
    default:
      throw std::out_of_range("quaternionic permutation index must be in 0..3, got " +
                              std::to_string(index));
  }
}

Coord2 permutation_apply(int index, const Coord2& u) { return planar_permutation(index) * u; }
Coord4 permutation_apply(int index, const Coord4& u) { return quaternionic_permutation(index) * u; }

Matrix2 uhat_n(const Coord2& u, int n) {
  if (n < 0) throw std::invalid_argument("uhat_n requires N >= 0, got " + std::to_string(n));
  Matrix2 uhat = Matrix2::identity();
  for (int level = 1; level <= n; ++level) {
    const Coord2 un = uhat * u;
    uhat = Matrix2::from_columns({permutation_apply(1, un), permutation_apply(2, un)});
  }
  return uhat;
}

}  // namespace dampreg
