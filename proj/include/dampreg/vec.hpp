#pragma once

// Small fixed-size vectors and square matrices used throughout the library.
// Everything is double precision and row-major.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace dampreg {

template <std::size_t N>
struct Vec {
  std::array<double, N> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr const double& operator[](std::size_t i) const { return c[i]; }
  static constexpr std::size_t size() { return N; }

  std::span<const double, N> span() const { return std::span<const double, N>(c); }
  std::span<double, N> span() { return std::span<double, N>(c); }

  friend constexpr bool operator==(const Vec&, const Vec&) = default;

  constexpr Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
};

using Coord2 = Vec<2>;
using Coord3 = Vec<3>;
using Coord4 = Vec<4>;

template <std::size_t N>
constexpr Vec<N> operator+(Vec<N> a, const Vec<N>& b) {
  return a += b;
}
template <std::size_t N>
constexpr Vec<N> operator-(Vec<N> a, const Vec<N>& b) {
  return a -= b;
}
template <std::size_t N>
constexpr Vec<N> operator-(Vec<N> a) {
  for (auto& x : a.c) x = -x;
  return a;
}
template <std::size_t N>
constexpr Vec<N> operator*(double s, Vec<N> a) {
  return a *= s;
}
template <std::size_t N>
constexpr Vec<N> operator*(Vec<N> a, double s) {
  return a *= s;
}
template <std::size_t N>
constexpr Vec<N> operator/(Vec<N> a, double s) {
  for (auto& x : a.c) x /= s;
  return a;
}

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
constexpr double norm2(const Vec<N>& a) {
  return dot(a, a);
}

template <std::size_t N>
double norm(const Vec<N>& a) {
  return std::sqrt(norm2(a));
}

template <std::size_t N>
double max_abs(const Vec<N>& a) {
  double m = 0.0;
  for (double x : a.c) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
Vec<N> from_span(std::span<const double> s) {
  Vec<N> v;
  for (std::size_t i = 0; i < N; ++i) v[i] = s[i];
  return v;
}

// Coord2 doubles as the complex number x1 + i*x2.
inline std::complex<double> to_complex(const Coord2& v) { return {v[0], v[1]}; }
inline Coord2 from_complex(const std::complex<double>& z) { return Coord2{z.real(), z.imag()}; }

inline Coord3 cross(const Coord3& a, const Coord3& b) {
  return Coord3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <std::size_t N>
struct Mat {
  std::array<double, N * N> a{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static constexpr Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static constexpr Mat from_columns(const std::array<Vec<N>, N>& cols) {
    Mat m;
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) m(i, j) = cols[j][i];
    return m;
  }

  constexpr Vec<N> column(std::size_t j) const {
    Vec<N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = (*this)(i, j);
    return v;
  }

  friend constexpr bool operator==(const Mat&, const Mat&) = default;
};

using Matrix2 = Mat<2>;
using Matrix4 = Mat<4>;

template <std::size_t N>
constexpr Mat<N> transpose(const Mat<N>& m) {
  Mat<N> t;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) t(j, i) = m(i, j);
  return t;
}

template <std::size_t N>
constexpr Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

template <std::size_t N>
constexpr Vec<N> operator*(const Mat<N>& m, const Vec<N>& v) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) s += m(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

template <std::size_t N>
constexpr Mat<N> operator*(double s, Mat<N> m) {
  for (auto& x : m.a) x *= s;
  return m;
}

template <std::size_t N>
constexpr Mat<N> operator-(Mat<N> x, const Mat<N>& y) {
  for (std::size_t i = 0; i < N * N; ++i) x.a[i] -= y.a[i];
  return x;
}

template <std::size_t N>
double max_abs(const Mat<N>& m) {
  double r = 0.0;
  for (double x : m.a) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace dampreg
