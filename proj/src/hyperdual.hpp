#pragma once

// Hyper-dual numbers f + e1 eps1 + e2 eps2 + e12 eps1 eps2 with
// eps1^2 = eps2^2 = 0. Evaluating a function on x + eps1 a + eps2 b yields
// its exact first derivatives along a and b and the mixed second derivative.

#include <cmath>

namespace dampreg::detail {

struct HyperDual {
  double f = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double e12 = 0.0;

  HyperDual() = default;
  HyperDual(double value) : f(value) {}  // NOLINT(google-explicit-constructor)
  HyperDual(double value, double d1, double d2, double d12) : f(value), e1(d1), e2(d2), e12(d12) {}
};

inline HyperDual operator+(const HyperDual& a, const HyperDual& b) {
  return {a.f + b.f, a.e1 + b.e1, a.e2 + b.e2, a.e12 + b.e12};
}
inline HyperDual operator-(const HyperDual& a, const HyperDual& b) {
  return {a.f - b.f, a.e1 - b.e1, a.e2 - b.e2, a.e12 - b.e12};
}
inline HyperDual operator-(const HyperDual& a) { return {-a.f, -a.e1, -a.e2, -a.e12}; }
inline HyperDual operator*(const HyperDual& a, const HyperDual& b) {
  return {a.f * b.f, a.f * b.e1 + a.e1 * b.f, a.f * b.e2 + a.e2 * b.f,
          a.f * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.f};
}

// Chain rule for a scalar function with value g, slope dg and curvature d2g at a.f.
inline HyperDual apply(const HyperDual& a, double g, double dg, double d2g) {
  return {g, dg * a.e1, dg * a.e2, dg * a.e12 + d2g * a.e1 * a.e2};
}

inline HyperDual operator/(const HyperDual& a, const HyperDual& b) {
  const double inv = 1.0 / b.f;
  return a * apply(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline HyperDual exp(const HyperDual& a) {
  const double e = std::exp(a.f);
  return apply(a, e, e, e);
}

inline HyperDual pow(const HyperDual& a, double p) {
  if (p == 0.0) return HyperDual(1.0);
  const double g = std::pow(a.f, p);
  const double dg = p * std::pow(a.f, p - 1.0);
  const double d2g = p == 1.0 ? 0.0 : p * (p - 1.0) * std::pow(a.f, p - 2.0);
  return apply(a, g, dg, d2g);
}

inline HyperDual sqrt(const HyperDual& a) { return pow(a, 0.5); }

}  // namespace dampreg::detail
