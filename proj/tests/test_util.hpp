#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dampreg/vec.hpp"

namespace testutil {

/// Seeded draws with magnitudes spread over several decades.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0xC0FFEE) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  double signed_log(double lo_exp, double hi_exp) {
    const double mag = std::pow(10.0, uniform(lo_exp, hi_exp));
    return uniform(0.0, 1.0) < 0.5 ? -mag : mag;
  }

  template <std::size_t N>
  dampreg::Vec<N> vec(double lo = -1.0, double hi = 1.0) {
    dampreg::Vec<N> v;
    for (auto& x : v.c) x = uniform(lo, hi);
    return v;
  }

  /// Random direction scaled by 10^[lo_exp, hi_exp].
  template <std::size_t N>
  dampreg::Vec<N> scaled_vec(double lo_exp, double hi_exp) {
    dampreg::Vec<N> v = vec<N>();
    return v * (std::pow(10.0, uniform(lo_exp, hi_exp)) / std::sqrt(dampreg::norm2(v)));
  }

 private:
  std::mt19937_64 gen_;
};

template <std::size_t N>
double max_diff(const dampreg::Vec<N>& a, const dampreg::Vec<N>& b) {
  return dampreg::max_abs(a - b);
}

}  // namespace testutil
