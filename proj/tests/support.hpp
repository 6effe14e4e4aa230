#pragma once

// Shared oracles for the unit tests. Reference integrals come from Boost.Math
// quadrature, which shares no code with the library's own Gauss-Kronrod.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sdl::oracle {

// Seeded generator for property tests; every test draws its own stream.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

template <class F>
double oracle_integral(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

template <class F>
double oracle_integral_singular(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, 1e-13);
}

template <class F>
double oracle_integral_half_line(F f) {
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

}  // namespace sdl::oracle
