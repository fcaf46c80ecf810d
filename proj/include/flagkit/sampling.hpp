#pragma once

// Random inputs for property checks.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "flagkit/equigeodesics.hpp"

namespace flagkit {

/// Nonzero p/q + i r/s with small numerators and denominators.
inline ComplexRational random_gaussian_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (;;) {
    Rational re = Rational(num(rng)) / den(rng);
    Rational im = Rational(num(rng)) / den(rng);
    if (sgn(re) != 0 || sgn(im) != 0) return {re, im};
  }
}

inline std::complex<double> random_complex(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::complex<double> z(u(rng), u(rng));
    if (std::abs(z) > 1e-3) return z;
  }
}

/// Random exact vector with a nonzero coefficient on each given positive root.
inline TangentVector random_exact_vector(std::mt19937& rng, const std::vector<Root>& support) {
  TangentVector x;
  for (const Root& r : support) x.set(r, Surd(random_gaussian_rational(rng)));
  return x;
}

inline NumericTangentVector random_numeric_vector(std::mt19937& rng, const std::vector<Root>& support) {
  NumericTangentVector x;
  for (const Root& r : support) x.set(r, random_complex(rng));
  return x;
}

/// Log-uniform metric parameters in [lo, hi].
inline NumericMetric random_metric(std::mt19937& rng, size_t modules, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  NumericMetric m;
  for (size_t i = 0; i < modules; ++i) m.lambdas.push_back(std::exp(u(rng)));
  return m;
}

inline ExactMetric random_exact_metric(std::mt19937& rng, size_t modules) {
  std::uniform_int_distribution<int> num(1, 12), den(1, 6);
  ExactMetric m;
  for (size_t i = 0; i < modules; ++i) m.lambdas.push_back(Rational(num(rng)) / den(rng));
  return m;
}

}  // namespace flagkit
