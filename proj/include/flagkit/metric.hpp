#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "flagkit/rational.hpp"

namespace flagkit {

/// One positive parameter per isotropy module, in module order.
template <class T>
struct InvariantMetric {
  std::vector<T> lambdas;

  size_t size() const { return lambdas.size(); }
  const T& operator[](size_t i) const { return lambdas[i]; }

  /// Throws std::invalid_argument unless there are `modules` strictly
  /// positive entries.
  void validate(size_t modules) const {
    if (lambdas.size() != modules)
      throw std::invalid_argument("metric has " + std::to_string(lambdas.size()) + " parameters, flag has " +
                                  std::to_string(modules) + " modules");
    for (const T& l : lambdas)
      if (!(l > 0)) throw std::invalid_argument("metric parameters must be positive");
  }
};

using ExactMetric = InvariantMetric<Rational>;
using NumericMetric = InvariantMetric<double>;

inline NumericMetric to_numeric(const ExactMetric& m) {
  NumericMetric out;
  for (const auto& l : m.lambdas) out.lambdas.push_back(l.get_d());
  return out;
}

}  // namespace flagkit
