#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoinf/rng.hpp"

namespace hoinf {

/// Node labels in {-1, +1}.
using Labels = std::vector<int>;

inline void require_signs(std::span<const int> y, int n, const char* what = "label vector") {
  if (static_cast<int>(y.size()) != n) {
    throw std::domain_error(std::string(what) + " has length " + std::to_string(y.size()) +
                            ", expected " + std::to_string(n));
  }
  for (int v : y) {
    if (v != 1 && v != -1) throw std::domain_error(std::string(what) + " entries must be +1 or -1");
  }
}

inline std::vector<double> to_real(std::span<const int> y) { return {y.begin(), y.end()}; }

inline long dot(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::domain_error("label vectors differ in length");
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long>(a[i]) * b[i];
  return s;
}

inline Labels negated(Labels y) {
  for (int& v : y) v = -v;
  return y;
}

/// Flips the global sign so that y[0] = +1.
inline Labels sign_normalized(Labels y) {
  if (!y.empty() && y[0] < 0) return negated(std::move(y));
  return y;
}

/// Uniform random labels.
inline Labels random_labels(int n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x59));
  Labels y(static_cast<std::size_t>(n));
  for (int& v : y) v = rng.bernoulli(0.5) ? 1 : -1;
  return y;
}

}  // namespace hoinf
