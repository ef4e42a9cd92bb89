#pragma once

// Order-m symmetric tensors stored one value per index orbit.
//
// Conventions used throughout the library: vertex ids are 0-based, and the
// canonical representative of an orbit is its ascending (sorted) multi-index.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hoinf/combinatorics.hpp"

namespace hoinf {

inline constexpr int kMaxOrder = 6;

inline bool is_supported_order(int m) { return m == 2 || m == 6; }

inline void require_supported_order(int m) {
  if (!is_supported_order(m)) {
    throw std::domain_error(
        "unsupported tensor order " + std::to_string(m) +
        ": only m = 2 and m = 6 are supported (the zeta-function Laplacian "
        "needs m = 2 mod 4, and m >= 10 is beyond desk scale)");
  }
}

class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::span<const int> indices)
      : order_(static_cast<int>(indices.size())) {
    if (order_ < 1 || order_ > kMaxOrder) {
      throw std::domain_error("multi-index length must be in [1, " +
                              std::to_string(kMaxOrder) + "], got " +
                              std::to_string(order_));
    }
    std::copy(indices.begin(), indices.end(), idx_.begin());
  }

  MultiIndex(std::initializer_list<int> indices)
      : MultiIndex(std::span<const int>(indices.begin(), indices.size())) {}

  int order() const { return order_; }
  int operator[](int pos) const { return idx_[static_cast<std::size_t>(pos)]; }
  const int* begin() const { return idx_.data(); }
  const int* end() const { return idx_.data() + order_; }
  std::span<const int> span() const { return {idx_.data(), static_cast<std::size_t>(order_)}; }

  MultiIndex canonical() const {
    MultiIndex c = *this;
    std::sort(c.idx_.begin(), c.idx_.begin() + order_);
    return c;
  }

  bool is_canonical() const { return std::is_sorted(begin(), end()); }

  bool all_distinct() const {
    const MultiIndex c = canonical();
    return std::adjacent_find(c.begin(), c.end()) == c.end();
  }

  /// Lexicographic on the stored entries; indices of equal order compare as
  /// plain tuples.
  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::array<int, kMaxOrder> idx_{};
  int order_ = 0;
};

/// (value, multiplicity) runs of a multi-index, ascending by value.
inline std::vector<std::pair<int, int>> multiplicities(const MultiIndex& idx) {
  const MultiIndex c = idx.canonical();
  std::vector<std::pair<int, int>> runs;
  for (int v : c) {
    if (!runs.empty() && runs.back().first == v) {
      ++runs.back().second;
    } else {
      runs.emplace_back(v, 1);
    }
  }
  return runs;
}

/// Number of distinct permutations of idx: m! / prod(multiplicity!).
inline std::uint64_t orbit_size(const MultiIndex& idx) {
  std::uint64_t r = factorial(idx.order());
  for (const auto& [value, count] : multiplicities(idx)) r /= factorial(count);
  return r;
}

enum class IndexClass { kEvenRepeat, kOddRepeat, kAllDistinct };

inline const char* to_string(IndexClass c) {
  switch (c) {
    case IndexClass::kEvenRepeat: return "EvenRepeat";
    case IndexClass::kOddRepeat: return "OddRepeat";
    case IndexClass::kAllDistinct: return "AllDistinct";
  }
  return "?";
}

inline void require_index_in_range(const MultiIndex& idx, int n) {
  for (int v : idx) {
    if (v < 0 || v >= n) {
      throw std::domain_error("index value " + std::to_string(v) +
                              " outside [0, " + std::to_string(n) + ")");
    }
  }
}

inline IndexClass classify_index(const MultiIndex& idx, int n) {
  require_index_in_range(idx, n);
  const auto runs = multiplicities(idx);
  if (static_cast<int>(runs.size()) == idx.order()) return IndexClass::kAllDistinct;
  const bool all_even = std::all_of(runs.begin(), runs.end(),
                                    [](const auto& r) { return r.second % 2 == 0; });
  return all_even ? IndexClass::kEvenRepeat : IndexClass::kOddRepeat;
}

class SymmetricTensor {
 public:
  using OrbitMap = std::map<MultiIndex, double>;

  SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
    require_supported_order(order);
    if (dim < 1) throw std::domain_error("tensor dimension must be positive");
  }

  int order() const { return order_; }
  int dim() const { return dim_; }

  /// Entry at any permutation of an orbit; unset orbits read as 0.
  double at(const MultiIndex& idx) const {
    check(idx);
    const auto it = orbits_.find(idx.canonical());
    return it == orbits_.end() ? 0.0 : it->second;
  }

  /// Sets every entry of idx's orbit. Writing 0 removes the orbit.
  void set(const MultiIndex& idx, double value) {
    check(idx);
    if (value == 0.0) {
      orbits_.erase(idx.canonical());
    } else {
      orbits_[idx.canonical()] = value;
    }
  }

  void add(const MultiIndex& idx, double delta) {
    check(idx);
    const MultiIndex key = idx.canonical();
    const double v = (orbits_[key] += delta);
    if (v == 0.0) orbits_.erase(key);
  }

  const OrbitMap& orbits() const { return orbits_; }
  std::size_t nonzero_orbits() const { return orbits_.size(); }

  SymmetricTensor& operator+=(const SymmetricTensor& other) {
    require_same_shape(other);
    for (const auto& [idx, v] : other.orbits_) add(idx, v);
    return *this;
  }

  SymmetricTensor& operator-=(const SymmetricTensor& other) {
    require_same_shape(other);
    for (const auto& [idx, v] : other.orbits_) add(idx, -v);
    return *this;
  }

  SymmetricTensor& operator*=(double s) {
    if (s == 0.0) {
      orbits_.clear();
    } else {
      for (auto& [idx, v] : orbits_) v *= s;
    }
    return *this;
  }

  friend SymmetricTensor operator+(SymmetricTensor a, const SymmetricTensor& b) { return a += b; }
  friend SymmetricTensor operator-(SymmetricTensor a, const SymmetricTensor& b) { return a -= b; }
  friend SymmetricTensor operator*(double s, SymmetricTensor a) { return a *= s; }

  bool operator==(const SymmetricTensor&) const = default;

  void require_same_shape(const SymmetricTensor& other) const {
    if (other.order_ != order_ || other.dim_ != dim_) {
      throw std::domain_error("tensor shape mismatch: (m=" + std::to_string(order_) +
                              ", n=" + std::to_string(dim_) + ") vs (m=" +
                              std::to_string(other.order_) + ", n=" +
                              std::to_string(other.dim_) + ")");
    }
  }

 private:
  void check(const MultiIndex& idx) const {
    if (idx.order() != order_) {
      throw std::domain_error("multi-index of length " + std::to_string(idx.order()) +
                              " used on an order-" + std::to_string(order_) + " tensor");
    }
    require_index_in_range(idx, dim_);
  }

  int order_;
  int dim_;
  OrbitMap orbits_;
};

inline void require_vector_dim(const SymmetricTensor& t, std::span<const double> v) {
  if (static_cast<int>(v.size()) != t.dim()) {
    throw std::domain_error("vector of length " + std::to_string(v.size()) +
                            " does not match tensor dimension " + std::to_string(t.dim()));
  }
}

/// Sum over all n^m positions of a_i * b_i, evaluated per orbit.
inline double inner_product(const SymmetricTensor& a, const SymmetricTensor& b) {
  a.require_same_shape(b);
  const auto& small = a.nonzero_orbits() <= b.nonzero_orbits() ? a.orbits() : b.orbits();
  const auto& large = a.nonzero_orbits() <= b.nonzero_orbits() ? b.orbits() : a.orbits();
  double sum = 0.0;
  for (const auto& [idx, v] : small) {
    const auto it = large.find(idx);
    if (it != large.end()) sum += static_cast<double>(orbit_size(idx)) * v * it->second;
  }
  return sum;
}

inline double frobenius_norm(const SymmetricTensor& a) { return std::sqrt(inner_product(a, a)); }

/// Largest |a_i - b_i| over all entries.
inline double max_abs_difference(const SymmetricTensor& a, const SymmetricTensor& b) {
  a.require_same_shape(b);
  double worst = 0.0;
  for (const auto& [idx, v] : a.orbits()) worst = std::max(worst, std::abs(v - b.at(idx)));
  for (const auto& [idx, v] : b.orbits()) worst = std::max(worst, std::abs(v - a.at(idx)));
  return worst;
}

/// <T, v^{⊗m}> without materialising v^{⊗m}.
inline double outer_power_form(const SymmetricTensor& t, std::span<const double> v) {
  require_vector_dim(t, v);
  double sum = 0.0;
  for (const auto& [idx, value] : t.orbits()) {
    double prod = static_cast<double>(orbit_size(idx)) * value;
    for (int i : idx) prod *= v[static_cast<std::size_t>(i)];
    sum += prod;
  }
  return sum;
}

/// Gradient of v -> <T, v^{⊗m}>.
inline std::vector<double> outer_power_gradient(const SymmetricTensor& t,
                                                std::span<const double> v) {
  require_vector_dim(t, v);
  const int m = t.order();
  std::vector<double> grad(v.size(), 0.0);
  std::array<double, kMaxOrder + 1> prefix{};
  std::array<double, kMaxOrder + 1> suffix{};
  for (const auto& [idx, value] : t.orbits()) {
    const double w = static_cast<double>(orbit_size(idx)) * value;
    prefix[0] = 1.0;
    for (int s = 0; s < m; ++s) prefix[s + 1] = prefix[s] * v[static_cast<std::size_t>(idx[s])];
    suffix[m] = 1.0;
    for (int s = m - 1; s >= 0; --s) suffix[s] = suffix[s + 1] * v[static_cast<std::size_t>(idx[s])];
    for (int s = 0; s < m; ++s) grad[static_cast<std::size_t>(idx[s])] += w * prefix[s] * suffix[s + 1];
  }
  return grad;
}

/// v^{⊗m}, materialised over all C(n+m-1, m) orbits.
inline SymmetricTensor rank_one(std::span<const double> v, int m) {
  SymmetricTensor t(m, static_cast<int>(v.size()));
  for_each_multiset(static_cast<int>(v.size()), m, [&](std::span<const int> idx) {
    double prod = 1.0;
    for (int i : idx) prod *= v[static_cast<std::size_t>(i)];
    if (prod != 0.0) t.set(MultiIndex(idx), prod);
  });
  return t;
}

/// Flattened (weight, indices) view of a tensor for repeated form/gradient
/// evaluation in iterative solvers. weight = orbit size * entry value.
class CompiledForm {
 public:
  explicit CompiledForm(const SymmetricTensor& t) : order_(t.order()), dim_(t.dim()) {
    weights_.reserve(t.nonzero_orbits());
    indices_.reserve(t.nonzero_orbits() * static_cast<std::size_t>(order_));
    for (const auto& [idx, value] : t.orbits()) {
      weights_.push_back(static_cast<double>(orbit_size(idx)) * value);
      for (int i : idx) indices_.push_back(i);
    }
  }

  int order() const { return order_; }
  int dim() const { return dim_; }

  double value(std::span<const double> v) const {
    double sum = 0.0;
    const int* ix = indices_.data();
    for (double w : weights_) {
      double prod = w;
      for (int s = 0; s < order_; ++s) prod *= v[static_cast<std::size_t>(ix[s])];
      sum += prod;
      ix += order_;
    }
    return sum;
  }

  std::vector<double> gradient(std::span<const double> v) const {
    std::vector<double> grad(static_cast<std::size_t>(dim_), 0.0);
    std::array<double, kMaxOrder + 1> prefix{};
    std::array<double, kMaxOrder + 1> suffix{};
    const int* ix = indices_.data();
    for (double w : weights_) {
      prefix[0] = 1.0;
      for (int s = 0; s < order_; ++s) prefix[s + 1] = prefix[s] * v[static_cast<std::size_t>(ix[s])];
      suffix[order_] = 1.0;
      for (int s = order_ - 1; s >= 0; --s) suffix[s] = suffix[s + 1] * v[static_cast<std::size_t>(ix[s])];
      for (int s = 0; s < order_; ++s) grad[static_cast<std::size_t>(ix[s])] += w * prefix[s] * suffix[s + 1];
      ix += order_;
    }
    return grad;
  }

 private:
  int order_;
  int dim_;
  std::vector<double> weights_;
  std::vector<int> indices_;
};

}  // namespace hoinf
