#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hoinf {

inline std::uint64_t factorial(int k) {
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

/// m! / prod(d_i!) for an exponent vector d summing to m.
inline std::uint64_t multinomial(std::span<const int> exponents) {
  int total = 0;
  for (int d : exponents) total += d;
  std::uint64_t r = factorial(total);
  for (int d : exponents) r /= factorial(d);
  return r;
}

/// Visits every k-subset of {0..n-1} as a strictly increasing sequence, in
/// lexicographic order.
template <class Fn>
void for_each_k_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const int>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Visits every nondecreasing length-m sequence over {0..n-1} (one canonical
/// representative per symmetric-tensor orbit), in lexicographic order.
template <class Fn>
void for_each_multiset(int n, int m, Fn&& fn) {
  if (n <= 0 || m <= 0) return;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    fn(std::span<const int>(idx));
    int i = m - 1;
    while (i >= 0 && idx[i] == n - 1) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[i];
  }
}

/// Visits every exponent vector of length `parts` with nonnegative entries
/// summing to `total`.
template <class Fn>
void for_each_composition(int total, int parts, Fn&& fn) {
  std::vector<int> d(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == parts - 1) {
      d[pos] = left;
      fn(std::span<const int>(d));
      return;
    }
    for (int x = left; x >= 0; --x) {
      d[pos] = x;
      self(self, pos + 1, left - x);
    }
  };
  if (parts > 0) rec(rec, 0, total);
}

}  // namespace hoinf
