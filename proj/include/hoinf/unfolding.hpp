#pragma once

// Spectral label estimate from the hypervertex unfolding of X, used as a warm
// start for the relaxation solver.
//
// M[h1][h2] = X_{h1 ∪ h2} for disjoint hypervertices. For clean data
// M = S B S with S = diag(prod_{i∈h} y_i) and B the (nonnegative) hypervertex
// adjacency, so the top eigenvector carries the hypervertex signs. For m = 2
// these are the labels; for m = 6 they are decoded through the pair Gram
// matrix G_ij = sum_{a<b} u_{iab} u_{jab} = y_i y_j C_ij with C >= 0, one
// connected component of G at a time. Each component's sign is then fixed by
// its own hypervertices: m/2 = 3 is odd, so flipping a component flips them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hoinf/combinatorics.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/rng.hpp"
#include "hoinf/tensor.hpp"

namespace hoinf {

namespace detail {

using SparseRows = std::vector<std::vector<std::pair<int, double>>>;

/// Eigenvector of the largest algebraic eigenvalue by shifted power
/// iteration. Returns the zero vector for a zero matrix.
inline std::vector<double> top_eigenvector(const SparseRows& rows, std::uint64_t seed, int max_iterations = 20000,
                                           double tol = 1e-11) {
  const std::size_t n = rows.size();
  double shift = 0.0;
  for (const auto& row : rows) {
    double s = 0.0;
    for (const auto& [j, a] : row) s += std::abs(a);
    shift = std::max(shift, s);
  }
  std::vector<double> x(n, 0.0);
  if (shift == 0.0 || n == 0) return x;
  Rng rng(derive_seed(seed, 0x70));
  for (double& a : x) a = rng.normal();
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    s = std::sqrt(s);
    for (double& a : v) a /= s;
  };
  normalize(x);
  std::vector<double> y(n);
  for (int it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = shift * x[i];
      for (const auto& [j, a] : rows[i]) s += a * x[static_cast<std::size_t>(j)];
      y[i] = s;
    }
    normalize(y);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x.swap(y);
    if (diff < tol) break;
  }
  return x;
}

}  // namespace detail

inline Labels spectral_labels(const SymmetricTensor& x, std::uint64_t seed = 0) {
  const int n = x.dim();
  const int m = x.order();
  const int half = m / 2;
  std::map<MultiIndex, int> rank;
  std::vector<MultiIndex> hvs;
  for_each_k_subset(n, half, [&](std::span<const int> s) {
    rank.emplace(MultiIndex(s), static_cast<int>(hvs.size()));
    hvs.emplace_back(s);
  });
  detail::SparseRows rows(hvs.size());
  for (const auto& [idx, v] : x.orbits()) {
    if (!idx.all_distinct()) continue;
    for_each_k_subset(m, half, [&](std::span<const int> pos) {
      std::array<int, kMaxOrder> in{};
      std::array<int, kMaxOrder> out{};
      int ni = 0;
      int no = 0;
      for (int k = 0; k < m; ++k) {
        if (ni < half && pos[ni] == k) {
          in[ni++] = idx[k];
        } else {
          out[no++] = idx[k];
        }
      }
      const int a = rank.at(MultiIndex(std::span<const int>(in.data(), static_cast<std::size_t>(half))));
      const int b = rank.at(MultiIndex(std::span<const int>(out.data(), static_cast<std::size_t>(half))));
      rows[static_cast<std::size_t>(a)].emplace_back(b, v);
    });
  }
  const std::vector<double> u = detail::top_eigenvector(rows, seed);

  Labels y(static_cast<std::size_t>(n), 1);
  if (half == 1) {
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] < 0.0 ? -1 : 1;
    return sign_normalized(std::move(y));
  }

  // Pair Gram matrix over vertices.
  std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> by_pair;
  for (std::size_t h = 0; h < hvs.size(); ++h) {
    if (u[h] == 0.0) continue;
    const MultiIndex& t = hvs[h];
    for (int k = 0; k < half; ++k) {
      std::array<int, 2> rest{};
      int r = 0;
      for (int l = 0; l < half; ++l) {
        if (l != k) rest[static_cast<std::size_t>(r++)] = t[l];
      }
      by_pair[{rest[0], rest[1]}].emplace_back(t[k], u[h]);
    }
  }
  double gmax = 0.0;
  for (const auto& [pair, list] : by_pair) {
    for (const auto& [i, ui] : list) {
      for (const auto& [j, uj] : list) {
        double& cell = g[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
        cell += ui * uj;
        gmax = std::max(gmax, std::abs(cell));
      }
    }
  }
  if (gmax == 0.0) return y;

  // Connected components of the significant entries of G.
  const double cut = 1e-6 * gmax;
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = ncomp;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (comp[static_cast<std::size_t>(j)] < 0 && std::abs(g[static_cast<std::size_t>(i) * n + j]) > cut) {
          comp[static_cast<std::size_t>(j)] = ncomp;
          stack.push_back(j);
        }
      }
    }
    ++ncomp;
  }

  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (comp[static_cast<std::size_t>(i)] == c) members.push_back(i);
    }
    detail::SparseRows sub(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b < members.size(); ++b) {
        const double val = g[static_cast<std::size_t>(members[a]) * n + static_cast<std::size_t>(members[b])];
        if (std::abs(val) > cut) sub[a].emplace_back(static_cast<int>(b), val);
      }
    }
    const auto w = detail::top_eigenvector(sub, derive_seed(seed, 0x71, static_cast<std::uint64_t>(c)));
    for (std::size_t a = 0; a < members.size(); ++a) y[static_cast<std::size_t>(members[a])] = w[a] < 0.0 ? -1 : 1;
    // Orient the component by agreement with its own hypervertex signs.
    double agree = 0.0;
    for (std::size_t h = 0; h < hvs.size(); ++h) {
      const MultiIndex& t = hvs[h];
      if (!std::all_of(t.begin(), t.end(), [&](int i) { return comp[static_cast<std::size_t>(i)] == c; })) continue;
      int s = 1;
      for (int i : t) s *= y[static_cast<std::size_t>(i)];
      agree += u[h] * s;
    }
    if (agree < 0.0) {
      for (int i : members) y[static_cast<std::size_t>(i)] = -y[static_cast<std::size_t>(i)];
    }
  }
  return sign_normalized(std::move(y));
}

}  // namespace hoinf
