#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoinf/combinatorics.hpp"
#include "hoinf/rng.hpp"
#include "hoinf/tensor.hpp"

namespace hoinf {

/// m-uniform hypergraph over vertices 0..n-1. Edges are strictly increasing
/// m-tuples, kept sorted and unique.
class UniformHypergraph {
 public:
  UniformHypergraph(int n, int m, std::vector<MultiIndex> edges) : n_(n), m_(m), edges_(std::move(edges)) {
    require_supported_order(m);
    if (n < m) {
      throw std::domain_error("hypergraph needs n >= m (n=" + std::to_string(n) +
                              ", m=" + std::to_string(m) + ")");
    }
    for (const auto& e : edges_) {
      if (e.order() != m) throw std::domain_error("edge has " + std::to_string(e.order()) + " vertices, expected " + std::to_string(m));
      require_index_in_range(e, n);
      if (!std::is_sorted(e.begin(), e.end()) || !e.all_distinct()) {
        throw std::domain_error("edge is not a strictly increasing vertex tuple");
      }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw std::domain_error("duplicate edge in hypergraph");
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  const std::vector<MultiIndex>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(const MultiIndex& edge) const {
    return std::binary_search(edges_.begin(), edges_.end(), edge.canonical());
  }

  bool operator==(const UniformHypergraph&) const = default;

 private:
  int n_;
  int m_;
  std::vector<MultiIndex> edges_;
};

/// An (m/2)-subset of the vertices.
struct Hypervertex {
  MultiIndex members;
  auto operator<=>(const Hypervertex&) const = default;
};

/// All C(n, m/2) hypervertices in lexicographic order. Defined for any
/// n >= m/2, including n < m where no edge can exist.
inline std::vector<Hypervertex> induced_hypervertices(int n, int m) {
  require_supported_order(m);
  if (n < m / 2) throw std::domain_error("need n >= m/2 for hypervertices to exist");
  std::vector<Hypervertex> out;
  out.reserve(binomial(n, m / 2));
  for_each_k_subset(n, m / 2, [&](std::span<const int> s) { out.push_back({MultiIndex(s)}); });
  return out;
}

inline std::vector<Hypervertex> induced_hypervertices(const UniformHypergraph& g) {
  return induced_hypervertices(g.n(), g.m());
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline UniformHypergraph complete_hypergraph(int n, int m) {
  require_supported_order(m);
  if (n < m) throw std::domain_error("complete hypergraph needs n >= m");
  std::vector<MultiIndex> edges;
  edges.reserve(binomial(n, m));
  for_each_k_subset(n, m, [&](std::span<const int> s) { edges.emplace_back(s); });
  return {n, m, std::move(edges)};
}

/// Every m-subset kept independently with probability prob.
inline UniformHypergraph erdos_renyi_hypergraph(int n, int m, double prob, std::uint64_t seed) {
  require_supported_order(m);
  if (n < m) throw std::domain_error("Erdos-Renyi hypergraph needs n >= m");
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::domain_error("edge probability must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0x45));
  std::vector<MultiIndex> edges;
  for_each_k_subset(n, m, [&](std::span<const int> s) {
    if (rng.bernoulli(prob)) edges.emplace_back(s);
  });
  return {n, m, std::move(edges)};
}

/// Number of edges containing each hypervertex, in induced_hypervertices order.
inline std::vector<std::size_t> hypervertex_degrees(const UniformHypergraph& g) {
  const auto hvs = induced_hypervertices(g);
  std::map<MultiIndex, std::size_t> slot;
  for (std::size_t i = 0; i < hvs.size(); ++i) slot.emplace(hvs[i].members, i);
  std::vector<std::size_t> deg(hvs.size(), 0);
  const int half = g.m() / 2;
  for (const auto& e : g.edges()) {
    for_each_k_subset(g.m(), half, [&](std::span<const int> pos) {
      std::array<int, kMaxOrder> sub{};
      for (int k = 0; k < half; ++k) sub[k] = e[pos[k]];
      ++deg[slot.at(MultiIndex(std::span<const int>(sub.data(), half)))];
    });
  }
  return deg;
}

struct RegularLikeResult {
  UniformHypergraph graph;
  double target_degree;
  std::size_t target_edges;
  std::size_t min_degree;
  std::size_t max_degree;
  double mean_degree;
};

/// Best-effort "d-regular" hypergraph: rounds of random vertex partitions
/// into m-groups, each group added as an edge, until the mean hypervertex
/// degree reaches d. The achieved degree spread is reported, not promised.
inline RegularLikeResult regular_like_hypergraph(int n, int m, double d, std::uint64_t seed) {
  require_supported_order(m);
  if (n < m) throw std::domain_error("regular-like hypergraph needs n >= m");
  if (!(d > 0.0)) throw std::domain_error("target degree must be positive");
  const double per_edge = static_cast<double>(binomial(m, m / 2));
  const double hv_count = static_cast<double>(binomial(n, m / 2));
  const auto target = static_cast<std::size_t>(std::llround(d * hv_count / per_edge));
  if (target == 0 || target > binomial(n, m)) {
    throw std::domain_error("target degree " + std::to_string(d) +
                            " is not achievable: needs " + std::to_string(target) +
                            " edges, at most " + std::to_string(binomial(n, m)) + " exist");
  }
  Rng rng(derive_seed(seed, 0x52));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<MultiIndex> chosen;
  std::vector<MultiIndex> sorted_chosen;
  const std::size_t groups = static_cast<std::size_t>(n / m);
  const std::size_t max_rounds = 200 + 50 * target;
  for (std::size_t round = 0; round < max_rounds && chosen.size() < target; ++round) {
    rng.shuffle(std::span<int>(perm));
    for (std::size_t gi = 0; gi < groups && chosen.size() < target; ++gi) {
      std::array<int, kMaxOrder> e{};
      std::copy(perm.begin() + static_cast<long>(gi) * m, perm.begin() + static_cast<long>(gi + 1) * m, e.begin());
      std::sort(e.begin(), e.begin() + m);
      const MultiIndex edge(std::span<const int>(e.data(), static_cast<std::size_t>(m)));
      const auto it = std::lower_bound(sorted_chosen.begin(), sorted_chosen.end(), edge);
      if (it != sorted_chosen.end() && *it == edge) continue;
      sorted_chosen.insert(it, edge);
      chosen.push_back(edge);
    }
  }
  UniformHypergraph g(n, m, std::move(chosen));
  const auto deg = hypervertex_degrees(g);
  std::size_t sum = 0;
  for (auto x : deg) sum += x;
  return RegularLikeResult{std::move(g), d, target,
                           *std::min_element(deg.begin(), deg.end()),
                           *std::max_element(deg.begin(), deg.end()),
                           static_cast<double>(sum) / hv_count};
}

/// Two disjoint complete sub-hypergraphs on {0..n/2-1} and {n/2..n-1} joined
/// by exactly `bridges` crossing edges. A bridge is the union of an
/// (m/2)-subset of each block, i.e. an edge between a hypervertex of one
/// block and a hypervertex of the other.
inline UniformHypergraph two_blocks_bridged(int n, int m, int bridges, std::uint64_t seed) {
  require_supported_order(m);
  const int a = n / 2;
  const int b = n - a;
  if (a < m) {
    throw std::domain_error("two_blocks_bridged needs each block to hold an edge: n >= " +
                            std::to_string(2 * m));
  }
  const int half = m / 2;
  const std::uint64_t available = binomial(a, half) * binomial(b, half);
  if (bridges < 0 || static_cast<std::uint64_t>(bridges) > available) {
    throw std::domain_error("bridge count " + std::to_string(bridges) + " outside [0, " +
                            std::to_string(available) + "]");
  }
  std::vector<MultiIndex> edges;
  for_each_k_subset(a, m, [&](std::span<const int> s) { edges.emplace_back(s); });
  for_each_k_subset(b, m, [&](std::span<const int> s) {
    std::array<int, kMaxOrder> e{};
    for (int k = 0; k < m; ++k) e[k] = s[k] + a;
    edges.emplace_back(std::span<const int>(e.data(), static_cast<std::size_t>(m)));
  });
  if (bridges > 0) {
    std::vector<MultiIndex> candidates;
    candidates.reserve(available);
    for_each_k_subset(a, half, [&](std::span<const int> left) {
      for_each_k_subset(b, half, [&](std::span<const int> right) {
        std::array<int, kMaxOrder> e{};
        for (int k = 0; k < half; ++k) {
          e[k] = left[k];
          e[k + half] = right[k] + a;
        }
        candidates.emplace_back(std::span<const int>(e.data(), static_cast<std::size_t>(m)));
      });
    });
    Rng rng(derive_seed(seed, 0x42));
    for (int i = 0; i < bridges; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(candidates.size() - static_cast<std::size_t>(i));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
      edges.push_back(candidates[static_cast<std::size_t>(i)]);
    }
  }
  return {n, m, std::move(edges)};
}

}  // namespace hoinf
