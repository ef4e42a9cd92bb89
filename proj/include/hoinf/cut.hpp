#pragma once

// Hypervertex cuts: boundary sets, hyperedge expansion and Cheeger constants.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hoinf/combinatorics.hpp"
#include "hoinf/errors.hpp"
#include "hoinf/hypergraph.hpp"

namespace hoinf {

/// How the boundary of a hypervertex set is measured.
///  kEdgeSet:   number of edges e = h1 ∪ h2 with h1 ∈ S, h2 ∉ S (each edge once).
///  kPairCount: number of ordered pairs (h1, h2) with h1 ∈ S, h2 ∉ S,
///              h1 ∩ h2 = ∅ and h1 ∪ h2 an edge.
enum class BoundarySemantics { kEdgeSet, kPairCount };

inline const char* to_string(BoundarySemantics s) {
  return s == BoundarySemantics::kEdgeSet ? "edge-set" : "pair-count";
}

inline BoundarySemantics parse_boundary_semantics(std::string_view name) {
  if (name == "edge-set") return BoundarySemantics::kEdgeSet;
  if (name == "pair-count") return BoundarySemantics::kPairCount;
  throw std::invalid_argument("unknown boundary semantics '" + std::string(name) +
                              "' (expected edge-set or pair-count)");
}

struct CutReport {
  BoundarySemantics semantics = BoundarySemantics::kEdgeSet;
  std::vector<Hypervertex> members;
  std::size_t set_size = 0;
  std::vector<MultiIndex> boundary_edges;
  std::size_t pair_count = 0;
  double expansion = 0.0;
};

struct CheegerResult {
  double phi = 0.0;
  CutReport cut;
};

/// exact Cheeger enumeration is refused above this many hypervertices
inline constexpr std::size_t kExactCheegerLimit = 24;

namespace detail {

class CutIndex {
 public:
  struct Split {
    int edge;
    int inside;
    int outside;
  };

  explicit CutIndex(const UniformHypergraph& g) : hypervertices_(induced_hypervertices(g)) {
    for (std::size_t i = 0; i < hypervertices_.size(); ++i) {
      rank_.emplace(hypervertices_[i].members, static_cast<int>(i));
    }
    touching_.resize(hypervertices_.size());
    const int m = g.m();
    const int half = m / 2;
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      for_each_k_subset(m, half, [&](std::span<const int> pos) {
        std::array<int, kMaxOrder> in{};
        std::array<int, kMaxOrder> out{};
        int ni = 0;
        int no = 0;
        for (int k = 0; k < m; ++k) {
          if (ni < half && pos[ni] == k) {
            in[ni++] = edges[e][k];
          } else {
            out[no++] = edges[e][k];
          }
        }
        const int a = rank_.at(MultiIndex(std::span<const int>(in.data(), half)));
        const int b = rank_.at(MultiIndex(std::span<const int>(out.data(), half)));
        const int id = static_cast<int>(splits_.size());
        splits_.push_back({static_cast<int>(e), a, b});
        touching_[a].push_back(id);
        touching_[b].push_back(id);
      });
    }
    edge_count_ = edges.size();
  }

  std::size_t hypervertex_count() const { return hypervertices_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<Hypervertex>& hypervertices() const { return hypervertices_; }
  const std::vector<Split>& splits() const { return splits_; }
  const std::vector<int>& touching(int hv) const { return touching_[static_cast<std::size_t>(hv)]; }

  int rank(const MultiIndex& members) const {
    const auto it = rank_.find(members);
    return it == rank_.end() ? -1 : it->second;
  }

 private:
  std::vector<Hypervertex> hypervertices_;
  std::map<MultiIndex, int> rank_;
  std::vector<Split> splits_;
  std::vector<std::vector<int>> touching_;
  std::size_t edge_count_ = 0;
};

/// Membership of S with incrementally maintained boundary measures.
class CutState {
 public:
  explicit CutState(const CutIndex& index)
      : index_(&index),
        in_(index.hypervertex_count(), 0),
        per_edge_(index.edge_count(), 0) {}

  void toggle(int hv) {
    for (int s : index_->touching(hv)) apply(s, -1);
    in_[static_cast<std::size_t>(hv)] ^= 1;
    size_ = in_[static_cast<std::size_t>(hv)] ? size_ + 1 : size_ - 1;
    for (int s : index_->touching(hv)) apply(s, +1);
  }

  bool contains(int hv) const { return in_[static_cast<std::size_t>(hv)] != 0; }
  std::size_t size() const { return size_; }
  std::size_t crossing_edges() const { return crossing_edges_; }
  std::size_t crossing_pairs() const { return crossing_pairs_; }
  bool edge_crosses(std::size_t e) const { return per_edge_[e] > 0; }

  std::size_t measure(BoundarySemantics s) const {
    return s == BoundarySemantics::kEdgeSet ? crossing_edges_ : crossing_pairs_;
  }

 private:
  void apply(int split_id, int sign) {
    const auto& sp = index_->splits()[static_cast<std::size_t>(split_id)];
    if (!(in_[static_cast<std::size_t>(sp.inside)] && !in_[static_cast<std::size_t>(sp.outside)])) return;
    auto& c = per_edge_[static_cast<std::size_t>(sp.edge)];
    if (sign > 0) {
      if (c++ == 0) ++crossing_edges_;
      ++crossing_pairs_;
    } else {
      if (--c == 0) --crossing_edges_;
      --crossing_pairs_;
    }
  }

  const CutIndex* index_;
  std::vector<char> in_;
  std::vector<int> per_edge_;
  std::size_t size_ = 0;
  std::size_t crossing_edges_ = 0;
  std::size_t crossing_pairs_ = 0;
};

inline CutReport make_report(const UniformHypergraph& g, const CutIndex& index, const CutState& state,
                             BoundarySemantics semantics) {
  CutReport r;
  r.semantics = semantics;
  for (std::size_t h = 0; h < index.hypervertex_count(); ++h) {
    if (state.contains(static_cast<int>(h))) r.members.push_back(index.hypervertices()[h]);
  }
  r.set_size = state.size();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (state.edge_crosses(e)) r.boundary_edges.push_back(g.edges()[e]);
  }
  r.pair_count = state.crossing_pairs();
  r.expansion = static_cast<double>(state.measure(semantics)) / static_cast<double>(r.set_size);
  return r;
}

/// Lexicographic order of two sets given as bitmasks, compared as ascending
/// index sequences.
inline bool lex_less(std::uint32_t a, std::uint32_t b) {
  while (true) {
    if (a == 0) return b != 0;
    if (b == 0) return false;
    const int x = std::countr_zero(a);
    const int y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
}

}  // namespace detail

/// Boundary and expansion of the hypervertex set S.
inline CutReport boundary(const UniformHypergraph& g, std::span<const Hypervertex> set,
                          BoundarySemantics semantics = BoundarySemantics::kEdgeSet) {
  if (set.empty()) throw std::domain_error("boundary of an empty hypervertex set is undefined");
  const detail::CutIndex index(g);
  detail::CutState state(index);
  for (const auto& h : set) {
    const int r = index.rank(h.members);
    if (r < 0) {
      throw std::domain_error("not an induced hypervertex: expected a strictly increasing " +
                              std::to_string(g.m() / 2) + "-subset of [0, " + std::to_string(g.n()) + ")");
    }
    if (!state.contains(r)) state.toggle(r);
  }
  return detail::make_report(g, index, state, semantics);
}

/// Exact Cheeger constant: min over 0 < |S| <= floor(N/2) of measure(S)/|S|.
/// Ties go to the lexicographically smallest S (as an ascending list of
/// hypervertex ranks).
inline CheegerResult cheeger_exact(const UniformHypergraph& g,
                                   BoundarySemantics semantics = BoundarySemantics::kEdgeSet) {
  const detail::CutIndex index(g);
  const std::size_t n_hv = index.hypervertex_count();
  if (n_hv > kExactCheegerLimit) {
    throw GuardExceeded("exact Cheeger constant needs N = C(n, m/2) <= " +
                        std::to_string(kExactCheegerLimit) + " hypervertices, got " +
                        std::to_string(n_hv) + "; use cheeger_sweep for an upper bound");
  }
  const std::size_t limit = n_hv / 2;
  detail::CutState state(index);
  std::uint32_t mask = 0;
  std::uint32_t best_mask = 0;
  std::size_t best_measure = 0;
  std::size_t best_size = 0;
  const std::uint64_t total = std::uint64_t{1} << n_hv;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int bit = std::countr_zero(i);
    state.toggle(bit);
    mask ^= std::uint32_t{1} << bit;
    const std::size_t size = state.size();
    if (size > limit) continue;
    const std::size_t measure = state.measure(semantics);
    if (best_size == 0) {
      best_mask = mask, best_measure = measure, best_size = size;
      continue;
    }
    const auto lhs = static_cast<std::uint64_t>(measure) * best_size;
    const auto rhs = static_cast<std::uint64_t>(best_measure) * size;
    if (lhs < rhs || (lhs == rhs && detail::lex_less(mask, best_mask))) {
      best_mask = mask, best_measure = measure, best_size = size;
    }
  }
  detail::CutState best(index);
  for (std::size_t h = 0; h < n_hv; ++h) {
    if (best_mask & (std::uint32_t{1} << h)) best.toggle(static_cast<int>(h));
  }
  CheegerResult out;
  out.cut = detail::make_report(g, index, best, semantics);
  out.phi = out.cut.expansion;
  return out;
}

/// Sweep-cut upper bound on the Cheeger constant: hypervertices ordered by
/// the mean of v over their members (ties by rank), best prefix of size at
/// most floor(N/2). The smallest best prefix wins ties.
inline CutReport cheeger_sweep(const UniformHypergraph& g, std::span<const double> v,
                               BoundarySemantics semantics = BoundarySemantics::kEdgeSet) {
  if (static_cast<int>(v.size()) != g.n()) {
    throw std::domain_error("sweep vector has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(g.n()));
  }
  const detail::CutIndex index(g);
  const std::size_t n_hv = index.hypervertex_count();
  std::vector<double> value(n_hv, 0.0);
  for (std::size_t h = 0; h < n_hv; ++h) {
    double s = 0.0;
    for (int i : index.hypervertices()[h].members) s += v[static_cast<std::size_t>(i)];
    value[h] = s / static_cast<double>(g.m() / 2);
  }
  std::vector<int> order(n_hv);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });

  detail::CutState state(index);
  std::size_t best_prefix = 0;
  std::size_t best_measure = 0;
  for (std::size_t t = 0; t < n_hv / 2; ++t) {
    state.toggle(order[t]);
    const std::size_t size = t + 1;
    const std::size_t measure = state.measure(semantics);
    if (best_prefix == 0 || static_cast<std::uint64_t>(measure) * best_prefix <
                                static_cast<std::uint64_t>(best_measure) * size) {
      best_prefix = size;
      best_measure = measure;
    }
  }
  detail::CutState best(index);
  for (std::size_t t = 0; t < best_prefix; ++t) best.toggle(order[t]);
  return detail::make_report(g, index, best, semantics);
}

}  // namespace hoinf
