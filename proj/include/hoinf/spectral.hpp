#pragma once

// zeta-function hypergraph Laplacians, signed Laplacians and degree tensors.
//
// Edge-sum convention: the Laplacian form sums zeta once per unordered edge
// with prefactor 1/C(m, m/2). This equals the 1/(m! C(m, m/2)) normalisation
// applied to all m! ordered copies of every edge, and for m = 2, y = 1 it is
// the classical sum over edges of (v_i - v_j)^2.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoinf/combinatorics.hpp"
#include "hoinf/hypergraph.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/tensor.hpp"

namespace hoinf {

namespace detail {

/// One +-1 sign pattern per half-subset I of [m]: +1 on I, -1 off I.
struct ZetaTable {
  int m = 0;
  std::vector<std::array<int, kMaxOrder>> signs;
};

inline const ZetaTable& zeta_table(int m) {
  require_supported_order(m);
  static const ZetaTable tables[2] = {
      [] {
        ZetaTable t;
        t.m = 2;
        for_each_k_subset(2, 1, [&](std::span<const int> in) {
          std::array<int, kMaxOrder> s{};
          s.fill(-1);
          for (int k : in) s[k] = 1;
          t.signs.push_back(s);
        });
        return t;
      }(),
      [] {
        ZetaTable t;
        t.m = 6;
        for_each_k_subset(6, 3, [&](std::span<const int> in) {
          std::array<int, kMaxOrder> s{};
          s.fill(-1);
          for (int k : in) s[k] = 1;
          t.signs.push_back(s);
        });
        return t;
      }()};
  return m == 2 ? tables[0] : tables[1];
}

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

/// Monomial expansion of (1/C(m,m/2)) * zeta(w_1..w_m): one entry per
/// exponent vector d (sum m) with a nonzero coefficient, excluding the
/// all-ones pattern. `orbit_share` is coefficient / multinomial(d), i.e. the
/// per-entry tensor value that reproduces the monomial.
struct DegreePattern {
  std::array<int, kMaxOrder> exponent{};
  double orbit_share = 0.0;
};

inline const std::vector<DegreePattern>& degree_patterns(int m) {
  require_supported_order(m);
  auto build = [](int order) {
    const auto& table = zeta_table(order);
    std::vector<DegreePattern> out;
    for_each_composition(order, order, [&](std::span<const int> d) {
      bool all_ones = true;
      for (int x : d) all_ones = all_ones && x == 1;
      if (all_ones) return;
      long s = 0;
      for (const auto& sg : table.signs) {
        int prod = 1;
        for (int k = 0; k < order; ++k) {
          if (d[k] % 2 == 1) prod *= sg[k];
        }
        s += prod;
      }
      if (s == 0) return;
      DegreePattern p;
      std::copy(d.begin(), d.end(), p.exponent.begin());
      p.orbit_share = static_cast<double>(s) / static_cast<double>(table.signs.size());
      out.push_back(p);
    });
    return out;
  };
  static const std::vector<DegreePattern> p2 = build(2);
  static const std::vector<DegreePattern> p6 = build(6);
  return m == 2 ? p2 : p6;
}

/// Adds weight * (degree part of the signed zeta expansion of one edge) to d.
inline void accumulate_zeta_degree(SymmetricTensor& d, const MultiIndex& edge,
                                   std::span<const int> y, double weight) {
  const int m = d.order();
  for (const auto& p : degree_patterns(m)) {
    std::array<int, kMaxOrder> idx{};
    int pos = 0;
    int sign = 1;
    for (int k = 0; k < m; ++k) {
      for (int r = 0; r < p.exponent[k]; ++r) idx[pos++] = edge[k];
      if (p.exponent[k] % 2 == 1) sign *= y[static_cast<std::size_t>(edge[k])];
    }
    d.add(MultiIndex(std::span<const int>(idx.data(), static_cast<std::size_t>(m))),
          weight * sign * p.orbit_share);
  }
}

}  // namespace detail

/// zeta(v) = sum over half-subsets I of (sum_{i in I} v_i - sum_{j not in I} v_j)^m.
inline double zeta(std::span<const double> args) {
  const int m = static_cast<int>(args.size());
  if (!is_supported_order(m)) {
    throw std::domain_error("zeta takes exactly m in {2, 6} arguments, got " + std::to_string(m));
  }
  double sum = 0.0;
  for (const auto& s : detail::zeta_table(m).signs) {
    double lin = 0.0;
    for (int k = 0; k < m; ++k) lin += s[k] * args[k];
    sum += detail::ipow(lin, m);
  }
  return sum;
}

/// Implicit signed Laplacian L_y of a hypergraph; y = 1 gives the unsigned
/// Laplacian. Evaluates <L_y, v^{⊗m}> and its gradient without building L_y.
class LaplacianOperator {
 public:
  explicit LaplacianOperator(UniformHypergraph graph)
      : graph_(std::move(graph)), signs_(static_cast<std::size_t>(graph_.n()), 1) {}

  LaplacianOperator(UniformHypergraph graph, Labels signs)
      : graph_(std::move(graph)), signs_(std::move(signs)) {
    require_signs(signs_, graph_.n(), "Laplacian sign vector");
  }

  const UniformHypergraph& graph() const { return graph_; }
  const Labels& signs() const { return signs_; }
  int order() const { return graph_.m(); }
  int dim() const { return graph_.n(); }

  double value(std::span<const double> v) const {
    check(v);
    const int m = graph_.m();
    const auto& table = detail::zeta_table(m);
    double sum = 0.0;
    std::array<double, kMaxOrder> w{};
    for (const auto& e : graph_.edges()) {
      for (int k = 0; k < m; ++k) w[k] = signs_[e[k]] * v[static_cast<std::size_t>(e[k])];
      for (const auto& s : table.signs) {
        double lin = 0.0;
        for (int k = 0; k < m; ++k) lin += s[k] * w[k];
        sum += detail::ipow(lin, m);
      }
    }
    return sum / static_cast<double>(table.signs.size());
  }

  std::vector<double> gradient(std::span<const double> v) const {
    check(v);
    const int m = graph_.m();
    const auto& table = detail::zeta_table(m);
    const double scale = static_cast<double>(m) / static_cast<double>(table.signs.size());
    std::vector<double> grad(v.size(), 0.0);
    std::array<double, kMaxOrder> w{};
    for (const auto& e : graph_.edges()) {
      for (int k = 0; k < m; ++k) w[k] = signs_[e[k]] * v[static_cast<std::size_t>(e[k])];
      for (const auto& s : table.signs) {
        double lin = 0.0;
        for (int k = 0; k < m; ++k) lin += s[k] * w[k];
        const double c = scale * detail::ipow(lin, m - 1);
        for (int k = 0; k < m; ++k) grad[static_cast<std::size_t>(e[k])] += c * s[k] * signs_[e[k]];
      }
    }
    return grad;
  }

 private:
  void check(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != graph_.n()) {
      throw std::domain_error("vector of length " + std::to_string(v.size()) +
                              " does not match Laplacian dimension " + std::to_string(graph_.n()));
    }
  }

  UniformHypergraph graph_;
  Labels signs_;
};

inline double laplacian_form(const LaplacianOperator& op, std::span<const double> v) { return op.value(v); }

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// <L, v^{⊗m}> / ||v||^m.
template <class Form>
double rayleigh(const Form& form, std::span<const double> v) {
  const double nv = norm2(v);
  if (nv == 0.0) throw std::domain_error("Rayleigh quotient of the zero vector is undefined");
  return form.value(v) / detail::ipow(nv, form.order());
}

/// Symmetric adjacency tensor: 1 on every permutation of every edge.
inline SymmetricTensor adjacency_tensor(const UniformHypergraph& g) {
  SymmetricTensor a(g.m(), g.n());
  for (const auto& e : g.edges()) a.set(e, 1.0);
  return a;
}

/// Sign-weighted adjacency X_clean(y): prod_{i in e} y_i on each edge orbit.
inline SymmetricTensor signed_adjacency(const UniformHypergraph& g, std::span<const int> y) {
  require_signs(y, g.n());
  SymmetricTensor a(g.m(), g.n());
  for (const auto& e : g.edges()) {
    int prod = 1;
    for (int i : e) prod *= y[static_cast<std::size_t>(i)];
    a.set(e, prod);
  }
  return a;
}

/// Degree tensor D_y: zero on all-distinct indices and
/// <D_y - signed_adjacency(g, y), v^{⊗m}> = <L_y, v^{⊗m}> for every v.
/// Built by expanding each edge's zeta polynomial into monomials and placing
/// every non-multilinear coefficient uniformly on its index orbit.
inline SymmetricTensor degree_tensor(const UniformHypergraph& g, std::span<const int> y) {
  require_signs(y, g.n());
  SymmetricTensor d(g.m(), g.n());
  for (const auto& e : g.edges()) detail::accumulate_zeta_degree(d, e, y, 1.0);
  return d;
}

inline SymmetricTensor degree_tensor(const UniformHypergraph& g) {
  const Labels ones(static_cast<std::size_t>(g.n()), 1);
  return degree_tensor(g, ones);
}

}  // namespace hoinf
