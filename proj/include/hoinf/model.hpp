#pragma once

// Generative observation model and closed-form failure-probability bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "hoinf/hypergraph.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/rng.hpp"
#include "hoinf/tensor.hpp"

namespace hoinf {

struct GroundTruth {
  Labels y_star;
};

struct Observation {
  SymmetricTensor X{2, 1};
  Labels z;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::string graph_ref;

  int n() const { return X.dim(); }
  int m() const { return X.order(); }
};

inline void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1), got " + std::to_string(v));
  }
}

/// Stream key for an edge, a function of its vertices only.
inline std::uint64_t edge_key(const MultiIndex& e) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (int v : e) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return h;
}

/// One draw per edge: the clean product of labels over the edge, negated with
/// probability p. Each node label is flipped with probability q.
inline Observation sample_observation(const UniformHypergraph& g, std::span<const int> y_star, double p,
                                      double q, std::uint64_t seed) {
  require_signs(y_star, g.n(), "ground-truth labels");
  require_probability(p, "edge noise p");
  require_probability(q, "node noise q");
  Observation obs;
  obs.X = SymmetricTensor(g.m(), g.n());
  for (const auto& e : g.edges()) {
    int v = 1;
    for (int i : e) v *= y_star[static_cast<std::size_t>(i)];
    Rng rng(derive_seed(seed, 0xED, edge_key(e)));
    if (rng.bernoulli(p)) v = -v;
    obs.X.set(e, v);
  }
  obs.z.assign(y_star.begin(), y_star.end());
  for (int i = 0; i < g.n(); ++i) {
    Rng rng(derive_seed(seed, 0x4E, static_cast<std::uint64_t>(i)));
    if (rng.bernoulli(q)) obs.z[static_cast<std::size_t>(i)] = -obs.z[static_cast<std::size_t>(i)];
  }
  obs.p = p;
  obs.q = q;
  obs.seed = seed;
  return obs;
}

/// Second-term coefficient of the stage-one bound: the displayed bound has
/// 16(1-p)|E|, the proof's intermediate step has 16p(1-p)|E|.
enum class Epsilon1Variant { kDisplayed, kProof };

inline double epsilon1(double phi, int n, double p, std::size_t edge_count, int m,
                       Epsilon1Variant variant = Epsilon1Variant::kDisplayed) {
  if (!(p >= 0.0 && p < 0.5)) throw std::domain_error("epsilon1 needs p in [0, 0.5); the bound is vacuous otherwise");
  if (!(phi > 0.0)) throw std::domain_error("epsilon1 needs phi > 0; the bound is undefined otherwise");
  if (m < 2 || n < m) throw std::domain_error("epsilon1 needs n >= m >= 2");
  const double nm = std::pow(static_cast<double>(n), m);
  const double nm1 = std::pow(static_cast<double>(n), m - 1);
  const double e = static_cast<double>(edge_count);
  const double s = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
  const double phi2m = std::pow(phi, 2 * m);
  const double first = 2.0 * nm * std::exp(-s * phi2m / (8.0 * nm * std::max(e, nm1)));
  const double coef = variant == Epsilon1Variant::kDisplayed ? 16.0 * (1.0 - p) : 16.0 * p * (1.0 - p);
  return first + coef * e / (s * phi2m);
}

inline double epsilon2(int n, double q) {
  require_probability(q, "node noise q");
  const double s = (1.0 - 2.0 * q) * (1.0 - 2.0 * q);
  return std::exp(-s * static_cast<double>(n) / 2.0);
}

inline double combined_failure_bound(double phi, int n, double p, double q, std::size_t edge_count, int m,
                                     Epsilon1Variant variant = Epsilon1Variant::kDisplayed) {
  return std::min(1.0, epsilon1(phi, n, p, edge_count, m, variant) + epsilon2(n, q));
}

}  // namespace hoinf
