#pragma once

// Variational minimum of <T, v^{⊗m}> over the unit sphere, optionally within
// the orthogonal complement of given constraint vectors. Projected Riemannian
// gradient descent with Armijo backtracking and seeded random restarts.
//
// For m > 2 the problem is nonconvex: the returned value is an upper bound on
// the true constrained minimum.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoinf/parallel.hpp"
#include "hoinf/rng.hpp"

namespace hoinf {

template <class F>
concept FormEvaluator = requires(const F& f, std::span<const double> v) {
  { f.value(v) } -> std::convertible_to<double>;
  { f.gradient(v) } -> std::convertible_to<std::vector<double>>;
};

struct EigenConfig {
  int restarts = 32;
  int max_iterations = 5000;
  /// Stop when the projected gradient norm falls below tolerance times
  /// max(1, initial projected gradient norm).
  double tolerance = 1e-8;
  double armijo = 1e-4;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Restarts run in batches of this size; after each batch the search ends
  /// early if the best value is below stop_below. Batching keeps the result
  /// independent of the thread count.
  int batch = 8;
  double stop_below = -std::numeric_limits<double>::infinity();
  /// Restart r < initial_vectors.size() starts from initial_vectors[r]
  /// (projected and normalized) instead of a random point.
  std::vector<std::vector<double>> initial_vectors;
};

struct EigenResult {
  double value = 0.0;
  std::vector<double> vector;
  int restarts_used = 0;
  double residual = 0.0;
  bool converged = false;
  int best_restart = -1;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Orthonormal basis of span(constraints) by modified Gram-Schmidt; vectors
/// that are numerically dependent are dropped.
inline std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& cs, int n) {
  std::vector<std::vector<double>> basis;
  for (const auto& c : cs) {
    if (static_cast<int>(c.size()) != n) {
      throw std::domain_error("constraint vector has length " + std::to_string(c.size()) +
                              ", expected " + std::to_string(n));
    }
    std::vector<double> u = c;
    const double before = norm(u);
    for (const auto& q : basis) {
      const double d = dot(u, q);
      for (int i = 0; i < n; ++i) u[i] -= d * q[i];
    }
    const double after = norm(u);
    if (before == 0.0 || after <= 1e-12 * before) continue;
    for (double& x : u) x /= after;
    basis.push_back(std::move(u));
  }
  return basis;
}

inline void project_out(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& q : basis) {
    const double d = dot(v, q);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
  }
}

inline bool normalize(std::vector<double>& v) {
  const double nv = norm(v);
  if (!(nv > 0.0) || !std::isfinite(nv)) return false;
  for (double& x : v) x /= nv;
  return true;
}

template <FormEvaluator Form>
EigenResult descend(const Form& form, int n, const std::vector<std::vector<double>>& basis,
                    const EigenConfig& cfg, int restart) {
  Rng rng(derive_seed(cfg.seed, 0xE1, static_cast<std::uint64_t>(restart)));
  std::vector<double> x(static_cast<std::size_t>(n));
  bool ok = false;
  if (restart < static_cast<int>(cfg.initial_vectors.size())) {
    const auto& init = cfg.initial_vectors[static_cast<std::size_t>(restart)];
    if (static_cast<int>(init.size()) != n) throw std::domain_error("initial vector length does not match n");
    x = init;
    project_out(x, basis);
    ok = normalize(x);
  }
  for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
    for (double& xi : x) xi = rng.normal();
    project_out(x, basis);
    ok = normalize(x);
  }
  EigenResult r;
  r.best_restart = restart;
  if (!ok) {
    throw std::domain_error("constraints leave no feasible direction on the unit sphere");
  }

  auto tangent = [&](const std::vector<double>& point) {
    std::vector<double> g = form.gradient(point);
    project_out(g, basis);
    const double radial = dot(g, point);
    for (int i = 0; i < n; ++i) g[i] -= radial * point[i];
    return g;
  };

  double f = form.value(x);
  std::vector<double> g = tangent(x);
  double res = norm(g);
  const double scale = std::max(1.0, res);
  double alpha = res > 0.0 ? 0.25 / res : 1.0;
  std::vector<double> cand(static_cast<std::size_t>(n));
  int it = 0;
  for (; it < cfg.max_iterations && res > cfg.tolerance * scale; ++it) {
    bool accepted = false;
    while (alpha * res > 1e-16) {
      for (int i = 0; i < n; ++i) cand[i] = x[i] - alpha * g[i];
      project_out(cand, basis);
      if (!normalize(cand)) {
        alpha *= 0.5;
        continue;
      }
      const double fc = form.value(cand);
      if (fc <= f - cfg.armijo * alpha * res * res) {
        x.swap(cand);
        f = fc;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    alpha *= 2.0;
    g = tangent(x);
    res = norm(g);
  }
  r.value = f;
  r.vector = std::move(x);
  r.residual = res;
  r.converged = res <= cfg.tolerance * scale;
  return r;
}

}  // namespace detail

/// Minimum of form(v) over unit v orthogonal to every constraint vector.
/// Best over restarts; ties go to the lowest restart index.
template <FormEvaluator Form>
EigenResult tensor_eig_min(const Form& form, int n, int m, const std::vector<std::vector<double>>& constraints,
                           const EigenConfig& config) {
  if (n < 1) throw std::domain_error("eigen problem dimension must be positive");
  if (m < 2 || m % 2 != 0) throw std::domain_error("eigen problem needs an even order m >= 2");
  if (config.restarts < 1) throw std::domain_error("eigen solver needs at least one restart");
  if (config.max_iterations < 0) throw std::domain_error("iteration cap must be nonnegative");
  const auto basis = detail::orthonormalize(constraints, n);
  if (static_cast<int>(basis.size()) >= n) {
    throw std::domain_error("constraints span the whole space; no feasible unit vector");
  }

  EigenResult best;
  bool have = false;
  const int batch = std::max(1, config.batch);
  int done = 0;
  while (done < config.restarts) {
    const int count = std::min(batch, config.restarts - done);
    std::vector<EigenResult> slots(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), config.threads, [&](std::size_t i) {
      slots[i] = detail::descend(form, n, basis, config, done + static_cast<int>(i));
    });
    for (auto& s : slots) {
      if (!have || s.value < best.value) {
        best = std::move(s);
        have = true;
      }
    }
    done += count;
    if (best.value < config.stop_below) break;
  }
  best.restarts_used = done;
  return best;
}

}  // namespace hoinf
