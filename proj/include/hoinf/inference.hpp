#pragma once

// Stage one (recover +-y* from X), optimality certificates, stage two (fix the
// global sign from node observations) and the end-to-end pipeline.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hoinf/eigen.hpp"
#include "hoinf/errors.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/model.hpp"
#include "hoinf/parallel.hpp"
#include "hoinf/spectral.hpp"
#include "hoinf/tensor.hpp"
#include "hoinf/unfolding.hpp"

namespace hoinf {

enum class StageOneMethod { kOracle, kRelaxation };

inline const char* to_string(StageOneMethod m) { return m == StageOneMethod::kOracle ? "oracle" : "relax"; }

inline StageOneMethod parse_method(std::string_view name) {
  if (name == "oracle") return StageOneMethod::kOracle;
  if (name == "relax") return StageOneMethod::kRelaxation;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected oracle or relax)");
}

struct StageOneResult {
  Labels y_hat;
  double objective = 0.0;
  StageOneMethod method = StageOneMethod::kOracle;
  bool converged = false;
};

/// <X, y^{⊗m}> for a label vector.
inline double label_objective(const SymmetricTensor& x, std::span<const int> y) {
  require_signs(y, x.dim());
  double sum = 0.0;
  for (const auto& [idx, v] : x.orbits()) {
    int s = 1;
    for (int i : idx) s *= y[static_cast<std::size_t>(i)];
    sum += static_cast<double>(orbit_size(idx)) * v * s;
  }
  return sum;
}

/// Largest n the exhaustive oracle accepts for order m.
inline int oracle_limit(int m) { return m == 2 ? 22 : 16; }

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

/// Maximizes <X, y^{⊗m}> over y with y_0 = +1. Ties go to the
/// lexicographically smallest y under the order +1 < -1, so X = 0 returns
/// the all-ones vector.
inline StageOneResult stage1_oracle(const SymmetricTensor& x, unsigned threads = 1) {
  const int n = x.dim();
  const int m = x.order();
  if (n > oracle_limit(m)) {
    throw GuardExceeded("exhaustive oracle supports n <= " + std::to_string(oracle_limit(m)) + " for m = " +
                        std::to_string(m) + ", got n = " + std::to_string(n) +
                        "; use the relaxation solver instead");
  }
  // Vertex i > 0 maps to bit n-1-i, so numeric mask order is the tie order.
  struct Term {
    std::uint32_t odd;
    double weight;
  };
  std::vector<Term> terms;
  terms.reserve(x.nonzero_orbits());
  for (const auto& [idx, v] : x.orbits()) {
    std::uint32_t odd = 0;
    for (const auto& [vertex, count] : multiplicities(idx)) {
      if (count % 2 == 1 && vertex > 0) odd ^= std::uint32_t{1} << (n - 1 - vertex);
    }
    terms.push_back({odd, static_cast<double>(orbit_size(idx)) * v});
  }
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  const std::size_t chunks = std::min<std::uint64_t>(total, 64);
  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;
  };
  std::vector<Best> best(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    Best b;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      double s = 0.0;
      for (const auto& t : terms) s += (std::popcount(static_cast<std::uint32_t>(mask) & t.odd) & 1) ? -t.weight : t.weight;
      if (s > b.value) b = {s, mask};
    }
    best[c] = b;
  });
  Best overall;
  for (const auto& b : best) {
    if (b.value > overall.value) overall = b;
  }
  StageOneResult r;
  r.method = StageOneMethod::kOracle;
  r.y_hat.assign(static_cast<std::size_t>(n), 1);
  for (int i = 1; i < n; ++i) {
    if (overall.mask & (std::uint64_t{1} << (n - 1 - i))) r.y_hat[static_cast<std::size_t>(i)] = -1;
  }
  r.objective = label_objective(x, r.y_hat);
  r.converged = true;
  return r;
}

// ---------------------------------------------------------------------------
// Factored relaxation
// ---------------------------------------------------------------------------

enum class Rounding { kDominantFactor, kProbe };

struct RelaxConfig {
  int factors = 1;
  int restarts = 4;
  /// Penalty weights applied in turn, each stage warm-started from the last.
  std::vector<double> penalty_schedule{0.05, 0.5, 5.0, 50.0};
  int iterations_per_stage = 200;
  double tolerance = 1e-7;
  double armijo = 1e-4;
  Rounding rounding = Rounding::kDominantFactor;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Restart 0 starts from spectral_labels(X) unless initial factors are given.
  bool spectral_start = true;
  /// Optional starting factors for restart 0 (each of length n).
  std::vector<std::vector<double>> initial_factors;
};

namespace detail {

/// Penalized relaxation objective
///   J(V) = <X, Y> - mu * sum_orbits size * pen(Y_o),  Y = sum_k v_k^{⊗m},
/// pen = (Y - 1)^2 on EvenRepeat orbits and max(|Y| - 1, 0)^2 elsewhere.
class RelaxObjective {
 public:
  RelaxObjective(const SymmetricTensor& x, int factors) : n_(x.dim()), m_(x.order()), k_(factors) {
    for_each_multiset(n_, m_, [&](std::span<const int> idx) {
      const MultiIndex mi(idx);
      size_.push_back(static_cast<double>(orbit_size(mi)));
      even_.push_back(classify_index(mi, n_) == IndexClass::kEvenRepeat ? 1 : 0);
      xval_.push_back(x.at(mi));
      for (int i : idx) index_.push_back(i);
    });
  }

  int n() const { return n_; }
  int factors() const { return k_; }

  /// Value and (optionally) gradient; v holds the factors back to back.
  double evaluate(std::span<const double> v, double mu, std::vector<double>* grad) const {
    if (grad) grad->assign(v.size(), 0.0);
    std::array<double, kMaxOrder + 1> prefix{};
    std::array<double, kMaxOrder + 1> suffix{};
    double total = 0.0;
    const int* ix = index_.data();
    for (std::size_t o = 0; o < size_.size(); ++o, ix += m_) {
      double y = 0.0;
      for (int k = 0; k < k_; ++k) {
        const double* f = v.data() + static_cast<std::ptrdiff_t>(k) * n_;
        double prod = 1.0;
        for (int s = 0; s < m_; ++s) prod *= f[ix[s]];
        y += prod;
      }
      double pen;
      double dpen;
      if (even_[o]) {
        pen = (y - 1.0) * (y - 1.0);
        dpen = 2.0 * (y - 1.0);
      } else {
        const double excess = std::abs(y) - 1.0;
        pen = excess > 0.0 ? excess * excess : 0.0;
        dpen = excess > 0.0 ? 2.0 * excess * (y > 0.0 ? 1.0 : -1.0) : 0.0;
      }
      total += size_[o] * (xval_[o] * y - mu * pen);
      if (!grad) continue;
      const double c = size_[o] * (xval_[o] - mu * dpen);
      if (c == 0.0) continue;
      for (int k = 0; k < k_; ++k) {
        const double* f = v.data() + static_cast<std::ptrdiff_t>(k) * n_;
        double* g = grad->data() + static_cast<std::ptrdiff_t>(k) * n_;
        prefix[0] = 1.0;
        for (int s = 0; s < m_; ++s) prefix[s + 1] = prefix[s] * f[ix[s]];
        suffix[m_] = 1.0;
        for (int s = m_ - 1; s >= 0; --s) suffix[s] = suffix[s + 1] * f[ix[s]];
        for (int s = 0; s < m_; ++s) g[ix[s]] += c * prefix[s] * suffix[s + 1];
      }
    }
    return total;
  }

 private:
  int n_;
  int m_;
  int k_;
  std::vector<double> size_;
  std::vector<char> even_;
  std::vector<double> xval_;
  std::vector<int> index_;
};

/// Gradient ascent with Armijo backtracking at fixed mu.
inline void ascend(const RelaxObjective& obj, std::vector<double>& v, double mu, const RelaxConfig& cfg) {
  std::vector<double> g;
  std::vector<double> cand(v.size());
  double f = obj.evaluate(v, mu, &g);
  double gn = norm(g);
  const double scale = std::max(1.0, gn);
  double alpha = gn > 0.0 ? 0.1 / gn : 1.0;
  for (int it = 0; it < cfg.iterations_per_stage && gn > cfg.tolerance * scale; ++it) {
    bool accepted = false;
    while (alpha * gn > 1e-14) {
      for (std::size_t i = 0; i < v.size(); ++i) cand[i] = v[i] + alpha * g[i];
      const double fc = obj.evaluate(cand, mu, nullptr);
      if (fc >= f + cfg.armijo * alpha * gn * gn) {
        v.swap(cand);
        f = fc;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return;
    alpha *= 2.0;
    f = obj.evaluate(v, mu, &g);
    gn = norm(g);
  }
}

inline Labels round_factors(std::span<const double> v, int n, int m, int factors, Rounding rule) {
  Labels y(static_cast<std::size_t>(n), 1);
  int dom = 0;
  double dom_norm = -1.0;
  for (int k = 0; k < factors; ++k) {
    const double nk = norm(v.subspan(static_cast<std::size_t>(k) * n, static_cast<std::size_t>(n)));
    if (nk > dom_norm) dom_norm = nk, dom = k;
  }
  const auto f = v.subspan(static_cast<std::size_t>(dom) * n, static_cast<std::size_t>(n));
  const bool usable = std::none_of(f.begin(), f.end(), [](double a) { return a == 0.0; });
  if (rule == Rounding::kDominantFactor && usable) {
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)] > 0.0 ? 1 : -1;
    return y;
  }
  // Probe rounding: sign of Y at (i, r, ..., r) relative to Y at (r, ..., r),
  // where r is the largest-magnitude coordinate of the dominant factor.
  int r = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(f[static_cast<std::size_t>(i)]) > std::abs(f[static_cast<std::size_t>(r)])) r = i;
  }
  for (int i = 0; i < n; ++i) {
    double yi = 0.0;
    for (int k = 0; k < factors; ++k) {
      const auto fk = v.subspan(static_cast<std::size_t>(k) * n, static_cast<std::size_t>(n));
      const double ref = fk[static_cast<std::size_t>(r)];
      yi += fk[static_cast<std::size_t>(i)] * ipow(ref, m - 1);
    }
    y[static_cast<std::size_t>(i)] = yi < 0.0 ? -1 : 1;
  }
  return y;
}

/// true when no single label flip strictly improves the objective.
inline bool one_flip_stable(const SymmetricTensor& x, Labels y) {
  const double base = label_objective(x, y);
  const double slack = 1e-9 * std::max(1.0, std::abs(base));
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = -y[i];
    const double f = label_objective(x, y);
    y[i] = -y[i];
    if (f > base + slack) return false;
  }
  return true;
}

}  // namespace detail

/// Penalized ascent over Y = sum_k v_k^{⊗m} from seeded restarts, rounded to
/// labels. The best rounded objective over restarts wins (ties: lowest
/// restart). converged reports whether the result survives 1-flip search.
inline StageOneResult stage1_relax(const SymmetricTensor& x, const RelaxConfig& cfg = {}) {
  const int n = x.dim();
  if (cfg.factors < 1) throw std::domain_error("relaxation needs at least one factor");
  if (cfg.restarts < 1) throw std::domain_error("relaxation needs at least one restart");
  if (cfg.penalty_schedule.empty()) throw std::domain_error("relaxation needs a nonempty penalty schedule");
  for (const auto& f : cfg.initial_factors) {
    if (static_cast<int>(f.size()) != n) throw std::domain_error("initial factor length does not match n");
  }
  if (static_cast<int>(cfg.initial_factors.size()) > cfg.factors) {
    throw std::domain_error("more initial factors than configured factors");
  }
  const detail::RelaxObjective obj(x, cfg.factors);
  struct Slot {
    Labels y;
    double objective = 0.0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(cfg.restarts));
  parallel_for(slots.size(), cfg.threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, 0x8E, r));
    std::vector<double> v(static_cast<std::size_t>(n) * cfg.factors);
    for (double& a : v) a = rng.normal();
    if (r == 0 && cfg.initial_factors.empty() && cfg.spectral_start) {
      const Labels s = spectral_labels(x, cfg.seed);
      std::copy(s.begin(), s.end(), v.begin());
      for (std::size_t i = static_cast<std::size_t>(n); i < v.size(); ++i) v[i] *= 0.1;
    }
    if (r == 0) {
      for (std::size_t k = 0; k < cfg.initial_factors.size(); ++k) {
        std::copy(cfg.initial_factors[k].begin(), cfg.initial_factors[k].end(), v.begin() + static_cast<long>(k) * n);
      }
    }
    for (double mu : cfg.penalty_schedule) detail::ascend(obj, v, mu, cfg);
    slots[r].y = sign_normalized(detail::round_factors(v, n, x.order(), cfg.factors, cfg.rounding));
    slots[r].objective = label_objective(x, slots[r].y);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < slots.size(); ++r) {
    if (slots[r].objective > slots[best].objective) best = r;
  }
  StageOneResult out;
  out.method = StageOneMethod::kRelaxation;
  out.y_hat = slots[best].y;
  out.objective = slots[best].objective;
  out.converged = detail::one_flip_stable(x, out.y_hat);
  return out;
}

// ---------------------------------------------------------------------------
// KKT certificate
// ---------------------------------------------------------------------------

/// Dual multipliers for the relaxation.
///  kDiagonalAmGm: V supported on the diagonal, V_{k..k} = (m-1)! sum_{e∋k} w_e
///                 with w_e = X_e prod_{i∈e} y_i. Zero duality gap by
///                 construction; A = V - X is PSD iff the AM-GM edge energies
///                 dominate.
///  kZetaDegree:   V = degree tensor of the zeta expansion with edge weights
///                 w_e. Identical to kDiagonalAmGm for m = 2; for m = 6 it has
///                 OddRepeat entries whose signs disagree with Y, so
///                 complementary slackness and the gap fail.
enum class DualConstruction { kDiagonalAmGm, kZetaDegree };

inline const char* to_string(DualConstruction d) {
  return d == DualConstruction::kDiagonalAmGm ? "diagonal-amgm" : "zeta-degree";
}

inline DualConstruction parse_dual_construction(std::string_view name) {
  if (name == "diagonal-amgm") return DualConstruction::kDiagonalAmGm;
  if (name == "zeta-degree") return DualConstruction::kZetaDegree;
  throw std::invalid_argument("unknown dual construction '" + std::string(name) +
                              "' (expected diagonal-amgm or zeta-degree)");
}

struct CertifyConfig {
  DualConstruction dual = DualConstruction::kDiagonalAmGm;
  double stationarity_tol = 1e-8;
  double slackness_tol = 1e-8;
  /// relative to max(1, |primal objective|)
  double gap_tol = 1e-7;
  /// lambda_2 must exceed this (strict) or be >= -psd_tol (non-strict)
  double lambda2_margin = 1e-6;
  bool require_strict = true;
  /// global minimum of <A, u^{⊗m}> over the unit sphere must be >= -psd_tol
  double psd_tol = 1e-8;
  EigenConfig eigen;
};

struct Certificate {
  DualConstruction dual = DualConstruction::kDiagonalAmGm;
  SymmetricTensor V{2, 1};
  SymmetricTensor V_plus{2, 1};
  SymmetricTensor V_minus{2, 1};
  SymmetricTensor A{2, 1};
  double stationarity_residual = 0.0;
  double primal_feasibility_residual = 0.0;
  double dual_feasibility_residual = 0.0;
  double complementary_slackness_residual = 0.0;
  double a_on_y = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  EigenResult lambda2_of_A;
  EigenResult lambda_min_of_A;
  /// the eigenvalue checks rest on restart-based search, not a proof
  bool spectral_checks_numerical = true;
  bool certified = false;
  std::vector<std::string> failures;
};

inline Certificate kkt_certify(const SymmetricTensor& x, std::span<const int> y, const CertifyConfig& cfg = {}) {
  const int n = x.dim();
  const int m = x.order();
  require_signs(y, n, "candidate labels");
  Certificate c;
  c.dual = cfg.dual;

  // Dual variable V from the edges of X, weighted by w_e = X_e * prod y.
  SymmetricTensor v(m, n);
  for (const auto& [idx, xv] : x.orbits()) {
    if (!idx.all_distinct()) continue;
    int s = 1;
    for (int i : idx) s *= y[static_cast<std::size_t>(i)];
    const double w = xv * s;
    if (cfg.dual == DualConstruction::kDiagonalAmGm) {
      for (int k : idx) {
        std::array<int, kMaxOrder> diag{};
        diag.fill(k);
        v.add(MultiIndex(std::span<const int>(diag.data(), static_cast<std::size_t>(m))),
              static_cast<double>(factorial(m - 1)) * w);
      }
    } else {
      detail::accumulate_zeta_degree(v, idx, y, w);
    }
  }
  c.V = SymmetricTensor(m, n);
  c.V_plus = SymmetricTensor(m, n);
  c.V_minus = SymmetricTensor(m, n);
  double dual_obj = 0.0;
  double slack = 0.0;
  double all_distinct_v = 0.0;
  for (const auto& [idx, val] : v.orbits()) {
    const double size = static_cast<double>(orbit_size(idx));
    switch (classify_index(idx, n)) {
      case IndexClass::kAllDistinct:
        all_distinct_v = std::max(all_distinct_v, std::abs(val));
        break;
      case IndexClass::kEvenRepeat:
        c.V.set(idx, val);
        dual_obj += size * val;
        break;
      case IndexClass::kOddRepeat: {
        c.V.set(idx, val);
        const double plus = std::max(val, 0.0);
        const double minus = -std::min(val, 0.0);
        c.V_plus.set(idx, plus);
        c.V_minus.set(idx, minus);
        dual_obj += size * (plus + minus);
        int s = 1;
        for (int i : idx) s *= y[static_cast<std::size_t>(i)];
        slack += size * (plus * std::abs(s - 1.0) + minus * std::abs(s + 1.0));
        break;
      }
    }
  }

  c.A = c.V - x;
  // Stationarity V - X - A = 0 holds by construction; report the computed
  // residual, plus any dual mass on all-distinct indices, which must be zero.
  c.stationarity_residual = std::max(max_abs_difference(c.V - x - c.A, SymmetricTensor(m, n)), all_distinct_v);
  // Y = y^{⊗m} is rank one (in the cone) with |entries| = 1.
  c.primal_feasibility_residual = 0.0;
  c.dual_feasibility_residual = 0.0;
  for (const auto& [idx, val] : c.V_plus.orbits()) c.dual_feasibility_residual = std::max(c.dual_feasibility_residual, -val);
  for (const auto& [idx, val] : c.V_minus.orbits()) c.dual_feasibility_residual = std::max(c.dual_feasibility_residual, -val);
  c.complementary_slackness_residual = slack;

  const std::vector<double> yr = to_real(y);
  const CompiledForm a_form(c.A);
  c.a_on_y = a_form.value(yr);
  c.primal_objective = label_objective(x, y);
  c.dual_objective = dual_obj;
  c.duality_gap = c.dual_objective - c.primal_objective;

  const double gap_scale = std::max(1.0, std::abs(c.primal_objective));
  auto fail = [&](std::string why) { c.failures.push_back(std::move(why)); };
  if (c.stationarity_residual > cfg.stationarity_tol) fail("stationarity residual above tolerance");
  if (c.dual_feasibility_residual > cfg.stationarity_tol) fail("negative V+ or V- entry");
  if (c.complementary_slackness_residual > cfg.slackness_tol) fail("complementary slackness violated");
  if (std::abs(c.a_on_y) > cfg.slackness_tol * gap_scale) fail("<A, Y> is not zero");
  if (std::abs(c.duality_gap) > cfg.gap_tol * gap_scale) fail("duality gap above tolerance");

  EigenConfig e2 = cfg.eigen;
  e2.stop_below = cfg.require_strict ? cfg.lambda2_margin : -cfg.psd_tol;
  c.lambda2_of_A = tensor_eig_min(a_form, n, m, {yr}, e2);
  if (cfg.require_strict ? !(c.lambda2_of_A.value > cfg.lambda2_margin) : c.lambda2_of_A.value < -cfg.psd_tol) {
    fail(cfg.require_strict ? "lambda_2 of A not above the strictness margin" : "lambda_2 of A is negative");
  }
  EigenConfig e1 = cfg.eigen;
  e1.stop_below = -cfg.psd_tol;
  e1.initial_vectors.insert(e1.initial_vectors.begin(), yr);
  c.lambda_min_of_A = tensor_eig_min(a_form, n, m, {}, e1);
  if (c.lambda_min_of_A.value < -cfg.psd_tol) fail("A is not positive semidefinite");

  c.certified = c.failures.empty();
  return c;
}

// ---------------------------------------------------------------------------
// Stage two and pipeline
// ---------------------------------------------------------------------------

/// y_hat if z . y_hat >= 0, else -y_hat (a zero margin keeps y_hat).
inline Labels stage2_disambiguate(std::span<const int> y_hat, std::span<const int> z) {
  if (y_hat.size() != z.size()) throw std::domain_error("stage two needs y_hat and z of equal length");
  Labels out(y_hat.begin(), y_hat.end());
  if (dot(z, y_hat) < 0) out = negated(std::move(out));
  return out;
}

struct PipelineConfig {
  StageOneMethod method = StageOneMethod::kOracle;
  RelaxConfig relax;
  bool certify = false;
  CertifyConfig certify_config;
  unsigned threads = 1;
};

struct RecoveryResult {
  Labels y_recovered;
  StageOneResult stage1;
  std::optional<Certificate> certificate;
  long stage2_margin = 0;
  /// present only when ground truth was supplied
  std::optional<bool> stage1_match;
  std::optional<bool> exact;
};

/// An exception raised inside one pipeline stage, tagged with that stage.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline RecoveryResult run_pipeline(const Observation& obs, const PipelineConfig& cfg,
                                   const std::optional<GroundTruth>& truth = std::nullopt) {
  RecoveryResult r;
  try {
    if (cfg.method == StageOneMethod::kOracle) {
      r.stage1 = stage1_oracle(obs.X, cfg.threads);
    } else {
      r.stage1 = stage1_relax(obs.X, cfg.relax);
    }
    r.stage1.y_hat = sign_normalized(std::move(r.stage1.y_hat));
  } catch (const std::exception& e) {
    throw PipelineError("stage one", e.what());
  }
  if (cfg.certify) {
    try {
      r.certificate = kkt_certify(obs.X, r.stage1.y_hat, cfg.certify_config);
    } catch (const std::exception& e) {
      throw PipelineError("certification", e.what());
    }
  }
  try {
    r.y_recovered = stage2_disambiguate(r.stage1.y_hat, obs.z);
    r.stage2_margin = dot(obs.z, r.y_recovered);
  } catch (const std::exception& e) {
    throw PipelineError("stage two", e.what());
  }
  if (truth) {
    require_signs(truth->y_star, obs.n(), "ground-truth labels");
    r.stage1_match = r.stage1.y_hat == truth->y_star || r.stage1.y_hat == negated(truth->y_star);
    r.exact = r.y_recovered == truth->y_star;
  }
  return r;
}

}  // namespace hoinf
