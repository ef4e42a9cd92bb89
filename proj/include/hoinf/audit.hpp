#pragma once

// Reports how lambda_2 of the hypergraph Laplacian compares with phi^m.
// This never asserts the inequality: on K3 (m = 2) the classical values are
// lambda_2 = 3 and phi = 2, so lambda_2 >= phi^2 fails, and the audit
// records that rather than hiding it.

#include <cmath>
#include <optional>
#include <vector>

#include "hoinf/cut.hpp"
#include "hoinf/eigen.hpp"
#include "hoinf/spectral.hpp"

namespace hoinf {

struct CheegerAudit {
  double lambda2 = 0.0;
  double phi = 0.0;
  double phi_pow_m = 0.0;
  bool satisfied = false;
  BoundarySemantics semantics = BoundarySemantics::kEdgeSet;
  /// false when phi is a sweep-cut upper bound rather than the exact constant
  bool phi_exact = true;
  /// lambda2 / phi^m, absent when phi = 0
  std::optional<double> ratio;
  EigenResult eigen;
  CutReport cut;
};

/// phi^m by repeated multiplication, so the audit and its consumers agree
/// bit for bit.
inline double power_m(double phi, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= phi;
  return r;
}

inline CheegerAudit cheeger_audit(const UniformHypergraph& g, BoundarySemantics semantics,
                                  const EigenConfig& config) {
  CheegerAudit a;
  a.semantics = semantics;
  const LaplacianOperator op(g);
  const std::vector<std::vector<double>> ones{std::vector<double>(static_cast<std::size_t>(g.n()), 1.0)};
  a.eigen = tensor_eig_min(op, g.n(), g.m(), ones, config);
  a.lambda2 = a.eigen.value;

  if (binomial(g.n(), g.m() / 2) <= kExactCheegerLimit) {
    auto exact = cheeger_exact(g, semantics);
    a.phi = exact.phi;
    a.cut = std::move(exact.cut);
    a.phi_exact = true;
  } else {
    a.cut = cheeger_sweep(g, a.eigen.vector, semantics);
    a.phi = a.cut.expansion;
    a.phi_exact = false;
  }
  a.phi_pow_m = power_m(a.phi, g.m());
  a.satisfied = a.lambda2 >= a.phi_pow_m;
  if (a.phi_pow_m > 0.0) a.ratio = a.lambda2 / a.phi_pow_m;
  return a;
}

}  // namespace hoinf
