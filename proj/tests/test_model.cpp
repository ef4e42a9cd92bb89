#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace hoinf;

namespace {

struct BoundRow {
  double phi;
  int n;
  double p;
  double q;
  std::size_t edges;
  int m;
  double eps1;
  double eps1_proof;
  double eps2;
  double combined;
};

struct DecayRow {
  int n;
  double phi;
  std::size_t edges;
  double combined;
};

#include "oracles/bound_reference.inc"

double three_sigma(double prob, double trials) { return 3.0 * std::sqrt(prob * (1 - prob) / trials); }

}  // namespace

TEST(Sample, CleanObservation) {
  std::mt19937_64 rng(41);
  const auto g = oracle::random_graph(rng, 9, 6, 0.3);
  const auto y = oracle::random_signs(rng, 9);
  const auto obs = sample_observation(g, y, 0.0, 0.0, 7);
  EXPECT_EQ(max_abs_difference(obs.X, oracle::clean_observation(g, y)), 0.0);
  EXPECT_EQ(obs.X.nonzero_orbits(), g.edge_count());
  EXPECT_EQ(obs.z, y);
  EXPECT_EQ(obs.seed, 7u);
}

TEST(Sample, CompleteGraphOrbitCount) {
  const auto g = complete_hypergraph(8, 6);
  const Labels y(8, 1);
  for (double p : {0.0, 0.2, 0.49, 0.9}) {
    const auto obs = sample_observation(g, y, p, 0.1, 3);
    EXPECT_EQ(obs.X.nonzero_orbits(), 28u);
    for (const auto& [idx, v] : obs.X.orbits()) EXPECT_TRUE(v == 1.0 || v == -1.0);
  }
}

TEST(Sample, FlipRatesWithinBinomialBand) {
  const auto g = complete_hypergraph(150, 2);
  const double edges = static_cast<double>(g.edge_count());
  ASSERT_GE(edges, 1e4);
  const auto y = random_labels(150, 5);
  const auto clean = oracle::clean_observation(g, y);
  for (double p : {0.1, 0.3, 0.5}) {
    const auto obs = sample_observation(g, y, p, 0.0, 11);
    double flipped = 0;
    for (const auto& [idx, v] : obs.X.orbits()) flipped += v != clean.at(idx);
    EXPECT_NEAR(flipped / edges, p, three_sigma(p, edges));
  }
  const Labels big(10000, 1);
  const UniformHypergraph none(10000, 2, {});
  for (double q : {0.1, 0.25}) {
    const auto obs = sample_observation(none, big, 0.0, q, 13);
    double flipped = 0;
    for (int z : obs.z) flipped += z == -1;
    EXPECT_NEAR(flipped / 1e4, q, three_sigma(q, 1e4));
  }
}

TEST(Sample, FairCoinsAtHalfIndependentOfLabels) {
  const auto g = complete_hypergraph(150, 2);
  const double edges = static_cast<double>(g.edge_count());
  for (std::uint64_t label_seed : {1u, 2u}) {
    const auto obs = sample_observation(g, random_labels(150, label_seed), 0.5, 0.0, 17);
    double plus = 0;
    for (const auto& [idx, v] : obs.X.orbits()) plus += v > 0;
    EXPECT_NEAR(plus / edges, 0.5, three_sigma(0.5, edges));
  }
}

TEST(Sample, Deterministic) {
  const auto g = erdos_renyi_hypergraph(10, 6, 0.4, 2);
  const auto y = random_labels(10, 3);
  const auto a = sample_observation(g, y, 0.2, 0.3, 99);
  const auto b = sample_observation(g, y, 0.2, 0.3, 99);
  EXPECT_EQ(max_abs_difference(a.X, b.X), 0.0);
  EXPECT_EQ(a.z, b.z);
  const auto c = sample_observation(g, y, 0.2, 0.3, 100);
  EXPECT_TRUE(max_abs_difference(a.X, c.X) > 0.0 || a.z != c.z);
}

TEST(Sample, GlobalSignSymmetry) {
  // Every orbit of X is an edge with an even number of vertices, so the
  // product over the edge is unchanged by y -> -y; z flips.
  const auto g = erdos_renyi_hypergraph(10, 6, 0.5, 4);
  const auto y = random_labels(10, 8);
  const auto a = sample_observation(g, y, 0.3, 0.2, 21);
  const auto b = sample_observation(g, negated(y), 0.3, 0.2, 21);
  EXPECT_EQ(max_abs_difference(a.X, b.X), 0.0);
  EXPECT_EQ(b.z, negated(a.z));
}

TEST(Sample, RejectsInvalidInput) {
  const auto g = complete_hypergraph(8, 6);
  const Labels y(8, 1);
  EXPECT_THROW(sample_observation(g, y, 1.0, 0.0, 1), std::domain_error);
  EXPECT_THROW(sample_observation(g, y, -0.1, 0.0, 1), std::domain_error);
  EXPECT_THROW(sample_observation(g, y, 0.0, 1.2, 1), std::domain_error);
  EXPECT_THROW(sample_observation(g, Labels(7, 1), 0.0, 0.0, 1), std::domain_error);
  EXPECT_THROW(sample_observation(g, Labels{1, 1, 1, 1, 1, 1, 1, 0}, 0.0, 0.0, 1), std::domain_error);
}

TEST(Bounds, MatchIndependentReference) {
  for (const auto& r : kBoundGrid) {
    EXPECT_LE(oracle::rel_err(epsilon1(r.phi, r.n, r.p, r.edges, r.m), r.eps1), 1e-12) << r.phi << " " << r.n;
    EXPECT_LE(oracle::rel_err(epsilon1(r.phi, r.n, r.p, r.edges, r.m, Epsilon1Variant::kProof), r.eps1_proof), 1e-12);
    EXPECT_LE(oracle::rel_err(epsilon2(r.n, r.q), r.eps2), 1e-12);
    EXPECT_LE(oracle::rel_err(combined_failure_bound(r.phi, r.n, r.p, r.q, r.edges, r.m), r.combined), 1e-12);
  }
}

TEST(Bounds, CompleteHypergraphDecay) {
  double prev = 1e300;
  for (const auto& r : kCompleteDecay) {
    ASSERT_EQ(r.phi, binomial(r.n, 3) / 2.0);
    ASSERT_EQ(r.edges, binomial(r.n, 6));
    const double b = combined_failure_bound(r.phi, r.n, 0.1, 0.1, r.edges, 6);
    EXPECT_LE(oracle::rel_err(b, r.combined), 1e-12);
    EXPECT_LE(r.n * b, prev);
    prev = r.n * b;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Bounds, Epsilon2Examples) {
  EXPECT_DOUBLE_EQ(epsilon2(50, 0.0), std::exp(-25.0));
  EXPECT_EQ(epsilon2(7, 0.5), 1.0);
  EXPECT_EQ(epsilon2(1000, 0.5), 1.0);
  EXPECT_NEAR(epsilon2(100, 0.25), 3.727e-6, 1e-9);
  EXPECT_THROW(epsilon2(10, 1.0), std::domain_error);
}

TEST(Bounds, Epsilon1Limits) {
  EXPECT_GT(epsilon1(60, 10, 0.499999, 210, 6), 1e6);
  EXPECT_LT(epsilon1(1e6, 10, 0.1, 210, 6), 1e-60);
  EXPECT_THROW(epsilon1(60, 10, 0.5, 210, 6), std::domain_error);
  EXPECT_THROW(epsilon1(0.0, 10, 0.1, 210, 6), std::domain_error);
  EXPECT_THROW(epsilon1(-1.0, 10, 0.1, 210, 6), std::domain_error);
  EXPECT_THROW(combined_failure_bound(0.0, 10, 0.1, 0.1, 210, 6), std::domain_error);
}

TEST(Bounds, Epsilon1Monotone) {
  for (int m : {2, 6}) {
    double last = 1e300;
    for (double phi = 0.5; phi < 80; phi *= 1.3) {
      const double e = epsilon1(phi, 10, 0.2, 100, m);
      EXPECT_LE(e, last);
      last = e;
    }
    last = 0.0;
    for (double p = 0.0; p < 0.5; p += 0.02) {
      const double e = epsilon1(40, 10, p, 100, m);
      EXPECT_GE(e, last);
      last = e;
    }
  }
}

TEST(Bounds, CombinedClampAndAdditivity) {
  EXPECT_EQ(combined_failure_bound(1.0, 10, 0.1, 0.1, 210, 6), 1.0);
  EXPECT_EQ(combined_failure_bound(60, 10, 0.1, 0.5, 210, 6), 1.0);
  EXPECT_EQ(combined_failure_bound(60, 10, 0.0, 0.0, 210, 6), epsilon1(60, 10, 0.0, 210, 6) + epsilon2(10, 0.0));
}
