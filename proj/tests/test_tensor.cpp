#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace hoinf;

namespace {

SymmetricTensor random_sparse(std::mt19937_64& rng, int m, int n, double density) {
  SymmetricTensor t(m, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  for_each_multiset(n, m, [&](std::span<const int> s) {
    if (keep(rng)) t.set(MultiIndex(s), u(rng));
  });
  return t;
}

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify_index({0, 0, 1, 1, 2, 2}, 4), IndexClass::kEvenRepeat);
  EXPECT_EQ(classify_index({0, 0, 0, 1, 2, 3}, 4), IndexClass::kOddRepeat);
  EXPECT_EQ(classify_index({0, 1}, 2), IndexClass::kAllDistinct);
  EXPECT_EQ(classify_index({3, 3, 3, 3, 0, 0}, 4), IndexClass::kEvenRepeat);
  EXPECT_THROW(classify_index({0, 5}, 3), std::domain_error);
}

TEST(Classify, PartitionsAllMultisets) {
  for (int m : {2, 6}) {
    std::size_t total = 0;
    std::size_t even = 0;
    std::size_t odd = 0;
    std::size_t distinct = 0;
    for_each_multiset(5, m, [&](std::span<const int> s) {
      ++total;
      switch (classify_index(MultiIndex(s), 5)) {
        case IndexClass::kEvenRepeat: ++even; break;
        case IndexClass::kOddRepeat: ++odd; break;
        case IndexClass::kAllDistinct: ++distinct; break;
      }
    });
    EXPECT_EQ(total, even + odd + distinct);
    EXPECT_EQ(distinct, binomial(5, m));
  }
}

TEST(Tensor, PermutationInvariantReads) {
  std::mt19937_64 rng(1);
  const auto t = random_sparse(rng, 6, 4, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> idx(6);
    for (int& i : idx) i = static_cast<int>(rng() % 4);
    auto perm = idx;
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(t.at(MultiIndex(idx)), t.at(MultiIndex(perm)));
  }
}

TEST(Tensor, RejectsUnsupportedOrders) {
  EXPECT_THROW(SymmetricTensor(4, 3), std::domain_error);
  EXPECT_THROW(SymmetricTensor(3, 3), std::domain_error);
  EXPECT_NO_THROW(SymmetricTensor(2, 3));
}

TEST(InnerProduct, SingleOffDiagonalOrbit) {
  SymmetricTensor a(2, 2);
  a.set({0, 1}, 1.0);
  EXPECT_DOUBLE_EQ(inner_product(a, a), 2.0);
  EXPECT_DOUBLE_EQ(inner_product(a, SymmetricTensor(2, 2)), 0.0);
}

TEST(InnerProduct, ShapeMismatchThrows) {
  EXPECT_THROW(inner_product(SymmetricTensor(2, 3), SymmetricTensor(2, 4)), std::domain_error);
  EXPECT_THROW(inner_product(SymmetricTensor(2, 3), SymmetricTensor(6, 3)), std::domain_error);
}

TEST(InnerProduct, MatchesDenseSummation) {
  std::mt19937_64 rng(2);
  for (int m : {2, 6}) {
    for (int n = 1; n <= (m == 2 ? 6 : 5); ++n) {
      const auto a = random_sparse(rng, m, n, 0.4);
      const auto b = random_sparse(rng, m, n, 0.4);
      const double dense = oracle::dense_inner(oracle::dense(a), oracle::dense(b));
      EXPECT_NEAR(inner_product(a, b), dense, 1e-10 * std::max(1.0, std::abs(dense)));
      EXPECT_NEAR(frobenius_norm(a), std::sqrt(oracle::dense_inner(oracle::dense(a), oracle::dense(a))), 1e-10);
    }
  }
}

TEST(OuterPowerForm, Examples) {
  SymmetricTensor id(2, 2);
  id.set({0, 0}, 1.0);
  id.set({1, 1}, 1.0);
  const std::vector<double> v{3, 4};
  EXPECT_DOUBLE_EQ(outer_power_form(id, v), 25.0);
  std::mt19937_64 rng(3);
  const auto t = random_sparse(rng, 6, 4, 0.5);
  EXPECT_EQ(outer_power_form(t, std::vector<double>(4, 0.0)), 0.0);
  EXPECT_THROW(outer_power_form(t, v), std::domain_error);
}

TEST(OuterPowerForm, MatchesDenseEnumeration) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_sparse(rng, 6, 4, 0.5);
    const auto v = oracle::random_vector(rng, 4);
    const double dense = oracle::dense_form(oracle::dense(t), 4, 6, v);
    EXPECT_LE(oracle::rel_err(outer_power_form(t, v), dense), 1e-12);
    EXPECT_LE(oracle::rel_err(CompiledForm(t).value(v), dense), 1e-12);
  }
}

TEST(OuterPowerGradient, QuadraticCase) {
  SymmetricTensor t(2, 3);
  t.set({0, 0}, 2.0);
  t.set({0, 1}, -1.0);
  t.set({1, 2}, 0.5);
  t.set({2, 2}, 3.0);
  const std::vector<double> v{1.0, -2.0, 0.5};
  const auto g = outer_power_gradient(t, v);
  // 2 T v with T = [[2,-1,0],[-1,0,.5],[0,.5,3]]
  EXPECT_DOUBLE_EQ(g[0], 2 * (2 * 1.0 + -1 * -2.0));
  EXPECT_DOUBLE_EQ(g[1], 2 * (-1 * 1.0 + 0.5 * 0.5));
  EXPECT_DOUBLE_EQ(g[2], 2 * (0.5 * -2.0 + 3 * 0.5));
}

TEST(OuterPowerGradient, ZeroAtOriginForOrderSix) {
  std::mt19937_64 rng(5);
  const auto t = random_sparse(rng, 6, 4, 0.5);
  for (double x : outer_power_gradient(t, std::vector<double>(4, 0.0))) EXPECT_EQ(x, 0.0);
}

TEST(OuterPowerGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_sparse(rng, 6, 4, 0.5);
    const auto v = oracle::random_vector(rng, 4);
    const auto g = outer_power_gradient(t, v);
    const auto gc = CompiledForm(t).gradient(v);
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-5;
      auto vp = v;
      auto vm = v;
      vp[k] += h;
      vm[k] -= h;
      const double fd = (outer_power_form(t, vp) - outer_power_form(t, vm)) / (2 * h);
      EXPECT_LE(std::abs(g[k] - fd), 1e-6 * std::max(1.0, std::abs(fd)));
      EXPECT_LE(oracle::rel_err(g[k], gc[k]), 1e-12);
    }
    // directional derivative
    const auto d = oracle::random_vector(rng, 4);
    double gd = 0.0;
    for (int k = 0; k < 4; ++k) gd += g[k] * d[k];
    auto vp = v;
    auto vm = v;
    for (int k = 0; k < 4; ++k) {
      vp[k] += 1e-5 * d[k];
      vm[k] -= 1e-5 * d[k];
    }
    const double fd = (outer_power_form(t, vp) - outer_power_form(t, vm)) / 2e-5;
    EXPECT_LE(std::abs(gd - fd), 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(RankOne, Examples) {
  const auto ones = rank_one(std::vector<double>(3, 1.0), 2);
  for_each_multiset(3, 2, [&](std::span<const int> s) { EXPECT_EQ(ones.at(MultiIndex(s)), 1.0); });
  const std::vector<double> a{1, 1, 0};
  const std::vector<double> b{1, -1, 5};
  EXPECT_NEAR(inner_product(rank_one(a, 6), rank_one(b, 6)), 0.0, 1e-12);
}

TEST(RankOne, InnerProductIsPowerOfDot) {
  std::mt19937_64 rng(7);
  for (int m : {2, 6}) {
    const auto u = oracle::random_vector(rng, 4);
    const auto v = oracle::random_vector(rng, 4);
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += u[i] * v[i];
    EXPECT_LE(oracle::rel_err(inner_product(rank_one(u, m), rank_one(v, m)), std::pow(d, m)), 1e-12);
  }
}

TEST(RankOne, SignParityOfLabelVectors) {
  std::mt19937_64 rng(8);
  const auto y = oracle::random_signs(rng, 5);
  const auto t = rank_one(to_real(y), 6);
  for_each_multiset(5, 6, [&](std::span<const int> s) {
    const MultiIndex idx(s);
    int expected = 1;
    for (const auto& [value, mult] : multiplicities(idx)) {
      if (mult % 2 == 1 && y[value] == -1) expected = -expected;
    }
    EXPECT_EQ(t.at(idx), expected);
    if (classify_index(idx, 5) == IndexClass::kEvenRepeat) {
      EXPECT_EQ(t.at(idx), 1.0);
    }
  });
}

TEST(OrbitSize, MatchesPermutationCount) {
  for_each_multiset(4, 6, [&](std::span<const int> s) {
    const MultiIndex idx(s);
    EXPECT_EQ(static_cast<double>(orbit_size(idx)), oracle::permutation_count(idx));
  });
}
