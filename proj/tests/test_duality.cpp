#include <gtest/gtest.h>

#include "rot/duality.hpp"
#include "rot/errors.hpp"
#include "test_support.hpp"

namespace rot {
namespace {

using testing::Rng;

ExactMeasure m(const PairRef& pair, std::vector<std::pair<std::size_t, Rational>> atoms) {
  std::vector<WeightedPoint<Rational>> out;
  for (auto& [i, w] : atoms) out.push_back({PointId{i}, w});
  return ExactMeasure(pair, std::move(out));
}

// Indices 0..3 at 2, 3, 8, 9; A = {0}.
PairRef example_line() { return MetricPair::real_line({2, 3, 8, 9}); }

TEST(Duality, KrWorkedExample) {
  const PairRef pair = example_line();
  const auto cert = kr_dual(m(pair, {{0, 1}, {2, 1}}), m(pair, {{1, 1}, {3, 1}}));
  EXPECT_EQ(cert.value, 2);
  EXPECT_EQ(cert.primal, 2);
  EXPECT_EQ(cert.gap, 0);
  const auto& f = cert.potential_f;
  EXPECT_EQ(f.at(PointId{0}) - f.at(PointId{1}), 1);
  EXPECT_EQ(f.at(PointId{2}) - f.at(PointId{3}), 1);
  EXPECT_FALSE(cert.potential_g.has_value());
  EXPECT_EQ(kr_violation(*pair, f), 0.0);
}

TEST(Duality, KrAgainstZeroUsesDistanceToA) {
  const PairRef pair = example_line();
  const auto cert = kr_dual(m(pair, {{0, 1}, {2, 1}}), ExactMeasure(pair));
  EXPECT_EQ(cert.value, 10);
  EXPECT_EQ(cert.potential_f.at(PointId{0}), 2);
  EXPECT_EQ(cert.potential_f.at(PointId{2}), 8);

  const ExactMeasure mu = m(pair, {{1, 3}, {3, Rational(1, 2)}});
  EXPECT_EQ(kr_dual(mu, mu).value, 0);
}

TEST(Duality, OperatorNorm) {
  const PairRef pair = example_line();
  EXPECT_EQ(op_norm(ExactSignedMeasure(
                pair, {{PointId{0}, 1}, {PointId{1}, -1}, {PointId{2}, 1}, {PointId{3}, -1}})),
            2);
  EXPECT_EQ(op_norm(ExactSignedMeasure(pair)), 0);
}

TEST(Duality, NotALatticeNorm) {
  const PairRef pair = example_line();
  const ExactSignedMeasure s1(pair, {{PointId{0}, 1}, {PointId{2}, 1}});
  const ExactSignedMeasure s2(pair, {{PointId{0}, 1}, {PointId{1}, -1}, {PointId{2}, 1}, {PointId{3}, -1}});
  EXPECT_TRUE(le(abs_measure(s1), abs_measure(s2)));
  EXPECT_EQ(op_norm(s1), 10);
  EXPECT_EQ(op_norm(s2), 2);
}

TEST(Duality, MkSmallCases) {
  const PairRef pair = example_line();
  PairCost<Rational> zero;
  zero.point_count = 4;
  zero.matrix.assign(16, 0);
  zero.to_reservoir.assign(4, 0);
  zero.from_reservoir.assign(4, 0);
  EXPECT_EQ(mk_dual(zero, m(pair, {{0, 1}, {1, 2}}), m(pair, {{3, 5}})).value, 0);

  Rng rng(61);
  for (int t = 0; t < 40; ++t) {
    const PairCost<Rational> h = testing::random_consistent_cost<Rational>(rng, pair);
    const std::size_t x = static_cast<std::size_t>(testing::uniform_int(rng, 0, 3));
    const std::size_t y = static_cast<std::size_t>(testing::uniform_int(rng, 0, 3));
    const Rational direct = h(PointId{x}, PointId{y});
    const Rational detour = h.to_reservoir[x] + h.from_reservoir[y];
    EXPECT_EQ(mk_dual(h, m(pair, {{x, 1}}), m(pair, {{y, 1}})).value, std::min(direct, detour));
  }
}

TEST(Duality, MkRejectsBadCosts) {
  const PairRef pair = example_line();
  const ExactMeasure a = m(pair, {{0, 1}});
  PairCost<Rational> h = PairCost<Rational>::dbar(*pair);
  h.to_reservoir.clear();
  EXPECT_THROW(mk_dual(h, a, a), InvalidArgument);
  h = PairCost<Rational>::dbar(*pair);
  h.matrix[1] = -1;
  EXPECT_THROW(mk_dual(h, a, a), InvalidArgument);
  EXPECT_THROW(mk_dual(PairCost<Rational>::dbar(*pair), a, m(example_line(), {{0, 1}})), PairMismatch);
}

TEST(Duality, ExactRandomCertificates) {
  Rng rng(62);
  for (int t = 0; t < 80; ++t) {
    const PairRef pair = t % 2 ? testing::random_halfplane(rng, 12) : testing::random_explicit(rng, 12);
    const auto mu = testing::random_measure<Rational>(rng, pair, 7);
    const auto nu = testing::random_measure<Rational>(rng, pair, 7);
    const auto kr = kr_dual(mu, nu);
    ASSERT_EQ(kr.gap, 0);
    ASSERT_EQ(kr.primal, testing::ssp_cost(mu, nu, 1.0));
    ASSERT_EQ(kr_violation(*pair, kr.potential_f), 0.0);

    const auto via_network = kr_dual_from_network(mu, nu);
    ASSERT_EQ(via_network.value, kr.value);
    ASSERT_EQ(kr_violation(*pair, via_network.potential_f), 0.0);

    const auto mk = mk_dual(PairCost<Rational>::dbar(*pair), mu, nu);
    ASSERT_EQ(mk.value, kr.value);
    ASSERT_EQ(mk_violation(PairCost<Rational>::dbar(*pair), mk.potential_f, *mk.potential_g), 0.0);

    const auto h = testing::random_consistent_cost<Rational>(rng, pair);
    const auto general = mk_dual(h, mu, nu);
    ASSERT_EQ(general.gap, 0);
    ASSERT_EQ(mk_violation(h, general.potential_f, *general.potential_g), 0.0);
  }
}

TEST(Duality, FloatRandomCertificates) {
  Rng rng(63);
  for (int t = 0; t < 60; ++t) {
    const PairRef pair = testing::random_plane(rng, 16);
    const auto mu = testing::random_measure<double>(rng, pair, 10);
    const auto nu = testing::random_measure<double>(rng, pair, 10);
    for (const auto& cert : {kr_dual(mu, nu), kr_dual_from_network(mu, nu),
                             mk_dual(PairCost<double>::dbar(*pair), mu, nu)}) {
      EXPECT_LE(std::abs(cert.gap), kGapTolerance * std::max(1.0, cert.primal));
    }
    EXPECT_LE(kr_violation(*pair, kr_dual(mu, nu).potential_f), kFeasibilityTolerance);
  }
}

// Replacing a feasible (p, q) by (p', -p') with p' the conjugate of q never
// lowers the objective and lands in the KR-feasible set.
TEST(Duality, DoubleConjugationImprovesFeasiblePairs) {
  Rng rng(64);
  for (int t = 0; t < 100; ++t) {
    const PairRef pair = testing::random_halfplane(rng, 10);
    const auto mu = testing::random_measure<Rational>(rng, pair, 6);
    const auto nu = testing::random_measure<Rational>(rng, pair, 6);
    Potential<Rational> p, q;
    for (PointId x : mu.support()) {
      p[x] = std::min(Rational(testing::uniform_int(rng, -8, 8)), pair->exact_dist_to_reservoir(x));
    }
    for (PointId y : nu.support()) {
      Rational best = pair->exact_dist_to_reservoir(y);
      for (const auto& [x, px] : p) {
        best = std::min(best, Rational(pair->dp_cost_pow<Rational>(1.0, x, y) - px));
      }
      q[y] = best - testing::uniform_int(rng, 0, 2);
    }
    ASSERT_EQ(mk_violation(PairCost<Rational>::dbar(*pair), p, q), 0.0);
    std::vector<PointId> support = mu.support();
    for (PointId y : nu.support()) support.push_back(y);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const Potential<Rational> conj = kr_conjugate(*pair, support, q);
    EXPECT_EQ(kr_violation(*pair, conj), 0.0);
    EXPECT_GE(integrate(mu, conj) - integrate(nu, conj), integrate(mu, p) + integrate(nu, q));
  }
}

}  // namespace
}  // namespace rot
