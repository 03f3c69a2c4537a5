#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "gan/dynamics.hpp"
#include "gan/learning.hpp"

using namespace gan;

namespace {

LearnConfig mode(LearnMode m, double kappa = 0.0, std::size_t epochs = 1000) {
  LearnConfig c;
  c.mode = m;
  c.kappa = kappa;
  c.max_epochs = epochs;
  return c;
}

StateMatrix all_ones(std::size_t n, std::size_t q) {
  StateMatrix s(n, q);
  for (std::size_t i = 0; i < n; ++i) s.set_word(i, low_mask(q));
  return s;
}

double row_norm(const Network& net, std::size_t i, std::size_t a) {
  double s = 0.0;
  for (double v : net.weights().row(a, i)) s += v * v;
  if (net.couplings())
    for (double v : net.couplings()->row(i, a)) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_THROW(mode(LearnMode::perceptron, -0.1).validate(), std::invalid_argument);
  EXPECT_THROW(mode(LearnMode::perceptron, 0.0, 0).validate(), std::invalid_argument);
  EXPECT_EQ(LearnConfig{}.mode, LearnMode::centered_hebb);
}

TEST(Hebb, LiteralSinglePatternAllOnes) {
  const GanSpec spec{5, 1, CharacteristicSpec::parity(), false};
  PatternSet set{{all_ones(5, 1)}, 0.5};
  const auto w = hebb_weights(set, spec, mode(LearnMode::literal_hebb));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(w(0, i, j), i == j ? 0.0 : 1.0);
}

TEST(Hebb, CenteredSinglePatternHalfMean) {
  const GanSpec spec{20, 2, CharacteristicSpec::parity(), false};
  const auto set = random_pattern_set(20, 2, 1, 0.5, RunSeed{4});
  LearnConfig c = mode(LearnMode::centered_hebb);
  c.f_mean = 0.5;
  const auto w = hebb_weights(set, spec, c);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        if (i == j) {
          EXPECT_EQ(w(a, i, j), 0.0);
          continue;
        }
        const double s = set[0].bit(i, a) ? 1.0 : -1.0;
        const double f = std::popcount(set[0].word(j)) & 1;
        EXPECT_EQ(w(a, i, j), s * (2 * f - 1) / 2);
      }
}

TEST(Hebb, EmpiricalMeanCentering) {
  const GanSpec spec{10, 2, CharacteristicSpec::parity(), false};
  const auto set = random_pattern_set(10, 2, 3, 0.5, RunSeed{6});
  double fbar = 0.0;
  for (const auto& p : set.patterns)
    for (std::size_t j = 0; j < 10; ++j) fbar += std::popcount(p.word(j)) & 1;
  fbar /= 30.0;
  const auto w = hebb_weights(set, spec, LearnConfig{});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) {
        double want = 0.0;
        if (i != j)
          for (const auto& p : set.patterns)
            want += (p.bit(i, a) ? 1.0 : -1.0) * ((std::popcount(p.word(j)) & 1) - fbar);
        EXPECT_NEAR(w(a, i, j), want, 1e-12);
      }
}

TEST(Hebb, InvariantUnderPatternReordering) {
  const GanSpec spec{40, 3, CharacteristicSpec::parity(), false};
  auto set = random_pattern_set(40, 3, 6, 0.5, RunSeed{9});
  LearnConfig exact = LearnConfig{};
  exact.f_mean = 0.5;
  const auto w1 = hebb_weights(set, spec, exact);
  const auto e1 = hebb_weights(set, spec, LearnConfig{});
  const auto l1 = hebb_weights(set, spec, mode(LearnMode::literal_hebb));
  std::reverse(set.patterns.begin(), set.patterns.end());
  std::swap(set.patterns[1], set.patterns[4]);
  const auto w2 = hebb_weights(set, spec, exact);
  const auto e2 = hebb_weights(set, spec, LearnConfig{});
  const auto l2 = hebb_weights(set, spec, mode(LearnMode::literal_hebb));
  EXPECT_TRUE(std::equal(w1.data().begin(), w1.data().end(), w2.data().begin()));
  EXPECT_TRUE(std::equal(l1.data().begin(), l1.data().end(), l2.data().begin()));
  for (std::size_t k = 0; k < e1.data().size(); ++k) EXPECT_NEAR(e1.data()[k], e2.data()[k], 1e-12);
}

TEST(Hebb, Errors) {
  const GanSpec spec{10, 2, CharacteristicSpec::parity(), false};
  EXPECT_THROW(hebb_weights(PatternSet{}, spec, LearnConfig{}), std::invalid_argument);
  const auto set = random_pattern_set(10, 2, 1, 0.5, RunSeed{1});
  EXPECT_THROW(hebb_weights(set, spec, mode(LearnMode::perceptron)), std::invalid_argument);
  const auto wrong = random_pattern_set(11, 2, 1, 0.5, RunSeed{1});
  EXPECT_THROW(hebb_weights(wrong, spec, LearnConfig{}), std::invalid_argument);
}

TEST(Hebb, LiteralRuleMakesAllOnesAbsorbing) {
  // s, f >= 0 gives W >= 0 and fields >= 0, so H(0) = 1 sets every bit
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GanSpec spec{30, 2, CharacteristicSpec::parity(), false};
    const auto set = random_pattern_set(30, 2, 3, 0.5, RunSeed{seed});
    const Network net = build_network(spec, hebb_weights(set, spec, mode(LearnMode::literal_hebb)));
    for (double v : net.weights().data()) EXPECT_GE(v, 0.0);
    Rng rng = RunSeed{seed}.engine();
    StateMatrix s(30, 2);
    for (std::size_t i = 0; i < 30; ++i) s.set_word(i, rng());
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t a = 0; a < 2; ++a) EXPECT_GE(local_field(net, s, i, a), 0.0);
    EXPECT_EQ(step_sync(net, s), all_ones(30, 2));
    EXPECT_EQ(step_sync(net, all_ones(30, 2)), all_ones(30, 2));
    EXPECT_FALSE(is_fixed_point(net, set[0]));
  }
}

TEST(Hebb, CenteredSinglePatternFixedPoint) {
  for (std::size_t n : {50U, 100U}) {
    const GanSpec spec{n, 2, CharacteristicSpec::parity(), false};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto set = random_pattern_set(n, 2, 1, 0.5, RunSeed{seed});
      const Network net = build_network(spec, hebb_weights(set, spec, LearnConfig{}));
      EXPECT_TRUE(is_fixed_point(net, set[0])) << n << " " << seed;
    }
  }
}

TEST(Hebb, CenteredSinglePatternSmallestSize) {
  // smallest N from which every seed in 0..99 stores its pattern
  std::size_t n0 = 0;
  for (std::size_t n = 2; n <= 50; ++n) {
    const GanSpec spec{n, 2, CharacteristicSpec::parity(), false};
    bool all = true;
    for (std::uint64_t seed = 0; seed < 100 && all; ++seed) {
      const auto set = random_pattern_set(n, 2, 1, 0.5, RunSeed{seed});
      all = is_fixed_point(build_network(spec, hebb_weights(set, spec, LearnConfig{})), set[0]);
    }
    if (!all) n0 = 0;
    else if (n0 == 0) n0 = n;
  }
  RecordProperty("N0", static_cast<int>(n0));
  EXPECT_GT(n0, 0U);
  EXPECT_LE(n0, 20U);
}

TEST(HebbInternal, SinglePattern) {
  const GanSpec spec{6, 3, CharacteristicSpec::parity(), true};
  const auto set = random_pattern_set(6, 3, 1, 0.5, RunSeed{2});
  const auto l = hebb_internal(set, spec);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        if (a == b) {
          EXPECT_EQ(l(i, a, b), 0.0);
          continue;
        }
        EXPECT_EQ(l(i, a, b), set[0].bit(i, a) == set[0].bit(i, b) ? 1.0 : -1.0);
        EXPECT_EQ(l(i, a, b), l(i, b, a));
      }
}

TEST(HebbInternal, ComplementDoublesAgreement) {
  const GanSpec spec{6, 4, CharacteristicSpec::parity(), true};
  auto set = random_pattern_set(6, 4, 1, 0.5, RunSeed{3});
  const auto one = hebb_internal(set, spec);
  set.patterns.push_back(anti_state(set[0]));
  const auto two = hebb_internal(set, spec);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(two(i, a, b), 2.0 * one(i, a, b));
}

TEST(HebbInternal, SingleVariableIsEmpty) {
  const GanSpec spec{5, 1, CharacteristicSpec::parity(), true};
  const auto l = hebb_internal(random_pattern_set(5, 1, 3, 0.5, RunSeed{1}), spec);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(l(i, 0, 0), 0.0);
  EXPECT_THROW(hebb_internal(PatternSet{}, spec), std::invalid_argument);
  EXPECT_THROW(hebb_internal(random_pattern_set(5, 1, 1, 0.5, RunSeed{1}),
                             GanSpec{5, 1, CharacteristicSpec::parity(), false}),
               std::invalid_argument);
}

TEST(Perceptron, SinglePatternConvergesFast) {
  const GanSpec spec{30, 2, CharacteristicSpec::parity(), false};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = random_pattern_set(30, 2, 1, 0.5, RunSeed{seed});
    const auto r = perceptron_train(set, spec, mode(LearnMode::perceptron));
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.epochs, 2U);
    EXPECT_EQ(r.rows_converged, 60U);
    EXPECT_TRUE(is_fixed_point(build_network(spec, r.weights), set[0]));
  }
}

TEST(Perceptron, BelowCapacityConverges) {
  const GanSpec spec{64, 2, CharacteristicSpec::parity(), false};
  const auto set = random_pattern_set(64, 2, 32, 0.5, RunSeed{17});
  const auto r = perceptron_train(set, spec, mode(LearnMode::perceptron));
  ASSERT_TRUE(r.converged);
  const Network net = build_network(spec, r.weights);
  const auto m = stability_margins(net, set, 0.0);
  EXPECT_TRUE(m.all_at_least_kappa);
  for (const auto& p : set.patterns) EXPECT_TRUE(is_fixed_point(net, p));
}

TEST(Perceptron, AboveCapacityFails) {
  const GanSpec spec{64, 2, CharacteristicSpec::parity(), false};
  const auto set = random_pattern_set(64, 2, 256, 0.5, RunSeed{18});
  const auto r = perceptron_train(set, spec, mode(LearnMode::perceptron, 0.0, 300));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.epochs, 300U);
}

TEST(Perceptron, MarginPostConditionAndNormalization) {
  for (bool inter : {false, true}) {
    const GanSpec spec{40, 3, CharacteristicSpec::parity(), inter};
    const auto set = random_pattern_set(40, 3, 8, 0.5, RunSeed{inter ? 5U : 6U});
    const double kappa = 0.5;
    const auto r = perceptron_train(set, spec, mode(LearnMode::perceptron, kappa, 5000));
    ASSERT_TRUE(r.converged) << inter;
    const Network net = build_network(spec, r.weights, r.couplings);
    const auto m = stability_margins(net, set, 0.0);
    for (std::size_t mu = 0; mu < set.size(); ++mu)
      for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t a = 0; a < 3; ++a)
          EXPECT_GE(m.margin(mu, i, a), kappa * row_norm(net, i, a) / std::sqrt(40.0) - 1e-9);
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t a = 0; a < 3; ++a) {
        double w2 = 0.0;
        for (double v : net.weights().row(a, i)) w2 += v * v;
        EXPECT_NEAR(w2, 40.0, 1e-9);
        EXPECT_EQ(net.weights()(a, i, i), 0.0);
        if (inter) EXPECT_EQ((*net.couplings())(i, a, a), 0.0);
      }
  }
}

TEST(Perceptron, ThreadCountDoesNotChangeResult) {
  const GanSpec spec{48, 2, CharacteristicSpec::parity(), true};
  const auto set = random_pattern_set(48, 2, 20, 0.5, RunSeed{8});
  auto c = mode(LearnMode::perceptron, 0.2);
  const auto a = perceptron_train(set, spec, c);
  c.threads = 4;
  const auto b = perceptron_train(set, spec, c);
  EXPECT_TRUE(std::equal(a.weights.data().begin(), a.weights.data().end(), b.weights.data().begin()));
  EXPECT_EQ(*a.couplings, *b.couplings);
  EXPECT_EQ(a.epochs, b.epochs);
}
