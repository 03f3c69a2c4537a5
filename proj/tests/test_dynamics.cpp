#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <thread>
#include <vector>

#include "gan/dynamics.hpp"
#include "gan/learning.hpp"
#include "gan/reference.hpp"

using namespace gan;

namespace {

StateMatrix state_of(std::size_t q, std::initializer_list<std::uint64_t> words) {
  StateMatrix s(words.size(), q);
  std::size_t i = 0;
  for (auto w : words) s.set_word(i++, w);
  return s;
}

StateMatrix all_ones(std::size_t n, std::size_t q) {
  StateMatrix s(n, q);
  for (std::size_t i = 0; i < n; ++i) s.set_word(i, low_mask(q));
  return s;
}

// three neurons, one variable each, f = the bit itself
Network hand_network() {
  WeightTensor w(1, 3);
  w(0, 0, 1) = 2.0;
  w(0, 0, 2) = -1.0;
  w(0, 1, 0) = -3.0;
  w(0, 1, 2) = 4.0;
  w(0, 2, 0) = 0.5;
  w(0, 2, 1) = 0.25;
  return build_network(GanSpec{3, 1, CharacteristicSpec::parity(), false}, w, std::nullopt,
                       {0.0, 0.0, 1.0});
}

// two neurons, two variables, linear f, hand-set intra-neuron couplings
Network hand_interacting() {
  WeightTensor w(2, 2);
  w(0, 0, 1) = 1.5;
  w(1, 0, 1) = -2.0;
  w(0, 1, 0) = 0.5;
  w(1, 1, 0) = 1.0;
  InternalCouplings l(2, 2);
  l(0, 0, 1) = -4.0;
  l(0, 1, 0) = 0.75;
  l(1, 0, 1) = 3.0;
  l(1, 1, 0) = -0.5;
  return build_network(GanSpec{2, 2, CharacteristicSpec::linear({1.0, 2.0}), true}, w, l,
                       {0.25, 0.0, 0.0, -1.0});
}

CharacteristicSpec random_spec(Rng& rng, std::size_t q) {
  switch (uniform_below(rng, 6)) {
    case 0: return CharacteristicSpec::parity();
    case 1: {
      std::vector<double> j(q);
      for (auto& v : j) v = static_cast<double>(uniform_below(rng, 5)) - 2.0;
      return CharacteristicSpec::linear(j);
    }
    case 2: return CharacteristicSpec::correlation(uniform_below(rng, 1U << q));
    case 3: return CharacteristicSpec::grandmother(uniform_below(rng, 1U << q));
    case 4: {
      std::vector<double> t(std::size_t{1} << q);
      for (auto& v : t) v = static_cast<double>(uniform_below(rng, 3)) * 0.5;
      return CharacteristicSpec::boolean_table(t);
    }
    default: return CharacteristicSpec::io_code();
  }
}

// Small-integer weights so that exact zero fields (the H(0) boundary) occur often.
Network random_network(Rng& rng, std::size_t n, std::size_t q, bool interacting, bool integer) {
  auto draw = [&] {
    return integer ? static_cast<double>(uniform_below(rng, 5)) - 2.0 : uniform_real(rng, -1.0, 1.0);
  };
  WeightTensor w(q, n);
  for (auto& v : w.data()) v = draw();
  w.zero_diagonal();
  std::optional<InternalCouplings> l;
  if (interacting) {
    l.emplace(n, q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
          if (a != b) (*l)(i, a, b) = draw();
  }
  std::vector<double> theta(n * q);
  for (auto& t : theta) t = uniform_below(rng, 3) == 0 ? draw() : 0.0;
  return build_network(GanSpec{n, q, random_spec(rng, q), interacting}, w, l, theta);
}

StateMatrix random_state(Rng& rng, std::size_t n, std::size_t q) {
  StateMatrix s(n, q);
  for (std::size_t i = 0; i < n; ++i) s.set_word(i, rng());
  return s;
}

}  // namespace

TEST(LocalField, ZeroWeightsGiveZero) {
  const Network net = build_network(GanSpec{5, 3, CharacteristicSpec::parity(), false}, WeightTensor(3, 5));
  Rng rng = RunSeed{1}.engine();
  const auto s = random_state(rng, 5, 3);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(local_field(net, s, i, a), 0.0);
}

TEST(LocalField, HandComputed) {
  const Network net = hand_network();
  const auto s = state_of(1, {1, 1, 0});
  EXPECT_DOUBLE_EQ(local_field(net, s, 0, 0), 2.0);           // 2*1 + (-1)*0
  EXPECT_DOUBLE_EQ(local_field(net, s, 1, 0), -3.0);          // -3*1 + 4*0
  EXPECT_DOUBLE_EQ(local_field(net, s, 2, 0), 0.75 - 1.0);    // 0.5 + 0.25 - theta
  EXPECT_EQ(step_sync(net, s), state_of(1, {1, 0, 0}));
}

TEST(LocalField, InteractingAddsCouplings) {
  const Network net = hand_interacting();
  // neuron 0 bits (s1, s2) = (1, 1), neuron 1 bits = (0, 1); f = s1 + 2 s2
  const auto s = state_of(2, {0b11, 0b10});
  // f_1 = 2, f_0 = 3
  EXPECT_DOUBLE_EQ(local_field(net, s, 0, 0), 1.5 * 2 - 4.0 * 1 - 0.25);
  EXPECT_DOUBLE_EQ(local_field(net, s, 0, 1), -2.0 * 2 + 0.75 * 1);
  EXPECT_DOUBLE_EQ(local_field(net, s, 1, 0), 0.5 * 3 + 3.0 * 1);
  EXPECT_DOUBLE_EQ(local_field(net, s, 1, 1), 1.0 * 3 - 0.5 * 0 + 1.0);
  EXPECT_EQ(step_sync(net, s), state_of(2, {0b00, 0b11}));
}

TEST(Step, ZeroFieldsSetEveryBit) {
  const Network net = build_network(GanSpec{6, 3, CharacteristicSpec::parity(), false}, WeightTensor(3, 6));
  EXPECT_EQ(step_sync(net, StateMatrix(6, 3)), all_ones(6, 3));
}

TEST(Step, RejectsShapeMismatch) {
  const Network net = hand_network();
  EXPECT_THROW(step_sync(net, StateMatrix(4, 1)), std::invalid_argument);
  EXPECT_THROW(step_sync(net, StateMatrix(3, 2)), std::invalid_argument);
}

TEST(Step, SinglePatternHebbIsFixedPoint) {
  const GanSpec spec{10, 2, CharacteristicSpec::parity(), false};
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto set = random_pattern_set(10, 2, 1, 0.5, RunSeed{seed});
    std::size_t active = 0;
    for (std::size_t j = 0; j < 10; ++j) active += std::popcount(set[0].word(j)) & 1;
    if (active < 2) continue;  // every field would be zero
    const Network net = build_network(spec, hebb_weights(set, spec, LearnConfig{}));
    EXPECT_EQ(step_sync(net, set[0]), set[0]) << seed;
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Step, EvenParityAntiStateMapsToPattern) {
  const GanSpec spec{10, 2, CharacteristicSpec::parity(), false};
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto set = random_pattern_set(10, 2, 1, 0.5, RunSeed{seed});
    const Network net = build_network(spec, hebb_weights(set, spec, LearnConfig{}));
    if (!is_fixed_point(net, set[0])) continue;
    EXPECT_EQ(step_sync(net, anti_state(set[0])), set[0]);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Step, PackedMatchesNaiveOnRandomInstances) {
  Rng rng = RunSeed{2024}.engine();
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 31);
    const std::size_t q = 1 + uniform_below(rng, 4);
    const bool interacting = q > 1 && uniform_below(rng, 2) == 0;
    const Network net = random_network(rng, n, q, interacting, uniform_below(rng, 2) == 0);
    const StateMatrix start = random_state(rng, n, q);
    const auto ref = naive::trajectory(net, naive::to_bits(start), 12);
    StateMatrix cur = start;
    for (std::size_t k = 1; k < ref.size(); ++k) {
      cur = step_sync(net, cur);
      ASSERT_EQ(naive::to_bits(cur), ref[k]) << "instance " << t << " step " << k;
    }
  }
}

TEST(Step, PositiveRescalingKeepsTrajectories) {
  Rng rng = RunSeed{5}.engine();
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 20), q = 1 + uniform_below(rng, 3);
    const Network net = random_network(rng, n, q, q > 1, false);
    for (double lambda : {0.25, 3.7, 1000.0}) {
      WeightTensor w = net.weights();
      for (auto& v : w.data()) v *= lambda;
      std::optional<InternalCouplings> l = net.couplings();
      if (l)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t a = 0; a < q; ++a)
            for (auto& v : l->row(i, a)) v *= lambda;
      std::vector<double> theta(net.thresholds().begin(), net.thresholds().end());
      for (auto& v : theta) v *= lambda;
      const Network scaled = build_network(net.spec(), w, l, theta);
      StateMatrix a = random_state(rng, n, q), b = a;
      for (int k = 0; k < 8; ++k) {
        a = step_sync(net, a);
        b = step_sync(scaled, b);
        ASSERT_EQ(a, b);
      }
    }
  }
}

TEST(Step, EvenParityTrajectoriesMergeAfterOneStep) {
  Rng rng = RunSeed{8}.engine();
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 30), q = 2 * (1 + uniform_below(rng, 2));
    WeightTensor w(q, n);
    for (auto& v : w.data()) v = uniform_real(rng, -1, 1);
    w.zero_diagonal();
    const Network net = build_network(GanSpec{n, q, CharacteristicSpec::parity(), false}, w);
    const StateMatrix s = random_state(rng, n, q);
    EXPECT_EQ(step_sync(net, s), step_sync(net, anti_state(s)));
  }
}

TEST(Attractor, StartAtFixedPoint) {
  const GanSpec spec{50, 2, CharacteristicSpec::parity(), false};
  const auto set = random_pattern_set(50, 2, 1, 0.5, RunSeed{11});
  const Network net = build_network(spec, hebb_weights(set, spec, LearnConfig{}));
  const auto r = run_to_attractor(net, set[0], set[0], 100);
  EXPECT_EQ(r.cycle_length, 1);
  EXPECT_LE(r.iterations, 1U);
  EXPECT_EQ(r.d_f, 0.0);
  EXPECT_EQ(r.final_state, set[0]);
}

TEST(Attractor, ZeroWeightsReachAllOnes) {
  const Network net = build_network(GanSpec{8, 2, CharacteristicSpec::parity(), false}, WeightTensor(2, 8));
  Rng rng = RunSeed{3}.engine();
  const auto start = random_state(rng, 8, 2);
  EXPECT_EQ(step_sync(net, start), all_ones(8, 2));
  const auto r = run_to_attractor(net, start, all_ones(8, 2), 10);
  EXPECT_EQ(r.cycle_length, 1);
  EXPECT_EQ(r.final_state, all_ones(8, 2));
  EXPECT_EQ(r.d_f, 0.0);
}

TEST(Attractor, DetectsTwoCycle) {
  WeightTensor w(1, 2);
  w(0, 0, 1) = -1.0;
  w(0, 1, 0) = -1.0;
  const Network net = build_network(GanSpec{2, 1, CharacteristicSpec::parity(), false}, w);
  const auto ones = state_of(1, {1, 1});
  const auto r = run_to_attractor(net, ones, ones, 50);
  EXPECT_EQ(r.cycle_length, 2);
  EXPECT_EQ(r.final_state, ones);
  EXPECT_EQ(step_sync(net, step_sync(net, r.final_state)), r.final_state);
  EXPECT_EQ(r.d_f, 0.0);
  EXPECT_EQ(r.d_f_min, 0.0);
}

TEST(Attractor, LongerCycleIsNotConverged) {
  // each neuron copies its predecessor: a rotation of period 3
  WeightTensor w(1, 3);
  w(0, 0, 2) = 1.0;
  w(0, 1, 0) = 1.0;
  w(0, 2, 1) = 1.0;
  const Network net = build_network(GanSpec{3, 1, CharacteristicSpec::parity(), false}, w, std::nullopt,
                                    {0.5, 0.5, 0.5});
  const auto s = state_of(1, {1, 0, 0});
  EXPECT_EQ(step_sync(net, s), state_of(1, {0, 1, 0}));
  const auto r = run_to_attractor(net, s, s, 7);
  EXPECT_EQ(r.cycle_length, 0);
  EXPECT_EQ(r.iterations, 7U);
  EXPECT_EQ(r.final_state, state_of(1, {0, 1, 0}));
  EXPECT_THROW(run_to_attractor(net, s, s, 0), std::invalid_argument);
}

TEST(Attractor, ReportedCycleReproduces) {
  Rng rng = RunSeed{12}.engine();
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 20), q = 1 + uniform_below(rng, 3);
    const Network net = random_network(rng, n, q, false, true);
    const auto s = random_state(rng, n, q);
    const auto r = run_to_attractor(net, s, s, 200);
    StateMatrix x = r.final_state;
    for (int k = 0; k < r.cycle_length; ++k) x = step_sync(net, x);
    if (r.cycle_length > 0) {
      EXPECT_EQ(x, r.final_state);
    }
    EXPECT_DOUBLE_EQ(r.d_f, hamming_distance(r.final_state, s));
  }
}

TEST(Margins, ZeroWeightsGiveZeroMargins) {
  const Network net = build_network(GanSpec{6, 2, CharacteristicSpec::parity(), false}, WeightTensor(2, 6));
  const auto set = random_pattern_set(6, 2, 3, 0.5, RunSeed{1});
  const auto m = stability_margins(net, set, 0.0);
  for (double v : m.margins) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(m.zero_field_count, m.margins.size());
  EXPECT_EQ(m.thresholds.size(), 12U);
}

TEST(Margins, SinglePatternHebbAllPositive) {
  const GanSpec spec{50, 2, CharacteristicSpec::parity(), false};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = random_pattern_set(50, 2, 1, 0.5, RunSeed{seed});
    const Network net = build_network(spec, hebb_weights(set, spec, LearnConfig{}));
    const auto m = stability_margins(net, set, 0.0);
    EXPECT_GT(m.min_margin, 0.0);
    EXPECT_TRUE(m.all_at_least_kappa);
  }
}

TEST(Margins, MatchHandNetwork) {
  const Network net = hand_interacting();
  PatternSet set;
  set.rho = 0.5;
  set.patterns = {state_of(2, {0b11, 0b10})};
  const auto m = stability_margins(net, set, 0.0);
  EXPECT_DOUBLE_EQ(m.margin(0, 0, 0), 1.5 * 2 - 4.0 - 0.25);
  EXPECT_DOUBLE_EQ(m.margin(0, 0, 1), -2.0 * 2 + 0.75);
  EXPECT_DOUBLE_EQ(m.margin(0, 1, 0), -(0.5 * 3 + 3.0));
  EXPECT_DOUBLE_EQ(m.margin(0, 1, 1), 1.0 * 3 + 1.0);
  EXPECT_DOUBLE_EQ(m.min_margin, -4.5);
  EXPECT_FALSE(m.all_at_least_kappa);
}

TEST(Margins, FixedPointCharacterization) {
  // fixed point <=> every bit-1 margin >= 0 and every bit-0 field < 0
  Rng rng = RunSeed{21}.engine();
  int fixed = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 6), q = 1 + uniform_below(rng, 2);
    const Network net = random_network(rng, n, q, q > 1 && uniform_below(rng, 2), true);
    PatternSet set;
    set.rho = 0.5;
    set.patterns = {random_state(rng, n, q)};
    const auto m = stability_margins(net, set, 0.0);
    bool stable = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < q; ++a) {
        const double v = m.margin(0, i, a);
        stable = stable && (set[0].bit(i, a) ? v >= 0.0 : v > 0.0);
      }
    EXPECT_EQ(is_fixed_point(net, set[0]), stable);
    fixed += stable;
    if (m.min_margin > 0.0) EXPECT_TRUE(is_fixed_point(net, set[0]));
  }
  EXPECT_GT(fixed, 20);
}

TEST(Continuous, HandStep) {
  WeightTensor w(1, 2);
  w(0, 0, 1) = 2.0;
  w(0, 1, 0) = -1.0;
  const Network net = build_network(GanSpec{2, 1, CharacteristicSpec::linear({0.5}), false}, w,
                                    std::nullopt, {0.0, 0.25});
  ContinuousState s(2, 1);
  s(0, 0) = 0.2;
  s(1, 0) = 0.8;
  const auto out = step_continuous(net, s);
  EXPECT_DOUBLE_EQ(out(0, 0), 1.0 / (1.0 + std::exp(-(2.0 * 0.4))));
  EXPECT_DOUBLE_EQ(out(1, 0), 1.0 / (1.0 + std::exp(-(-1.0 * 0.1 - 0.25))));
}

TEST(Continuous, RequiresLinear) {
  const Network net = build_network(GanSpec{2, 1, CharacteristicSpec::parity(), false}, WeightTensor(1, 2));
  EXPECT_THROW(step_continuous(net, ContinuousState(2, 1)), std::invalid_argument);
}

TEST(Concurrency, SharedNetworkAcrossThreads) {
  Rng rng = RunSeed{31}.engine();
  const Network net = random_network(rng, 30, 3, true, false);
  std::vector<StateMatrix> starts;
  for (int k = 0; k < 8; ++k) starts.push_back(random_state(rng, 30, 3));
  std::vector<AttractorResult> serial, threaded(starts.size());
  for (const auto& s : starts) serial.push_back(run_to_attractor(net, s, s, 100));
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < starts.size(); ++k)
    pool.emplace_back([&, k] { threaded[k] = run_to_attractor(net, starts[k], starts[k], 100); });
  pool.clear();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    EXPECT_EQ(serial[k].final_state, threaded[k].final_state);
    EXPECT_EQ(serial[k].iterations, threaded[k].iterations);
  }
}
