#pragma once

// Four-state Hopfield baseline: neuron values {-3,-1,1,3}, thresholds {-2,0,2},
// synchronous updates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gan/core.hpp"
#include "gan/random.hpp"

namespace gan {

using MultiState = std::vector<std::int8_t>;

inline constexpr std::array<std::int8_t, 4> kMultiStateAlphabet{-3, -1, 1, 3};
inline constexpr std::array<double, 3> kMultiStateThresholds{-2.0, 0.0, 2.0};
/// Mean of xi^2 over the uniform alphabet.
inline constexpr double kMultiStateMeanSquare = 5.0;

/// signal_matched: W = sum xi xi / (N <xi^2>), so a stored pattern's own field is ~xi.
/// literal: W = sum xi xi / N.
enum class MultiStateNorm { signal_matched, literal };

class MultiStateNetwork {
 public:
  MultiStateNetwork() = default;
  explicit MultiStateNetwork(std::size_t n) : n_(n), w_(n * n, 0.0) {}

  [[nodiscard]] std::size_t n() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return w_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

inline bool in_alphabet(std::int8_t v) {
  return std::find(kMultiStateAlphabet.begin(), kMultiStateAlphabet.end(), v) !=
         kMultiStateAlphabet.end();
}

/// Boundary values belong to the upper bin.
constexpr std::int8_t quantize(double h) noexcept {
  if (h < -2.0) return -3;
  if (h < 0.0) return -1;
  if (h < 2.0) return 1;
  return 3;
}

inline MultiStateNetwork multistate_hebb(const std::vector<MultiState>& patterns,
                                         MultiStateNorm norm = MultiStateNorm::signal_matched) {
  if (patterns.empty()) throw std::invalid_argument("empty pattern set");
  const std::size_t n = patterns.front().size();
  if (n < 2) throw std::invalid_argument("need at least two neurons");
  MultiStateNetwork net(n);
  for (const auto& xi : patterns) {
    if (xi.size() != n) throw std::invalid_argument("patterns differ in length");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) net(i, j) += static_cast<double>(xi[i] * xi[j]);
  }
  const double scale = static_cast<double>(n) *
                       (norm == MultiStateNorm::signal_matched ? kMultiStateMeanSquare : 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) net(i, j) /= scale;
    net(i, i) = 0.0;
  }
  return net;
}

inline MultiState multistate_step(const MultiStateNetwork& net, const MultiState& s) {
  if (s.size() != net.n()) throw std::invalid_argument("state does not match network");
  MultiState out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double h = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) h += net(i, j) * s[j];
    out[i] = quantize(h);
  }
  return out;
}

/// Fraction of neurons whose value differs.
inline double multistate_distance(const MultiState& a, const MultiState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state lengths differ");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return static_cast<double>(d) / static_cast<double>(a.size());
}

struct MultiStateResult {
  MultiState final_state;
  int cycle_length = 0;
  std::size_t iterations = 0;
  double d_f = 0.0;
  double d_f_min = 0.0;
};

inline MultiStateResult multistate_run(const MultiStateNetwork& net, const MultiState& state,
                                       const MultiState& reference, std::size_t max_iters) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
  for (auto v : state)
    if (!in_alphabet(v)) throw std::invalid_argument("state value outside {-3,-1,1,3}");
  MultiState prev = state, cur = state;
  MultiStateResult r;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    MultiState next = multistate_step(net, cur);
    if (next == cur) {
      r.cycle_length = 1;
      r.iterations = it;
      r.d_f = r.d_f_min = multistate_distance(next, reference);
      r.final_state = std::move(next);
      return r;
    }
    if (it >= 2 && next == prev) {
      r.cycle_length = 2;
      r.iterations = it;
      r.d_f = multistate_distance(next, reference);
      r.d_f_min = std::min(r.d_f, multistate_distance(cur, reference));
      r.final_state = std::move(next);
      return r;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  r.iterations = max_iters;
  r.d_f = r.d_f_min = multistate_distance(cur, reference);
  r.final_state = std::move(cur);
  return r;
}

/// P patterns with values uniform over the alphabet.
inline std::vector<MultiState> random_multistate_patterns(std::size_t n, std::size_t p,
                                                          RunSeed seed) {
  if (p == 0) throw std::invalid_argument("need at least one pattern");
  Rng rng = seed.engine();
  std::vector<MultiState> out(p, MultiState(n));
  for (auto& xi : out)
    for (auto& v : xi) v = kMultiStateAlphabet[uniform_below(rng, 4)];
  return out;
}

/// Exactly round(d0 * N) neurons, chosen without replacement, each set to a
/// uniformly chosen different alphabet value.
inline MultiState perturb_multistate(const MultiState& pattern, double d0, RunSeed seed) {
  if (!(d0 >= 0.0 && d0 <= 1.0)) throw std::invalid_argument("d0 must lie in [0, 1]");
  for (auto v : pattern)
    if (!in_alphabet(v)) throw std::invalid_argument("pattern value outside {-3,-1,1,3}");
  const std::size_t n = pattern.size();
  const std::size_t k = flip_count(d0, n);
  Rng rng = seed.engine();
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0U);
  MultiState out = pattern;
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t r = m + uniform_below(rng, n - m);
    std::swap(idx[m], idx[r]);
    std::array<std::int8_t, 3> others{};
    std::size_t c = 0;
    for (auto v : kMultiStateAlphabet)
      if (v != pattern[idx[m]]) others[c++] = v;
    out[idx[m]] = others[uniform_below(rng, 3)];
  }
  return out;
}

}  // namespace gan
