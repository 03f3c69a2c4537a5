#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gan/core.hpp"

namespace gan {

/// H(x) = 1 iff x >= 0.
constexpr bool heaviside(double x) noexcept { return x >= 0.0; }

inline double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

inline constexpr std::size_t kDefaultMaxIters = 1000;

/// f_j for every neuron of `state`.
inline void characteristic_values(const Network& net, const StateMatrix& state,
                                  std::vector<double>& out) {
  out.resize(state.n());
  for (std::size_t j = 0; j < state.n(); ++j)
    out[j] = eval_characteristic(net.spec().characteristic, state.word(j), net.q());
}

/// sum_{j != i} W_ij^a f_j + sum_{b != a} L_i^ab s_i^b - theta_i^a
inline double local_field(const Network& net, const StateMatrix& state, std::size_t i,
                          std::size_t a) {
  const auto& ch = net.spec().characteristic;
  const auto w = net.weights().row(a, i);
  double h = 0.0;
  for (std::size_t j = 0; j < state.n(); ++j) {
    if (j == i) continue;
    const double f = eval_characteristic(ch, state.word(j), net.q());
    if (f != 0.0) h += w[j] * f;
  }
  if (const auto& l = net.couplings()) {
    const auto lr = l->row(i, a);
    for (std::size_t b = 0; b < net.q(); ++b)
      if (b != a && state.bit(i, b)) h += lr[b];
  }
  return h - net.threshold(i, a);
}

/// Synchronous update engine with reusable scratch buffers.
///
/// Characteristic values are computed once per step; only neurons with
/// f_j != 0 enter the field sums, visited in ascending j. A stepper borrows the
/// network and may be used by one thread at a time; create one per thread.
class SyncStepper {
 public:
  explicit SyncStepper(const Network& net)
      : net_(&net), binary_(is_binary_valued(net.spec().characteristic)) {
    f_.reserve(net.n());
    active_.reserve(net.n());
    active_f_.reserve(net.n());
  }

  void step(const StateMatrix& in, StateMatrix& out) {
    const Network& net = *net_;
    const std::size_t n = net.n(), q = net.q();
    if (in.n() != n || in.q() != q) throw std::invalid_argument("state does not match network");
    if (!out.same_shape(in)) out = StateMatrix(n, q);

    characteristic_values(net, in, f_);
    active_.clear();
    active_f_.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (f_[j] != 0.0) {
        active_.push_back(static_cast<std::uint32_t>(j));
        active_f_.push_back(f_[j]);
      }
    }
    const auto& l = net.couplings();
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t word = 0;
      const std::uint64_t bits_i = in.word(i);
      for (std::size_t a = 0; a < q; ++a) {
        const double* w = net.weights().row(a, i).data();
        double h = 0.0;
        if (binary_) {
          for (const std::uint32_t j : active_)
            if (j != i) h += w[j];
        } else {
          for (std::size_t k = 0; k < active_.size(); ++k)
            if (active_[k] != i) h += w[active_[k]] * active_f_[k];
        }
        if (l) {
          const auto lr = l->row(i, a);
          for (std::size_t b = 0; b < q; ++b)
            if (b != a && ((bits_i >> b) & 1U)) h += lr[b];
        }
        h -= net.threshold(i, a);
        if (heaviside(h)) word |= std::uint64_t{1} << a;
      }
      out.set_word(i, word);
    }
  }

 private:
  const Network* net_;
  bool binary_;
  std::vector<double> f_;
  std::vector<std::uint32_t> active_;
  std::vector<double> active_f_;
};

/// One synchronous step: every f_j(t) from the input state, then every bit at once.
inline StateMatrix step_sync(const Network& net, const StateMatrix& state) {
  SyncStepper stepper(net);
  StateMatrix out(state.n(), state.q());
  stepper.step(state, out);
  return out;
}

struct AttractorResult {
  StateMatrix final_state;
  int cycle_length = 0;  // 1 fixed point, 2 two-cycle, 0 not converged
  std::size_t iterations = 0;
  double d_f = 0.0;      // distance of final_state to the reference
  double d_f_min = 0.0;  // min over the cycle states (equals d_f unless 2-cycle)
};

/// Iterates step_sync until a fixed point or a 2-cycle, or max_iters steps.
inline AttractorResult run_to_attractor(const Network& net, const StateMatrix& state,
                                        const StateMatrix& reference,
                                        std::size_t max_iters = kDefaultMaxIters) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
  if (!reference.same_shape(state)) throw std::invalid_argument("reference shape differs");
  SyncStepper stepper(net);
  StateMatrix prev = state, cur = state, next(state.n(), state.q());
  AttractorResult r;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    stepper.step(cur, next);
    if (next == cur) {
      r.cycle_length = 1;
      r.iterations = it;
      r.final_state = std::move(next);
      r.d_f = r.d_f_min = hamming_distance(r.final_state, reference);
      return r;
    }
    if (it >= 2 && next == prev) {
      r.cycle_length = 2;
      r.iterations = it;
      r.d_f = hamming_distance(next, reference);
      r.d_f_min = std::min(r.d_f, hamming_distance(cur, reference));
      r.final_state = std::move(next);
      return r;
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  r.cycle_length = 0;
  r.iterations = max_iters;
  r.final_state = std::move(cur);
  r.d_f = r.d_f_min = hamming_distance(r.final_state, reference);
  return r;
}

/// Fixed point under H(0) = 1: target 1 needs field >= 0, target 0 needs field < 0.
inline bool is_fixed_point(const Network& net, const StateMatrix& state) {
  return step_sync(net, state) == state;
}

struct MarginReport {
  std::size_t p = 0, n = 0, q = 0;
  std::vector<double> margins;     // [mu][i][a]
  std::vector<double> thresholds;  // [i][a]
  double min_margin = std::numeric_limits<double>::infinity();
  bool all_at_least_kappa = true;
  std::size_t zero_field_count = 0;  // margins that are exactly 0

  [[nodiscard]] double margin(std::size_t mu, std::size_t i, std::size_t a) const {
    return margins[(mu * n + i) * q + a];
  }
};

/// margin[mu][i][a] = (2 sigma_i^{a mu} - 1) * field_i^a(pattern mu).
inline MarginReport stability_margins(const Network& net, const PatternSet& patterns,
                                      double kappa) {
  MarginReport r;
  r.p = patterns.size();
  r.n = net.n();
  r.q = net.q();
  r.thresholds.assign(net.thresholds().begin(), net.thresholds().end());
  r.margins.resize(r.p * r.n * r.q);
  std::vector<double> f;
  const auto& l = net.couplings();
  for (std::size_t mu = 0; mu < r.p; ++mu) {
    const StateMatrix& s = patterns[mu];
    if (s.n() != r.n || s.q() != r.q) throw std::invalid_argument("pattern does not match network");
    characteristic_values(net, s, f);
    for (std::size_t i = 0; i < r.n; ++i) {
      for (std::size_t a = 0; a < r.q; ++a) {
        const auto w = net.weights().row(a, i);
        double h = 0.0;
        for (std::size_t j = 0; j < r.n; ++j)
          if (j != i && f[j] != 0.0) h += w[j] * f[j];
        if (l) {
          const auto lr = l->row(i, a);
          for (std::size_t b = 0; b < r.q; ++b)
            if (b != a && s.bit(i, b)) h += lr[b];
        }
        h -= net.threshold(i, a);
        const double m = s.bit(i, a) ? h : -h;
        r.margins[(mu * r.n + i) * r.q + a] = m;
        r.min_margin = std::min(r.min_margin, m);
        if (m < kappa) r.all_at_least_kappa = false;
        if (m == 0.0) ++r.zero_field_count;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Continuous mode: real internal variables in [0,1], logistic activation,
// linear characteristic. Used for the feed-forward correspondence.

class ContinuousState {
 public:
  ContinuousState() = default;
  ContinuousState(std::size_t n, std::size_t q) : n_(n), q_(q), v_(n * q, 0.0) {}

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t q() const { return q_; }
  double& operator()(std::size_t i, std::size_t a) { return v_[i * q_ + a]; }
  double operator()(std::size_t i, std::size_t a) const { return v_[i * q_ + a]; }
  [[nodiscard]] std::span<const double> neuron(std::size_t i) const {
    return {v_.data() + i * q_, q_};
  }

 private:
  std::size_t n_ = 0, q_ = 0;
  std::vector<double> v_;
};

inline void require_continuous_network(const Network& net) {
  if (net.spec().characteristic.kind != CharKind::linear)
    throw std::invalid_argument("continuous mode requires a linear characteristic");
}

/// f_j = sum_a J^a s_j^a for every neuron.
inline std::vector<double> characteristic_values(const Network& net, const ContinuousState& s) {
  require_continuous_network(net);
  std::vector<double> f(s.n());
  for (std::size_t j = 0; j < s.n(); ++j)
    f[j] = eval_characteristic(net.spec().characteristic, s.neuron(j));
  return f;
}

/// s_i^a(t+1) = sigmoid(sum_{j != i} W_ij^a f_j(t) + sum_{b != a} L_i^ab s_i^b(t) - theta_i^a)
inline ContinuousState step_continuous(const Network& net, const ContinuousState& s) {
  require_continuous_network(net);
  if (s.n() != net.n() || s.q() != net.q()) throw std::invalid_argument("state does not match network");
  const auto f = characteristic_values(net, s);
  const auto& l = net.couplings();
  ContinuousState out(s.n(), s.q());
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t a = 0; a < s.q(); ++a) {
      const auto w = net.weights().row(a, i);
      double h = 0.0;
      for (std::size_t j = 0; j < s.n(); ++j)
        if (j != i) h += w[j] * f[j];
      if (l) {
        const auto lr = l->row(i, a);
        for (std::size_t b = 0; b < s.q(); ++b)
          if (b != a) h += lr[b] * s(i, b);
      }
      out(i, a) = sigmoid(h - net.threshold(i, a));
    }
  }
  return out;
}

}  // namespace gan
