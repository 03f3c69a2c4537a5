#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gan/characteristic.hpp"
#include "gan/random.hpp"

namespace gan {

struct GanSpec {
  std::size_t n_neurons = 0;
  std::size_t q_vars = 0;
  CharacteristicSpec characteristic = CharacteristicSpec::parity();
  bool interacting = false;

  void validate() const {
    if (n_neurons < 2) throw std::invalid_argument("n_neurons must be at least 2");
    gan::validate(characteristic, q_vars);
  }
};

/// N x Q internal bits, one 64-bit word per neuron (bit a = variable a).
class StateMatrix {
 public:
  StateMatrix() = default;
  StateMatrix(std::size_t n, std::size_t q) : q_(q), words_(n, 0) {
    if (n == 0 || q == 0 || q > kMaxQ) throw std::invalid_argument("bad state dimensions");
  }

  [[nodiscard]] std::size_t n() const { return words_.size(); }
  [[nodiscard]] std::size_t q() const { return q_; }
  [[nodiscard]] std::size_t size() const { return words_.size() * q_; }

  [[nodiscard]] bool bit(std::size_t i, std::size_t a) const { return (words_[i] >> a) & 1U; }
  void set(std::size_t i, std::size_t a, bool v) {
    const std::uint64_t m = std::uint64_t{1} << a;
    words_[i] = v ? (words_[i] | m) : (words_[i] & ~m);
  }
  void flip(std::size_t i, std::size_t a) { words_[i] ^= std::uint64_t{1} << a; }

  [[nodiscard]] std::uint64_t word(std::size_t i) const { return words_[i]; }
  void set_word(std::size_t i, std::uint64_t w) { words_[i] = w & low_mask(q_); }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

  [[nodiscard]] bool same_shape(const StateMatrix& o) const {
    return q_ == o.q_ && words_.size() == o.words_.size();
  }

  /// "0"/"1" per bit, neurons in order, s^1 first within a neuron.
  [[nodiscard]] std::string to_bitstring() const {
    std::string s;
    s.reserve(size());
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t a = 0; a < q_; ++a) s.push_back(bit(i, a) ? '1' : '0');
    return s;
  }

  friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

 private:
  std::size_t q_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Every bit flipped.
inline StateMatrix anti_state(const StateMatrix& s) {
  StateMatrix out = s;
  for (std::size_t i = 0; i < s.n(); ++i) out.set_word(i, ~s.word(i));
  return out;
}

struct PatternSet {
  std::vector<StateMatrix> patterns;
  double rho = 0.5;

  [[nodiscard]] std::size_t size() const { return patterns.size(); }
  [[nodiscard]] const StateMatrix& operator[](std::size_t mu) const { return patterns[mu]; }
};

/// W_ij^a stored as w[a][i][j].
class WeightTensor {
 public:
  WeightTensor() = default;
  WeightTensor(std::size_t q, std::size_t n) : q_(q), n_(n), w_(q * n * n, 0.0) {}

  [[nodiscard]] std::size_t q() const { return q_; }
  [[nodiscard]] std::size_t n() const { return n_; }

  double& operator()(std::size_t a, std::size_t i, std::size_t j) { return w_[(a * n_ + i) * n_ + j]; }
  double operator()(std::size_t a, std::size_t i, std::size_t j) const {
    return w_[(a * n_ + i) * n_ + j];
  }
  /// Incoming weights of variable a of neuron i (length N, entry i is the zero diagonal).
  [[nodiscard]] std::span<const double> row(std::size_t a, std::size_t i) const {
    return {w_.data() + (a * n_ + i) * n_, n_};
  }
  [[nodiscard]] std::span<double> row(std::size_t a, std::size_t i) {
    return {w_.data() + (a * n_ + i) * n_, n_};
  }
  [[nodiscard]] std::span<const double> data() const { return w_; }
  [[nodiscard]] std::span<double> data() { return w_; }

  void zero_diagonal() {
    for (std::size_t a = 0; a < q_; ++a)
      for (std::size_t i = 0; i < n_; ++i) (*this)(a, i, i) = 0.0;
  }
  [[nodiscard]] bool diagonal_is_zero() const {
    for (std::size_t a = 0; a < q_; ++a)
      for (std::size_t i = 0; i < n_; ++i)
        if ((*this)(a, i, i) != 0.0) return false;
    return true;
  }

  friend bool operator==(const WeightTensor&, const WeightTensor&) = default;

 private:
  std::size_t q_ = 0, n_ = 0;
  std::vector<double> w_;
};

/// L_i^{ab} stored as l[i][a][b].
class InternalCouplings {
 public:
  InternalCouplings() = default;
  InternalCouplings(std::size_t n, std::size_t q) : n_(n), q_(q), l_(n * q * q, 0.0) {}

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t q() const { return q_; }

  double& operator()(std::size_t i, std::size_t a, std::size_t b) { return l_[(i * q_ + a) * q_ + b]; }
  double operator()(std::size_t i, std::size_t a, std::size_t b) const {
    return l_[(i * q_ + a) * q_ + b];
  }
  [[nodiscard]] std::span<const double> row(std::size_t i, std::size_t a) const {
    return {l_.data() + (i * q_ + a) * q_, q_};
  }
  [[nodiscard]] std::span<double> row(std::size_t i, std::size_t a) {
    return {l_.data() + (i * q_ + a) * q_, q_};
  }
  [[nodiscard]] bool diagonal_is_zero() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t a = 0; a < q_; ++a)
        if ((*this)(i, a, a) != 0.0) return false;
    return true;
  }

  friend bool operator==(const InternalCouplings&, const InternalCouplings&) = default;

 private:
  std::size_t n_ = 0, q_ = 0;
  std::vector<double> l_;
};

/// Immutable network: spec, weights, optional intra-neuron couplings, thresholds.
class Network {
 public:
  [[nodiscard]] const GanSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t n() const { return spec_.n_neurons; }
  [[nodiscard]] std::size_t q() const { return spec_.q_vars; }
  [[nodiscard]] const WeightTensor& weights() const { return weights_; }
  [[nodiscard]] const std::optional<InternalCouplings>& couplings() const { return couplings_; }
  /// theta_i^a at index i*Q + a.
  [[nodiscard]] std::span<const double> thresholds() const { return thresholds_; }
  [[nodiscard]] double threshold(std::size_t i, std::size_t a) const {
    return thresholds_[i * spec_.q_vars + a];
  }

 private:
  friend Network build_network(GanSpec, WeightTensor, std::optional<InternalCouplings>,
                               std::vector<double>);
  GanSpec spec_;
  WeightTensor weights_;
  std::optional<InternalCouplings> couplings_;
  std::vector<double> thresholds_;
};

/// Validates dimensions and invariants; `thresholds` empty means all zero.
inline Network build_network(GanSpec spec, WeightTensor weights,
                             std::optional<InternalCouplings> couplings = std::nullopt,
                             std::vector<double> thresholds = {}) {
  spec.validate();
  const std::size_t n = spec.n_neurons, q = spec.q_vars;
  if (weights.n() != n || weights.q() != q)
    throw std::invalid_argument("weight tensor dimensions do not match the spec");
  if (!weights.diagonal_is_zero()) throw std::invalid_argument("weights must have a zero diagonal");
  if (couplings.has_value() != spec.interacting)
    throw std::invalid_argument(spec.interacting
                                    ? "interacting spec requires internal couplings"
                                    : "internal couplings supplied for a non-interacting spec");
  if (couplings) {
    if (couplings->n() != n || couplings->q() != q)
      throw std::invalid_argument("coupling dimensions do not match the spec");
    if (!couplings->diagonal_is_zero())
      throw std::invalid_argument("internal couplings must have a zero diagonal");
  }
  if (thresholds.empty()) thresholds.assign(n * q, 0.0);
  if (thresholds.size() != n * q) throw std::invalid_argument("thresholds must have N*Q entries");

  Network net;
  net.spec_ = std::move(spec);
  net.weights_ = std::move(weights);
  net.couplings_ = std::move(couplings);
  net.thresholds_ = std::move(thresholds);
  return net;
}

/// Each bit is 0 with probability rho, independently. Bits are drawn neuron by
/// neuron, variable by variable, pattern by pattern.
inline PatternSet random_pattern_set(std::size_t n, std::size_t q, std::size_t p, double rho,
                                     RunSeed seed) {
  check_rho(rho);
  if (p == 0) throw std::invalid_argument("need at least one pattern");
  Rng rng = seed.engine();
  PatternSet set;
  set.rho = rho;
  set.patterns.reserve(p);
  for (std::size_t mu = 0; mu < p; ++mu) {
    StateMatrix s(n, q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < q; ++a) s.set(i, a, uniform01(rng) >= rho);
    set.patterns.push_back(std::move(s));
  }
  return set;
}

inline std::size_t flip_count(double d0, std::size_t total) {
  return static_cast<std::size_t>(std::llround(d0 * static_cast<double>(total)));
}

/// Flips exactly round(d0 * N * Q) distinct bits chosen uniformly without replacement.
inline StateMatrix perturb_state(const StateMatrix& pattern, double d0, RunSeed seed) {
  if (!(d0 >= 0.0 && d0 <= 1.0)) throw std::invalid_argument("d0 must lie in [0, 1]");
  const std::size_t total = pattern.size();
  const std::size_t k = flip_count(d0, total);
  StateMatrix out = pattern;
  if (k == total) return anti_state(pattern);
  Rng rng = seed.engine();
  std::vector<std::uint32_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0U);
  // partial Fisher-Yates: the first k slots are a uniform k-subset
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t r = m + uniform_below(rng, total - m);
    std::swap(idx[m], idx[r]);
    out.flip(idx[m] / pattern.q(), idx[m] % pattern.q());
  }
  return out;
}

inline std::size_t differing_bits(const StateMatrix& a, const StateMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("state dimensions differ");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.n(); ++i)
    d += static_cast<std::size_t>(std::popcount(a.word(i) ^ b.word(i)));
  return d;
}

/// Fraction of the N*Q internal bits that differ.
inline double hamming_distance(const StateMatrix& a, const StateMatrix& b) {
  return static_cast<double>(differing_bits(a, b)) / static_cast<double>(a.size());
}

}  // namespace gan
