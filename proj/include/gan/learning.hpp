#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gan/core.hpp"
#include "gan/parallel.hpp"

namespace gan {

enum class LearnMode { literal_hebb, centered_hebb, perceptron };

struct LearnConfig {
  LearnMode mode = LearnMode::centered_hebb;
  double kappa = 0.0;  // perceptron margin demand
  std::size_t max_epochs = 1000;
  std::optional<double> f_mean;  // centering value; empirical mean when absent
  std::size_t threads = 1;       // perceptron rows trained concurrently

  void validate() const {
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
    if (max_epochs == 0) throw std::invalid_argument("max_epochs must be at least 1");
  }
};

namespace detail {
/// phi[mu][j]: characteristic value of neuron j in pattern mu.
inline std::vector<std::vector<double>> pattern_characteristics(const PatternSet& patterns,
                                                                const GanSpec& spec) {
  std::vector<std::vector<double>> phi(patterns.size(), std::vector<double>(spec.n_neurons));
  for (std::size_t mu = 0; mu < patterns.size(); ++mu) {
    const StateMatrix& s = patterns[mu];
    if (s.n() != spec.n_neurons || s.q() != spec.q_vars)
      throw std::invalid_argument("pattern does not match the spec");
    for (std::size_t j = 0; j < spec.n_neurons; ++j)
      phi[mu][j] = eval_characteristic(spec.characteristic, s.word(j), spec.q_vars);
  }
  return phi;
}

inline double sign01(bool bit) { return bit ? 1.0 : -1.0; }

/// Dot product with four interleaved partial sums (fixed order, vectorizes).
inline double dot(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < len; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}
}  // namespace detail

/// literal: W_ij^a = sum_mu s_i^{a mu} f_j^mu
/// centered: W_ij^a = sum_mu (2 s_i^{a mu} - 1)(f_j^mu - fbar)
inline WeightTensor hebb_weights(const PatternSet& patterns, const GanSpec& spec,
                                 const LearnConfig& config) {
  spec.validate();
  if (patterns.size() == 0) throw std::invalid_argument("empty pattern set");
  if (config.mode == LearnMode::perceptron)
    throw std::invalid_argument("hebb_weights needs a Hebbian mode");
  const std::size_t n = spec.n_neurons, q = spec.q_vars, p = patterns.size();
  const auto phi = detail::pattern_characteristics(patterns, spec);
  const bool centered = config.mode == LearnMode::centered_hebb;

  double fbar = 0.0;
  if (centered) {
    if (config.f_mean) {
      fbar = *config.f_mean;
    } else {
      for (const auto& row : phi)
        for (double v : row) fbar += v;
      fbar /= static_cast<double>(n * p);
    }
  }

  WeightTensor w(q, n);
  std::vector<double> pre(n);
  for (std::size_t mu = 0; mu < p; ++mu) {
    for (std::size_t j = 0; j < n; ++j) pre[j] = phi[mu][j] - fbar;
    const StateMatrix& s = patterns[mu];
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        const bool bit = s.bit(i, a);
        if (!centered && !bit) continue;
        const double post = centered ? detail::sign01(bit) : 1.0;
        auto row = w.row(a, i);
        for (std::size_t j = 0; j < n; ++j) row[j] += post * pre[j];
      }
    }
  }
  w.zero_diagonal();
  return w;
}

/// L_i^ab = sum_mu (2 s_i^{a mu} - 1)(2 s_i^{b mu} - 1), b != a.
inline InternalCouplings hebb_internal(const PatternSet& patterns, const GanSpec& spec) {
  spec.validate();
  if (!spec.interacting) throw std::invalid_argument("hebb_internal needs an interacting spec");
  if (patterns.size() == 0) throw std::invalid_argument("empty pattern set");
  const std::size_t n = spec.n_neurons, q = spec.q_vars;
  InternalCouplings l(n, q);
  for (const StateMatrix& s : patterns.patterns) {
    if (s.n() != n || s.q() != q) throw std::invalid_argument("pattern does not match the spec");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
          if (b != a) l(i, a, b) += detail::sign01(s.bit(i, a)) * detail::sign01(s.bit(i, b));
  }
  return l;
}

struct TrainResult {
  WeightTensor weights;
  std::optional<InternalCouplings> couplings;
  bool converged = false;
  std::size_t epochs = 0;  // largest epoch count over all rows
  std::size_t rows_converged = 0;
};

/// Margin perceptron, one independent problem per (i, a) row.
///
/// A pattern violates row (i, a) when (2 sigma - 1) * field <= kappa * |row| / sqrt(N),
/// where row = (W_i^a, L_i^a). Violations add (2 sigma - 1) * input to the row.
/// Patterns are visited in index order; a row stops after a clean epoch.
/// Converged rows are rescaled by one factor so that |W_i^a|^2 = N.
inline TrainResult perceptron_train(const PatternSet& patterns, const GanSpec& spec,
                                    const LearnConfig& config) {
  spec.validate();
  config.validate();
  if (patterns.size() == 0) throw std::invalid_argument("empty pattern set");
  const std::size_t n = spec.n_neurons, q = spec.q_vars, p = patterns.size();
  const auto phi = detail::pattern_characteristics(patterns, spec);
  const bool inter = spec.interacting;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  // input width per row: N weights (diagonal kept at zero) plus Q couplings
  const std::size_t width = n + (inter ? q : 0);

  TrainResult result;
  result.weights = WeightTensor(q, n);
  if (inter) result.couplings = InternalCouplings(n, q);

  struct RowOutcome {
    bool converged = false;
    std::size_t epochs = 0;
  };
  std::vector<RowOutcome> outcomes(n * q);

  parallel_for(n * q, config.threads, [&](std::size_t row_index) {
    const std::size_t i = row_index / q, a = row_index % q;
    // inputs x[mu][k]; entry i (self) and entry n + a (own variable) stay zero
    std::vector<double> x(p * width, 0.0), target(p);
    for (std::size_t mu = 0; mu < p; ++mu) {
      double* xm = x.data() + mu * width;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) xm[j] = phi[mu][j];
      if (inter)
        for (std::size_t b = 0; b < q; ++b)
          if (b != a) xm[n + b] = patterns[mu].bit(i, b) ? 1.0 : 0.0;
      target[mu] = detail::sign01(patterns[mu].bit(i, a));
    }
    const double theta = 0.0;
    std::vector<double> w(width, 0.0);
    double norm2 = 0.0;
    RowOutcome out;
    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
      bool clean = true;
      for (std::size_t mu = 0; mu < p; ++mu) {
        const double* xm = x.data() + mu * width;
        const double h = detail::dot(w.data(), xm, width);
        const double margin = target[mu] * (h - theta);
        if (margin <= config.kappa * std::sqrt(norm2) * inv_sqrt_n) {
          clean = false;
          const double t = target[mu];
          for (std::size_t k = 0; k < width; ++k) w[k] += t * xm[k];
          if (config.kappa > 0.0) norm2 = detail::dot(w.data(), w.data(), width);
        }
      }
      out.epochs = epoch;
      if (clean) {
        out.converged = true;
        break;
      }
    }
    if (out.converged) {
      double wn2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) wn2 += w[j] * w[j];
      if (wn2 > 0.0) {
        const double scale = std::sqrt(static_cast<double>(n) / wn2);
        for (double& v : w) v *= scale;
      }
    }
    // rows are disjoint slices of the outputs
    auto wr = result.weights.row(a, i);
    for (std::size_t j = 0; j < n; ++j) wr[j] = w[j];
    if (inter) {
      auto lr = result.couplings->row(i, a);
      for (std::size_t b = 0; b < q; ++b) lr[b] = w[n + b];
    }
    outcomes[row_index] = out;
  });

  result.converged = true;
  for (const auto& o : outcomes) {
    result.epochs = std::max(result.epochs, o.epochs);
    if (o.converged) ++result.rows_converged;
    else result.converged = false;
  }
  return result;
}

}  // namespace gan
