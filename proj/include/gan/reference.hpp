#pragma once

// Direct, unoptimized translation of the recall equations over plain 0/1
// arrays. Shares no code with the packed engine in dynamics.hpp beyond the
// network container; it exists to cross-check that engine.

#include <cstdint>
#include <vector>

#include "gan/core.hpp"

namespace gan::naive {

using Bits = std::vector<std::vector<int>>;  // [i][a] in {0,1}

inline Bits to_bits(const StateMatrix& s) {
  Bits b(s.n(), std::vector<int>(s.q()));
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t a = 0; a < s.q(); ++a) b[i][a] = s.bit(i, a) ? 1 : 0;
  return b;
}

inline StateMatrix from_bits(const Bits& b) {
  StateMatrix s(b.size(), b.front().size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t a = 0; a < b[i].size(); ++a) s.set(i, a, b[i][a] != 0);
  return s;
}

inline double characteristic(const CharacteristicSpec& spec, const std::vector<int>& s) {
  const std::size_t q = s.size();
  switch (spec.kind) {
    case CharKind::parity: {
      int x = 0;
      for (int v : s) x ^= v;
      return x;
    }
    case CharKind::linear: {
      double f = 0.0;
      for (std::size_t a = 0; a < q; ++a) f += spec.coefficients[a] * s[a];
      return f;
    }
    case CharKind::correlation: {
      double f = 0.0;
      for (std::size_t a = 0; a < q; ++a) f += static_cast<double>(((spec.templ >> a) & 1U) * s[a]);
      return f / static_cast<double>(q);
    }
    case CharKind::grandmother:
      for (std::size_t a = 0; a < q; ++a)
        if (static_cast<int>((spec.templ >> a) & 1U) != s[a]) return 0.0;
      return 1.0;
    case CharKind::boolean_table: {
      std::size_t idx = 0;
      for (std::size_t a = 0; a < q; ++a) idx += static_cast<std::size_t>(s[a]) << a;
      return spec.table[idx];
    }
    case CharKind::io_code: {
      double f = 0.0, pw = 1.0;
      for (std::size_t a = 0; a < q; ++a, pw *= 2.0) f += pw * s[a];
      return f;
    }
  }
  return 0.0;
}

inline Bits step(const Network& net, const Bits& s) {
  const std::size_t n = net.n(), q = net.q();
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = characteristic(net.spec().characteristic, s[j]);
  Bits out(n, std::vector<int>(q));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < q; ++a) {
      double h = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) h += net.weights()(a, i, j) * f[j];
      if (net.couplings())
        for (std::size_t b = 0; b < q; ++b)
          if (b != a) h += (*net.couplings())(i, a, b) * s[i][b];
      h -= net.threshold(i, a);
      out[i][a] = h >= 0.0 ? 1 : 0;
    }
  }
  return out;
}

/// States visited from `start`, including it, for `steps` synchronous steps.
inline std::vector<Bits> trajectory(const Network& net, const Bits& start, std::size_t steps) {
  std::vector<Bits> t{start};
  for (std::size_t k = 0; k < steps; ++k) t.push_back(step(net, t.back()));
  return t;
}

}  // namespace gan::naive
