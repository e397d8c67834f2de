#pragma once

// Seeded generators for graph instances. std::mt19937_64 plus explicit
// integer arithmetic, so a seed reproduces the same instance everywhere
// (the std distributions are not portable across standard libraries).

#include <cstdint>
#include <random>
#include <vector>

#include "dnglue/graph_core.hpp"
#include "dnglue/rational.hpp"

namespace dnglue {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
inline long uniform_int(Rng& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return lo + static_cast<long>(x % span);
}

/// p/q with q ∈ [1, max_den] and p/q ∈ [lo, hi], lo and hi integers.
inline Rational random_rational(Rng& rng, long lo, long hi, long max_den = 6) {
  const long q = uniform_int(rng, 1, max_den);
  Rational r(uniform_int(rng, lo * q, hi * q), q);
  r.canonicalize();
  return r;
}

inline Rational random_nonzero_rational(Rng& rng, long lo, long hi, long max_den = 6) {
  Rational r;
  do r = random_rational(rng, lo, hi, max_den);
  while (r == 0);
  return r;
}

/// Rational on a 2^20 grid in [lo, hi].
inline Rational random_in_interval(Rng& rng, const Rational& lo, const Rational& hi) {
  constexpr long steps = 1L << 20;
  return lo + (hi - lo) * Rational(uniform_int(rng, 0, steps), steps);
}

/// Positive weight in [1/4, 4].
inline Rational random_positive_weight(Rng& rng) { return random_in_interval(rng, Rational(1, 4), Rational(4)); }

/// Random spanning tree (each vertex attaches to an earlier one, labels
/// shuffled) plus extra edges with probability `extra`, weights nonzero in
/// [−4, 4].
inline WeightedGraph random_connected_graph(Rng& rng, int n, double extra = 0.4) {
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) std::swap(label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(uniform_int(rng, 0, i))]);

  WeightedGraph g(n);
  for (int i = 1; i < n; ++i)
    g.add_edge(label[static_cast<std::size_t>(uniform_int(rng, 0, i - 1))], label[static_cast<std::size_t>(i)],
               random_nonzero_rational(rng, -4, 4));
  const long threshold = static_cast<long>(extra * 1000);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!g.has_edge(u, v) && uniform_int(rng, 0, 999) < threshold) g.add_edge(u, v, random_nonzero_rational(rng, -4, 4));
  return g;
}

/// Random tree with weights in [1/4, 4].
inline WeightedGraph random_tree(Rng& rng, int n) {
  WeightedGraph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(static_cast<int>(uniform_int(rng, 0, i - 1)), i, random_positive_weight(rng));
  return g;
}

/// Potential with exactly `marks` nonzero entries at random vertices; values
/// in [−4, 4] \ {0}, or (0, 4] when `positive`.
inline Potential random_potential(Rng& rng, int n, int marks, bool positive = false) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
  Potential delta(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < marks; ++i)
    delta[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        positive ? random_positive_weight(rng) : random_nonzero_rational(rng, -4, 4);
  return delta;
}

}  // namespace dnglue
