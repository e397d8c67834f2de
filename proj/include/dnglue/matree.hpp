#pragma once

// Exhaustive evaluation of the matrix-tree expansion of det(Δ + D).
//
// Two independent routes are provided:
//   * kirchhoff_det_pairs: spanning trees T, marked subsets W, separating
//     edge sets S ∈ E(T; W), each pair weighted by 1/m(T,S), where the
//     multiplicity m is obtained by counting pairs with equal T \ S;
//   * kirchhoff_det_forests: spanning forests enumerated directly, one
//     marked vertex chosen per component.
// Both are exact; det_exact(Δ + D) is the third reference.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnglue/errors.hpp"
#include "dnglue/graph_core.hpp"
#include "dnglue/random_instances.hpp"
#include "dnglue/rational.hpp"

namespace dnglue {

/// Bit e set iff edge e (index into WeightedGraph::edges()) is present.
using EdgeSet = std::uint64_t;
/// Bit v set iff vertex v belongs to the set.
using VertexSet = std::uint32_t;

struct EnumerationLimits {
  int max_vertices = 12;
  int max_edges = 24;
  std::uint64_t max_work = 400'000'000;  ///< recursion nodes + pair checks
};

inline void check_enumeration_scale(const WeightedGraph& g, const EnumerationLimits& limits) {
  if (g.vertex_count() > limits.max_vertices || g.vertex_count() > 31)
    throw ResourceExceeded("exhaustive enumeration limited to " + std::to_string(limits.max_vertices) +
                           " vertices, graph has " + std::to_string(g.vertex_count()));
  if (g.edge_count() > limits.max_edges || g.edge_count() > 64)
    throw ResourceExceeded("exhaustive enumeration limited to " + std::to_string(limits.max_edges) +
                           " edges, graph has " + std::to_string(g.edge_count()));
}

namespace detail {

class WorkCounter {
 public:
  explicit WorkCounter(std::uint64_t limit) : limit_(limit) {}
  void tick(std::uint64_t amount = 1) {
    used_ += amount;
    if (used_ > limit_) throw ResourceExceeded("enumeration work limit of " + std::to_string(limit_) + " exceeded");
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Union-find with undo, no path compression.
class RollbackDsu {
 public:
  explicit RollbackDsu(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
  }
  int find(int v) const {
    while (parent_[static_cast<std::size_t>(v)] != v) v = parent_[static_cast<std::size_t>(v)];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    history_.push_back(b);
    return true;
  }
  void undo() {
    const int b = history_.back();
    history_.pop_back();
    const int a = parent_[static_cast<std::size_t>(b)];
    size_[static_cast<std::size_t>(a)] -= size_[static_cast<std::size_t>(b)];
    parent_[static_cast<std::size_t>(b)] = b;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> history_;
};

// Component root per vertex for the edge subset `edges`.
inline std::array<std::int8_t, 32> component_roots(const WeightedGraph& g, EdgeSet edges) {
  std::array<std::int8_t, 32> parent{};
  for (int v = 0; v < g.vertex_count(); ++v) parent[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(v);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  for (EdgeSet rest = edges; rest != 0; rest &= rest - 1) {
    const Edge& e = g.edge(std::countr_zero(rest));
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = static_cast<std::int8_t>(std::min(a, b));
  }
  for (int v = 0; v < g.vertex_count(); ++v) parent[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(find(v));
  return parent;
}

inline Rational weight_product(const WeightedGraph& g, EdgeSet edges) {
  Rational p = 1;
  for (EdgeSet rest = edges; rest != 0; rest &= rest - 1) p *= g.edge(std::countr_zero(rest)).weight;
  return p;
}

inline VertexSet to_vertex_set(const WeightedGraph& g, std::span<const int> vertices) {
  VertexSet set = 0;
  for (int v : vertices) {
    if (v < 0 || v >= g.vertex_count()) throw GraphError("marked vertex " + std::to_string(v + 1) + " out of range");
    const VertexSet bit = VertexSet{1} << v;
    if (set & bit) throw GraphError("marked vertex " + std::to_string(v + 1) + " listed twice");
    set |= bit;
  }
  return set;
}

// Tree edges as endpoint pairs plus their global edge bits, for the inner loops.
struct CompactTree {
  EdgeSet edges = 0;
  int size = 0;
  std::array<std::int8_t, 32> u{};
  std::array<std::int8_t, 32> v{};
  std::array<EdgeSet, 32> bit{};
};

inline CompactTree compact(const WeightedGraph& g, EdgeSet tree) {
  CompactTree t;
  t.edges = tree;
  for (EdgeSet rest = tree; rest != 0; rest &= rest - 1) {
    const int e = std::countr_zero(rest);
    t.u[static_cast<std::size_t>(t.size)] = static_cast<std::int8_t>(g.edge(e).u);
    t.v[static_cast<std::size_t>(t.size)] = static_cast<std::int8_t>(g.edge(e).v);
    t.bit[static_cast<std::size_t>(t.size)] = EdgeSet{1} << e;
    ++t.size;
  }
  return t;
}

// True iff removing the local edges in `removed` leaves exactly one vertex of
// `marked` per component. Requires popcount(removed) == popcount(marked) - 1.
inline bool separates(const CompactTree& t, int n, std::uint32_t removed, VertexSet marked) {
  std::array<std::int8_t, 32> parent{};
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(i);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int k = 0; k < t.size; ++k) {
    if (removed & (1u << k)) continue;
    const int a = find(t.u[static_cast<std::size_t>(k)]);
    const int b = find(t.v[static_cast<std::size_t>(k)]);
    parent[static_cast<std::size_t>(std::max(a, b))] = static_cast<std::int8_t>(std::min(a, b));
  }
  std::uint32_t roots = 0;
  for (VertexSet rest = marked; rest != 0; rest &= rest - 1) {
    const std::uint32_t r = 1u << find(std::countr_zero(rest));
    if (roots & r) return false;
    roots |= r;
  }
  return true;
}

// Local subsets of {0..size-1} grouped by cardinality.
inline std::vector<std::vector<std::uint32_t>> subsets_by_size(int size) {
  std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(size) + 1);
  for (std::uint32_t s = 0; s < (1u << size); ++s) out[static_cast<std::size_t>(std::popcount(s))].push_back(s);
  return out;
}

inline EdgeSet global_edges(const CompactTree& t, std::uint32_t local) {
  EdgeSet out = 0;
  for (std::uint32_t rest = local; rest != 0; rest &= rest - 1) out |= t.bit[static_cast<std::size_t>(std::countr_zero(rest))];
  return out;
}

}  // namespace detail

struct SpanningTree {
  EdgeSet edges = 0;
  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

/// Every spanning tree exactly once, by include/exclude recursion over the
/// edges (contraction/deletion) with a union-find cycle check.
inline std::vector<SpanningTree> enumerate_spanning_trees(const WeightedGraph& g, const EnumerationLimits& limits = {}) {
  check_enumeration_scale(g, limits);
  if (!g.is_connected()) throw GraphError("spanning trees require a connected graph");

  const int n = g.vertex_count();
  const int m = g.edge_count();
  std::vector<SpanningTree> trees;
  detail::RollbackDsu dsu(n);
  detail::WorkCounter work(limits.max_work);

  auto recurse = [&](auto&& self, int e, int chosen, EdgeSet set) -> void {
    work.tick();
    if (chosen == n - 1) {
      trees.push_back({set});
      return;
    }
    if (m - e < n - 1 - chosen) return;
    const Edge& edge = g.edge(e);
    if (dsu.unite(edge.u, edge.v)) {
      self(self, e + 1, chosen + 1, set | (EdgeSet{1} << e));
      dsu.undo();
    }
    self(self, e + 1, chosen, set);
  };
  recurse(recurse, 0, 0, 0);
  return trees;
}

struct SeparatingSet {
  EdgeSet removed = 0;  ///< S ⊂ E(T), |S| = ℓ − 1
};

/// All S ⊂ E(T) with |S| = ℓ − 1 such that each component of T \ S holds
/// exactly one of the ℓ marked vertices. For ℓ = 1 the only result is S = ∅.
inline std::vector<SeparatingSet> enumerate_separating_sets(const WeightedGraph& g, const SpanningTree& tree,
                                                            std::span<const int> marked) {
  check_enumeration_scale(g, {});
  if (marked.empty()) throw GraphError("at least one marked vertex is required");
  const VertexSet w = detail::to_vertex_set(g, marked);
  if (std::popcount(tree.edges) != g.vertex_count() - 1 || (tree.edges >> g.edge_count()) != 0)
    throw GraphError("edge set is not a spanning tree of the graph");

  const detail::CompactTree t = detail::compact(g, tree.edges);
  const int removed_size = static_cast<int>(marked.size()) - 1;
  std::vector<SeparatingSet> out;
  if (removed_size > t.size) return out;
  const auto subsets = detail::subsets_by_size(t.size);
  for (std::uint32_t local : subsets[static_cast<std::size_t>(removed_size)])
    if (detail::separates(t, g.vertex_count(), local, w)) out.push_back({detail::global_edges(t, local)});
  return out;
}

/// A residual forest F = T \ S for a fixed marked subset, with the pairs
/// (T, S) that produce it. multiplicity = number of such pairs.
struct MarkedForest {
  EdgeSet edges = 0;
  std::vector<int> marked;
  std::size_t multiplicity = 0;
  std::vector<std::pair<EdgeSet, EdgeSet>> members;  ///< (T, S)
};

inline std::vector<MarkedForest> group_pairs_into_forests(const WeightedGraph& g, std::span<const int> marked,
                                                          const std::vector<SpanningTree>& trees) {
  std::map<EdgeSet, MarkedForest> groups;
  for (const SpanningTree& t : trees) {
    for (const SeparatingSet& s : enumerate_separating_sets(g, t, marked)) {
      const EdgeSet forest = t.edges & ~s.removed;
      MarkedForest& f = groups[forest];
      f.edges = forest;
      f.members.emplace_back(t.edges, s.removed);
    }
  }
  std::vector<MarkedForest> out;
  out.reserve(groups.size());
  for (auto& [key, f] : groups) {
    f.marked.assign(marked.begin(), marked.end());
    std::sort(f.marked.begin(), f.marked.end());
    f.multiplicity = f.members.size();
    out.push_back(std::move(f));
  }
  return out;
}

inline std::vector<MarkedForest> group_pairs_into_forests(const WeightedGraph& g, std::span<const int> marked,
                                                          const EnumerationLimits& limits = {}) {
  return group_pairs_into_forests(g, marked, enumerate_spanning_trees(g, limits));
}

struct KirchhoffPairsReport {
  Rational value;
  std::uint64_t tree_count = 0;
  std::uint64_t pair_count = 0;    ///< (T, W, S) triples over all nonempty W
  std::uint64_t forest_count = 0;  ///< distinct (W, T \ S) groups
  /// m -> number of pairs with that multiplicity, over pairs with |W| ≥ 2
  /// (single-mark pairs always have S = ∅ and m = 1).
  std::map<std::uint64_t, std::uint64_t> multiplicity_histogram;
  /// Coefficient of the monomial Π_{w∈W} δ_w, keyed by W.
  std::map<VertexSet, Rational> coefficients;
};

/// Evaluates the tree/separating-set expansion of det(Δ + D). The weights
/// may have any sign; the graph must be connected.
inline KirchhoffPairsReport kirchhoff_pairs_report(const WeightedGraph& g, const Potential& delta,
                                                   const EnumerationLimits& limits = {}) {
  check_potential(g, delta);
  const std::vector<SpanningTree> trees = enumerate_spanning_trees(g, limits);
  const int n = g.vertex_count();
  const std::vector<int> marks = marked_vertices(delta);
  const auto subsets = detail::subsets_by_size(n - 1);
  detail::WorkCounter work(limits.max_work);

  std::vector<detail::CompactTree> compact_trees;
  compact_trees.reserve(trees.size());
  for (const SpanningTree& t : trees) compact_trees.push_back(detail::compact(g, t.edges));

  KirchhoffPairsReport report;
  report.tree_count = trees.size();
  std::vector<EdgeSet> forests;

  // W ranges over nonempty subsets of the marked vertices.
  const std::uint32_t k = static_cast<std::uint32_t>(marks.size());
  for (std::uint32_t choice = 1; choice < (1u << k); ++choice) {
    VertexSet w = 0;
    Rational delta_w = 1;
    for (std::uint32_t rest = choice; rest != 0; rest &= rest - 1) {
      const int v = marks[static_cast<std::size_t>(std::countr_zero(rest))];
      w |= VertexSet{1} << v;
      delta_w *= delta[static_cast<std::size_t>(v)];
    }
    const int removed_size = std::popcount(w) - 1;

    forests.clear();
    for (const detail::CompactTree& t : compact_trees) {
      const auto& candidates = subsets[static_cast<std::size_t>(removed_size)];
      work.tick(candidates.size());
      for (std::uint32_t local : candidates)
        if (detail::separates(t, n, local, w)) forests.push_back(t.edges & ~detail::global_edges(t, local));
    }
    std::sort(forests.begin(), forests.end());
    report.pair_count += forests.size();

    // Pairs with equal T \ S form one run of the sorted list; m is the run
    // length, so the run's m terms ω(T\S)/m add up to ω(T\S).
    Rational coefficient = 0;
    for (std::size_t i = 0; i < forests.size();) {
      std::size_t j = i;
      while (j < forests.size() && forests[j] == forests[i]) ++j;
      const std::uint64_t multiplicity = j - i;
      coefficient += detail::weight_product(g, forests[i]);
      if (removed_size >= 1) report.multiplicity_histogram[multiplicity] += multiplicity;
      ++report.forest_count;
      i = j;
    }
    report.value += delta_w * coefficient;
    report.coefficients[w] = coefficient;
  }
  return report;
}

inline Rational kirchhoff_det_pairs(const WeightedGraph& g, const Potential& delta, const EnumerationLimits& limits = {}) {
  return kirchhoff_pairs_report(g, delta, limits).value;
}

struct ForestExpansionReport {
  Rational value;
  std::uint64_t forest_count = 0;    ///< acyclic edge subsets visited
  std::uint64_t monomial_count = 0;  ///< (W, F) pairs with a nonzero monomial
};

/// Σ_F ω(F) Π_{components C of F} (Σ_{v∈C} δ_v) over all spanning forests F.
/// Expanding the product picks one marked vertex per component, i.e. sums
/// over marked subsets W and forests with |W| components each holding one
/// element of W.
inline ForestExpansionReport kirchhoff_forests_report(const WeightedGraph& g, const Potential& delta,
                                                      const EnumerationLimits& limits = {}) {
  check_enumeration_scale(g, limits);
  check_potential(g, delta);
  if (!g.is_connected()) throw GraphError("forest expansion requires a connected graph");

  const int n = g.vertex_count();
  const int m = g.edge_count();
  ForestExpansionReport report;
  detail::RollbackDsu dsu(n);
  detail::WorkCounter work(limits.max_work);
  std::vector<Rational> products(static_cast<std::size_t>(m) + 1);
  products[0] = 1;
  std::vector<Rational> sums(static_cast<std::size_t>(n));
  std::vector<int> marked_in(static_cast<std::size_t>(n));

  auto leaf = [&](const Rational& weight) {
    ++report.forest_count;
    for (int v = 0; v < n; ++v) {
      sums[static_cast<std::size_t>(v)] = 0;
      marked_in[static_cast<std::size_t>(v)] = 0;
    }
    for (int v = 0; v < n; ++v) {
      const int r = dsu.find(v);
      sums[static_cast<std::size_t>(r)] += delta[static_cast<std::size_t>(v)];
      if (delta[static_cast<std::size_t>(v)] != 0) ++marked_in[static_cast<std::size_t>(r)];
    }
    Rational term = weight;
    std::uint64_t monomials = 1;
    for (int v = 0; v < n; ++v) {
      if (dsu.find(v) != v) continue;
      term *= sums[static_cast<std::size_t>(v)];
      monomials *= static_cast<std::uint64_t>(marked_in[static_cast<std::size_t>(v)]);
    }
    report.value += term;
    report.monomial_count += monomials;
  };

  auto recurse = [&](auto&& self, int e, int depth) -> void {
    work.tick();
    if (e == m) {
      leaf(products[static_cast<std::size_t>(depth)]);
      return;
    }
    const Edge& edge = g.edge(e);
    if (dsu.unite(edge.u, edge.v)) {
      products[static_cast<std::size_t>(depth) + 1] = products[static_cast<std::size_t>(depth)] * edge.weight;
      self(self, e + 1, depth + 1);
      dsu.undo();
    }
    self(self, e + 1, depth);
  };
  recurse(recurse, 0, 0);
  return report;
}

inline Rational kirchhoff_det_forests(const WeightedGraph& g, const Potential& delta,
                                      const EnumerationLimits& limits = {}) {
  return kirchhoff_forests_report(g, delta, limits).value;
}

/// Σ ω(F) over spanning forests with |W| components, each containing exactly
/// one vertex of W: the coefficient of Π_{w∈W} δ_w, read off the forest route.
inline Rational forest_coefficient(const WeightedGraph& g, std::span<const int> marked,
                                   const EnumerationLimits& limits = {}) {
  check_enumeration_scale(g, limits);
  const VertexSet w = detail::to_vertex_set(g, marked);
  const int n = g.vertex_count();
  const int m = g.edge_count();
  const int target_edges = n - static_cast<int>(marked.size());
  Rational total = 0;
  detail::RollbackDsu dsu(n);
  detail::WorkCounter work(limits.max_work);

  auto recurse = [&](auto&& self, int e, int depth, EdgeSet set) -> void {
    work.tick();
    if (depth == target_edges) {
      std::uint32_t roots = 0;
      for (VertexSet rest = w; rest != 0; rest &= rest - 1) {
        const std::uint32_t r = 1u << dsu.find(std::countr_zero(rest));
        if (roots & r) return;
        roots |= r;
      }
      total += detail::weight_product(g, set);
      return;
    }
    if (e == m || m - e < target_edges - depth) return;
    const Edge& edge = g.edge(e);
    if (dsu.unite(edge.u, edge.v)) {
      self(self, e + 1, depth + 1, set | (EdgeSet{1} << e));
      dsu.undo();
    }
    self(self, e + 1, depth, set);
  };
  if (target_edges >= 0) recurse(recurse, 0, 0, 0);
  return total;
}

// ---------------------------------------------------------------------------
// Deletion step: det(Δ+D) = det(Δ+D)|_{δ_k=0} + δ_k det(Δ_{G̃} + D̃).

struct InductionCheck {
  Rational full;         ///< det(Δ + D)
  Rational without_k;    ///< det(Δ + D) with δ_k set to 0
  Rational minor;        ///< det((Δ + D)^{[k]})
  Rational reduced;      ///< det(Δ_{G̃} + D̃), G̃ = G − v_k, δ̃_j = δ_j + ω_jk
  bool minor_matches = false;
  bool holds = false;
};

inline InductionCheck induction_step_check(const WeightedGraph& g, const Potential& delta, int k) {
  check_potential(g, delta);
  if (k < 0 || k >= g.vertex_count()) throw GraphError("vertex index out of range");
  if (delta[static_cast<std::size_t>(k)] == 0) throw GraphError("induction step needs δ_k ≠ 0");
  if (g.vertex_count() < 2) throw GraphError("induction step needs at least two vertices");

  InductionCheck c;
  c.full = det_exact(laplacian_with_potential(g, delta));
  Potential cleared = delta;
  cleared[static_cast<std::size_t>(k)] = 0;
  c.without_k = det_exact(laplacian_with_potential(g, cleared));
  c.minor = principal_minor_det(laplacian_with_potential(g, delta), k);

  const WeightedGraph reduced = delete_vertex(g, k);
  Potential reduced_delta;
  for (int j = 0; j < g.vertex_count(); ++j)
    if (j != k) reduced_delta.push_back(delta[static_cast<std::size_t>(j)] + g.weight(j, k));
  c.reduced = det_exact(laplacian_with_potential(reduced, reduced_delta));

  c.minor_matches = c.minor == c.reduced;
  c.holds = c.minor_matches && c.full == c.without_k + delta[static_cast<std::size_t>(k)] * c.reduced;
  return c;
}

// ---------------------------------------------------------------------------
// Tree comparison drivers.

namespace detail {

// Products of `count` distinct edge weights, reduced with `better`.
template <class Better>
Rational extreme_edge_product(const WeightedGraph& g, int count, Better better) {
  const int m = g.edge_count();
  if (count == 0) return Rational(1);
  if (count > m) throw GraphError("not enough edges");
  std::vector<int> pick(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pick[static_cast<std::size_t>(i)] = i;
  Rational best;
  bool first = true;
  while (true) {
    Rational p = 1;
    for (int e : pick) p *= g.edge(e).weight;
    if (first || better(p, best)) best = p;
    first = false;
    int i = count - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - count + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < count; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j) - 1] + 1;
  }
  return best;
}

}  // namespace detail

struct EstimateReport {
  int marks = 0;
  Rational det_star;
  Rational det_with_potential;
  Rational lhs;  ///< k = 1: det*Δ;  k ≥ 2: det*Δ / det(Δ+D)
  Rational rhs;  ///< k = 1: (n/δ_1) det(Δ+D);  k ≥ 2: n/Πδ · max Π_{k−1} ω
  bool identity_branch = false;
  bool holds = false;
  Rational lower_bound;  ///< Πδ · min product of n − k distinct weights
  bool lower_bound_holds = false;
};

/// Tree comparison between det*Δ and det(Δ + D) for a positive potential
/// with k ≥ 1 marks. The k = 1 branch is an exact identity.
inline EstimateReport estimate_bounds(const WeightedGraph& g, const Potential& delta) {
  check_potential(g, delta);
  if (!g.is_tree()) throw GraphError("estimate_bounds requires a tree");
  if (!g.has_positive_weights()) throw GraphError("estimate_bounds requires positive weights");
  if (!is_positive(delta)) throw GraphError("estimate_bounds requires a positive potential");
  const std::vector<int> marks = marked_vertices(delta);
  if (marks.empty()) throw GraphError("estimate_bounds requires at least one marked vertex");

  const int n = g.vertex_count();
  const int k = static_cast<int>(marks.size());
  EstimateReport r;
  r.marks = k;
  r.det_star = det_star(g);
  r.det_with_potential = det_exact(laplacian_with_potential(g, delta));
  Rational delta_product = 1;
  for (int v : marks) delta_product *= delta[static_cast<std::size_t>(v)];

  if (k == 1) {
    r.identity_branch = true;
    r.lhs = r.det_star;
    r.rhs = Rational(n) / delta_product * r.det_with_potential;
    r.holds = r.lhs == r.rhs;
  } else {
    r.lhs = r.det_star / r.det_with_potential;
    r.rhs = Rational(n) / delta_product *
            detail::extreme_edge_product(g, k - 1, [](const Rational& a, const Rational& b) { return a > b; });
    r.holds = r.lhs <= r.rhs;
  }
  r.lower_bound = delta_product *
                  detail::extreme_edge_product(g, n - k, [](const Rational& a, const Rational& b) { return a < b; });
  r.lower_bound_holds = r.det_with_potential >= r.lower_bound;
  return r;
}

struct BandReport {
  Rational kappa;
  Rational bound;  ///< κ^{n−1}
  Rational min_ratio;
  Rational max_ratio;
  int samples = 0;
  bool within = false;
};

/// Samples ω̃ with κ^{-1}ω ≤ ω̃ ≤ κω edgewise and compares det(Δ_ω̃ + D)
/// with det(Δ_ω + D). Every monomial of the expansion has at most n − 1
/// weight factors, so the ratio lies in [κ^{-(n-1)}, κ^{n-1}].
inline BandReport band_comparison(const WeightedGraph& g, const Potential& delta, const Rational& kappa, int samples,
                                  std::uint64_t seed) {
  check_potential(g, delta);
  if (kappa < 1) throw GraphError("band comparison needs κ ≥ 1");
  if (!g.has_positive_weights() || !is_positive(delta)) throw GraphError("band comparison needs positive weights and potential");
  if (samples < 1) throw GraphError("band comparison needs at least one sample");
  const Rational base = det_exact(laplacian_with_potential(g, delta));
  if (base <= 0) throw GraphError("band comparison needs det(Δ + D) > 0 (at least one marked vertex)");

  BandReport r;
  r.kappa = kappa;
  r.bound = pow(kappa, g.vertex_count() - 1);
  r.samples = samples;
  Rng rng(seed);
  const Rational lo = 1 / kappa;
  for (int s = 0; s < samples; ++s) {
    WeightedGraph h = g;
    for (int e = 0; e < h.edge_count(); ++e) h.set_weight(e, g.edge(e).weight * random_in_interval(rng, lo, kappa));
    const Rational ratio = det_exact(laplacian_with_potential(h, delta)) / base;
    if (s == 0 || ratio < r.min_ratio) r.min_ratio = ratio;
    if (s == 0 || ratio > r.max_ratio) r.max_ratio = ratio;
  }
  r.within = r.min_ratio >= 1 / r.bound && r.max_ratio <= r.bound;
  return r;
}

struct PerturbationSample {
  Rational kappa0;
  Rational det_tree;       ///< det(Δ_{(G,ω)} + D)
  Rational det_complete;   ///< det(Δ_{(Ĝ,ω̂)} + D)
  Rational ratio;
  bool vacuous = false;    ///< ratio not meaningful: det(Δ + D) = 0 or det(Δ̂ + D) ≤ 0
};

struct PerturbationReport {
  std::vector<Edge> chord_shapes;  ///< ω̂(ê) = weight · κ0
  std::vector<PerturbationSample> sweep;
  bool monotone = false;  ///< |ratio − 1| non-increasing along the sweep
};

/// Extends a weighted tree to the complete graph: each chord ê = (u,v) gets
/// ω̂(ê) = s_ê κ0 min_{e on the u–v path} ω(e) with a fixed random shape
/// s_ê ∈ [−1, 1], so |ω̂(ê)| ≤ κ0 ω(e) along the geodesic. The shape is
/// drawn once from `seed` and reused for every κ0.
inline PerturbationReport complete_graph_perturbation(const WeightedGraph& tree, const Potential& delta,
                                                      const std::vector<Rational>& kappa0s, std::uint64_t seed) {
  check_potential(tree, delta);
  if (!tree.is_tree()) throw GraphError("complete_graph_perturbation requires a tree");
  if (!tree.has_positive_weights()) throw GraphError("complete_graph_perturbation requires positive weights");
  if (!is_positive(delta)) throw GraphError("complete_graph_perturbation requires a nonnegative potential");

  const int n = tree.vertex_count();
  PerturbationReport report;
  std::vector<Edge>& chords = report.chord_shapes;
  Rng rng(seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (tree.has_edge(u, v)) continue;
      Rational path_min;
      bool first = true;
      for (int e : tree.tree_path(u, v))
        if (first || tree.edge(e).weight < path_min) {
          path_min = tree.edge(e).weight;
          first = false;
        }
      chords.push_back({u, v, random_in_interval(rng, Rational(-1), Rational(1)) * path_min});
    }

  const Rational base = det_exact(laplacian_with_potential(tree, delta));
  for (const Rational& kappa0 : kappa0s) {
    if (kappa0 < 0) throw GraphError("κ0 must be nonnegative");
    WeightedGraph complete = tree;
    for (const Edge& c : chords)
      if (c.weight != 0 && kappa0 != 0) complete.add_edge(c.u, c.v, c.weight * kappa0);
    PerturbationSample s;
    s.kappa0 = kappa0;
    s.det_tree = base;
    s.det_complete = det_exact(laplacian_with_potential(complete, delta));
    s.vacuous = base == 0 || s.det_complete <= 0;
    if (base != 0) s.ratio = s.det_complete / base;
    report.sweep.push_back(s);
  }
  report.monotone = true;
  for (std::size_t i = 1; i < report.sweep.size(); ++i) {
    const auto& a = report.sweep[i - 1];
    const auto& b = report.sweep[i];
    if (a.vacuous || b.vacuous) continue;
    if (abs(b.ratio - 1) > abs(a.ratio - 1)) report.monotone = false;
  }
  return report;
}

}  // namespace dnglue
