#pragma once

// Weighted simple graphs with a diagonal potential, their Laplacians, and
// exact (rational) determinants. Floating point appears only in the
// eigenvalue cross-check det_star_eigen().

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnglue/errors.hpp"
#include "dnglue/rational.hpp"

namespace dnglue {

/// Dense square matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Rational(0)) {
    if (n < 0) throw GraphError("negative matrix dimension");
  }

  static RationalMatrix identity(int n) {
    RationalMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int size() const noexcept { return n_; }

  Rational& operator()(int i, int j) { return a_[index(i, j)]; }
  const Rational& operator()(int i, int j) const { return a_[index(i, j)]; }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<Rational> a_;
};

struct Edge {
  int u = 0;  ///< smaller endpoint (0-based)
  int v = 0;  ///< larger endpoint
  Rational weight;
};

/// Simple undirected graph on vertices 0..n-1 with nonzero rational edge
/// weights. An absent edge is exactly a zero entry of the weight matrix, so
/// zero weights are rejected; negative weights are allowed.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n) : n_(n), index_(static_cast<std::size_t>(n) * n, -1) {
    if (n < 1) throw GraphError("a graph needs at least one vertex");
  }

  int vertex_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

  /// Returns the index of the new edge.
  int add_edge(int u, int v, Rational weight) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw GraphError("loop at vertex " + std::to_string(u + 1));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v))
      throw GraphError("duplicate edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
    if (weight == 0)
      throw GraphError("zero weight on edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
    const int e = edge_count();
    edges_.push_back({u, v, std::move(weight)});
    index_[slot(u, v)] = e;
    index_[slot(v, u)] = e;
    return e;
  }

  bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }

  /// Edge index or -1.
  int edge_index(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return index_[slot(u, v)];
  }

  /// ω_uv, zero when there is no edge.
  Rational weight(int u, int v) const {
    const int e = edge_index(u, v);
    return e < 0 ? Rational(0) : edges_[static_cast<std::size_t>(e)].weight;
  }

  void set_weight(int e, Rational w) {
    if (w == 0) throw GraphError("zero weight");
    edges_.at(static_cast<std::size_t>(e)).weight = std::move(w);
  }

  bool has_positive_weights() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight > 0; });
  }

  std::vector<int> neighbours(int v) const {
    std::vector<int> out;
    for (int w = 0; w < n_; ++w)
      if (index_[slot(v, w)] >= 0) out.push_back(w);
    return out;
  }

  int component_count() const {
    std::vector<int> label(static_cast<std::size_t>(n_), -1);
    int components = 0;
    std::vector<int> stack;
    for (int s = 0; s < n_; ++s) {
      if (label[static_cast<std::size_t>(s)] >= 0) continue;
      label[static_cast<std::size_t>(s)] = components;
      stack.push_back(s);
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n_; ++w) {
          if (index_[slot(v, w)] >= 0 && label[static_cast<std::size_t>(w)] < 0) {
            label[static_cast<std::size_t>(w)] = components;
            stack.push_back(w);
          }
        }
      }
      ++components;
    }
    return components;
  }

  bool is_connected() const { return component_count() == 1; }
  bool is_tree() const { return is_connected() && edge_count() == n_ - 1; }

  /// Edge indices along a shortest path from `from` to `to` (the unique
  /// geodesic when the graph is a tree). Throws if no path exists.
  std::vector<int> tree_path(int from, int to) const {
    std::vector<int> parent_edge(static_cast<std::size_t>(n_), -2);
    std::vector<int> queue{from};
    parent_edge[static_cast<std::size_t>(from)] = -1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int w = 0; w < n_; ++w) {
        const int e = index_[slot(v, w)];
        if (e >= 0 && parent_edge[static_cast<std::size_t>(w)] == -2) {
          parent_edge[static_cast<std::size_t>(w)] = e;
          queue.push_back(w);
        }
      }
    }
    if (parent_edge[static_cast<std::size_t>(to)] == -2) throw GraphError("vertices not connected");
    std::vector<int> path;
    for (int v = to; v != from;) {
      const int e = parent_edge[static_cast<std::size_t>(v)];
      path.push_back(e);
      const Edge& ed = edges_[static_cast<std::size_t>(e)];
      v = ed.u == v ? ed.v : ed.u;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_) throw GraphError("vertex index " + std::to_string(v + 1) + " out of range");
  }
  std::size_t slot(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> index_;
};

/// Vertex potential δ. Vertex i is marked iff δ_i ≠ 0.
using Potential = std::vector<Rational>;

inline std::vector<int> marked_vertices(const Potential& delta) {
  std::vector<int> out;
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] != 0) out.push_back(static_cast<int>(i));
  return out;
}

/// True iff every entry is ≥ 0.
inline bool is_positive(const Potential& delta) {
  return std::all_of(delta.begin(), delta.end(), [](const Rational& d) { return d >= 0; });
}

inline void check_potential(const WeightedGraph& g, const Potential& delta) {
  if (static_cast<int>(delta.size()) != g.vertex_count())
    throw GraphError("potential has " + std::to_string(delta.size()) + " entries, graph has " +
                     std::to_string(g.vertex_count()) + " vertices");
}

/// Δ: off-diagonal −ω_ij, diagonal μ_i = Σ_j ω_ij. Row sums vanish exactly.
inline RationalMatrix build_laplacian(const WeightedGraph& g) {
  RationalMatrix L(g.vertex_count());
  for (const Edge& e : g.edges()) {
    L(e.u, e.v) -= e.weight;
    L(e.v, e.u) -= e.weight;
    L(e.u, e.u) += e.weight;
    L(e.v, e.v) += e.weight;
  }
  return L;
}

/// Δ + D.
inline RationalMatrix laplacian_with_potential(const WeightedGraph& g, const Potential& delta) {
  check_potential(g, delta);
  RationalMatrix m = build_laplacian(g);
  for (int i = 0; i < g.vertex_count(); ++i) m(i, i) += delta[static_cast<std::size_t>(i)];
  return m;
}

/// Exact determinant. Each row is cleared of denominators, then the integer
/// matrix is reduced by Bareiss fraction-free elimination with row pivoting.
inline Rational det_exact(const RationalMatrix& m) {
  const int n = m.size();
  if (n == 0) return Rational(1);

  std::vector<Integer> a(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> Integer& {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  };
  Integer denominator = 1;
  for (int i = 0; i < n; ++i) {
    Integer row_lcm = 1;
    for (int j = 0; j < n; ++j) mpz_lcm(row_lcm.get_mpz_t(), row_lcm.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (int j = 0; j < n; ++j) at(i, j) = m(i, j).get_num() * (row_lcm / m(i, j).get_den());
    denominator *= row_lcm;
  }

  int sign = 1;
  Integer previous = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int pivot = k + 1;
      while (pivot < n && at(pivot, k) == 0) ++pivot;
      if (pivot == n) return Rational(0);
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), previous.get_mpz_t());
      }
      at(i, k) = 0;
    }
    previous = at(k, k);
  }

  Rational det(at(n - 1, n - 1) * sign, denominator);
  det.canonicalize();
  return det;
}

/// Matrix with row k and column k removed (0-based k).
inline RationalMatrix delete_row_column(const RationalMatrix& m, int k) {
  const int n = m.size();
  if (k < 0 || k >= n) throw GraphError("minor index " + std::to_string(k + 1) + " out of range 1.." + std::to_string(n));
  RationalMatrix out(n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == k) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == k) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

/// det A^{[k]}: determinant with row and column k deleted (0-based k).
inline Rational principal_minor_det(const RationalMatrix& m, int k) { return det_exact(delete_row_column(m, k)); }

/// Product of the nonzero Laplacian eigenvalues, n · det Δ^{[1]}. Requires a
/// connected graph with positive weights; a disconnected graph has a repeated
/// zero eigenvalue and is rejected.
inline Rational det_star(const WeightedGraph& g) {
  if (!g.is_connected())
    throw GraphError("det* requires a connected graph (zero eigenvalue would be repeated)");
  if (!g.has_positive_weights()) throw GraphError("det* requires positive weights");
  return Rational(g.vertex_count()) * principal_minor_det(build_laplacian(g), 0);
}

inline Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(m.size(), m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

/// Floating cross-check for det_star: product of all Laplacian eigenvalues
/// except the one of smallest magnitude.
inline double det_star_eigen(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(build_laplacian(g)), Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();
  Eigen::Index smallest = 0;
  ev.cwiseAbs().minCoeff(&smallest);
  double product = 1.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != smallest) product *= ev(i);
  return product;
}

/// Graph with vertex k and its edges deleted, remaining vertices renumbered in order.
inline WeightedGraph delete_vertex(const WeightedGraph& g, int k) {
  if (g.vertex_count() < 2) throw GraphError("cannot delete the only vertex");
  WeightedGraph out(g.vertex_count() - 1);
  auto renumber = [k](int v) { return v < k ? v : v - 1; };
  for (const Edge& e : g.edges())
    if (e.u != k && e.v != k) out.add_edge(renumber(e.u), renumber(e.v), e.weight);
  return out;
}

}  // namespace dnglue
