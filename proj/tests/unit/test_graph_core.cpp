#include <gtest/gtest.h>

#include <cmath>

#include "dnglue/graph_core.hpp"
#include "dnglue/graph_io.hpp"
#include "dnglue/random_instances.hpp"

using namespace dnglue;

namespace {

WeightedGraph complete_graph(int n, const Rational& w = 1) {
  WeightedGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v, w);
  return g;
}

// Cofactor expansion, exponential but independent of the elimination code.
Rational det_cofactor(const RationalMatrix& m) {
  const int n = m.size();
  if (n == 1) return m(0, 0);
  Rational total = 0;
  for (int j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    RationalMatrix sub(n - 1);
    for (int i = 1; i < n; ++i)
      for (int k = 0, c = 0; k < n; ++k)
        if (k != j) sub(i - 1, c++) = m(i, k);
    total += (j % 2 == 0 ? 1 : -1) * m(0, j) * det_cofactor(sub);
  }
  return total;
}

}  // namespace

TEST(Laplacian, SingleEdge) {
  WeightedGraph g(2);
  g.add_edge(0, 1, Rational(3, 2));
  const RationalMatrix L = build_laplacian(g);
  EXPECT_EQ(L(0, 0), Rational(3, 2));
  EXPECT_EQ(L(0, 1), Rational(-3, 2));
  EXPECT_EQ(L(1, 1), Rational(3, 2));
}

TEST(Laplacian, CompleteGraphK3) {
  const RationalMatrix L = build_laplacian(complete_graph(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(L(i, j), i == j ? Rational(2) : Rational(-1));
}

TEST(Laplacian, FourCycleRowOfVertexOne) {
  const GraphInstance inst = load_graph(DNGLUE_DATA_DIR "/four_cycle.graph");
  const RationalMatrix L = build_laplacian(inst.graph);
  EXPECT_EQ(L(0, 0), Rational(5));  // ω13 + ω14
  EXPECT_EQ(L(0, 1), Rational(0));
  EXPECT_EQ(L(0, 2), Rational(-2));
  EXPECT_EQ(L(0, 3), Rational(-3));
}

TEST(Laplacian, RowSumsVanishAndSymmetric) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const WeightedGraph g = random_connected_graph(rng, 2 + trial % 6);
    const RationalMatrix L = build_laplacian(g);
    EXPECT_TRUE(L.is_symmetric());
    for (int i = 0; i < L.size(); ++i) {
      Rational sum = 0;
      for (int j = 0; j < L.size(); ++j) sum += L(i, j);
      EXPECT_EQ(sum, 0);
    }
  }
}

TEST(DetExact, Identity) { EXPECT_EQ(det_exact(RationalMatrix::identity(3)), 1); }

TEST(DetExact, TwoByTwoWithPotential) {
  WeightedGraph g(2);
  const Rational w(5, 3), d1(1, 2), d2(3);
  g.add_edge(0, 1, w);
  EXPECT_EQ(det_exact(laplacian_with_potential(g, {d1, d2})), w * (d1 + d2) + d1 * d2);
}

TEST(DetExact, MatchesCofactorExpansion) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 6;
    RationalMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = random_rational(rng, -3, 3, 5);
    EXPECT_EQ(det_exact(m), det_cofactor(m));
  }
}

TEST(DetExact, NeedsPivotingOnZeroLeadingEntry) {
  RationalMatrix m(2);
  m(0, 1) = 2;
  m(1, 0) = 3;
  EXPECT_EQ(det_exact(m), -6);
}

TEST(DetExact, LaplacianOfConnectedGraphIsSingular) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) EXPECT_EQ(det_exact(build_laplacian(random_tree(rng, 2 + trial % 6))), 0);
}

TEST(PrincipalMinor, Examples) {
  WeightedGraph g(2);
  g.add_edge(0, 1, Rational(7, 2));
  EXPECT_EQ(principal_minor_det(build_laplacian(g), 0), Rational(7, 2));
  const RationalMatrix k3 = build_laplacian(complete_graph(3));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(principal_minor_det(k3, k), 3);
  EXPECT_THROW(principal_minor_det(k3, 3), GraphError);
  EXPECT_THROW(principal_minor_det(k3, -1), GraphError);
}

TEST(PrincipalMinor, IndependentOfDeletedIndex) {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const WeightedGraph g = random_connected_graph(rng, 2 + trial % 6);
    const RationalMatrix L = build_laplacian(g);
    const Rational first = principal_minor_det(L, 0);
    for (int k = 1; k < g.vertex_count(); ++k) EXPECT_EQ(principal_minor_det(L, k), first);
  }
}

TEST(DetStar, Examples) {
  EXPECT_EQ(det_star(complete_graph(3)), 9);
  WeightedGraph edge(2);
  edge.add_edge(0, 1, Rational(2, 7));
  EXPECT_EQ(det_star(edge), Rational(4, 7));
  WeightedGraph star(4);
  for (int leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf, 1);
  EXPECT_EQ(det_star(star), 4);
}

TEST(DetStar, RejectsDisconnectedAndNonPositive) {
  WeightedGraph g(3);
  g.add_edge(0, 1, 1);
  EXPECT_THROW(det_star(g), GraphError);
  g.add_edge(1, 2, -1);
  EXPECT_THROW(det_star(g), GraphError);
}

TEST(DetStar, AgreesWithFloatingEigenvalues) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 6;
    WeightedGraph g = random_tree(rng, n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v) && uniform_int(rng, 0, 2) == 0) g.add_edge(u, v, random_positive_weight(rng));
    const double exact = to_double(det_star(g));
    EXPECT_NEAR(det_star_eigen(g) / exact, 1.0, 1e-9);
  }
}

TEST(Graph, RejectsInvalidEdges) {
  WeightedGraph g(3);
  EXPECT_THROW(g.add_edge(0, 0, 1), GraphError);
  EXPECT_THROW(g.add_edge(0, 3, 1), GraphError);
  EXPECT_THROW(g.add_edge(0, 1, 0), GraphError);
  g.add_edge(0, 1, 1);
  EXPECT_THROW(g.add_edge(1, 0, 2), GraphError);
}

TEST(Graph, TreePathAndComponents) {
  WeightedGraph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 3, 1);
  EXPECT_TRUE(g.is_tree());
  EXPECT_EQ(g.tree_path(0, 3), (std::vector<int>{0, 1, 2}));
  WeightedGraph h(3);
  h.add_edge(0, 1, 1);
  EXPECT_EQ(h.component_count(), 2);
}

TEST(GraphIo, ParsesRationalAndDecimalValues) {
  const GraphInstance inst = parse_graph(std::string("# comment\nn 3\n  # indented comment\nv 2 -1.25\ne 1 2 3/4\ne 2 3 2e-1\n"));
  EXPECT_EQ(inst.graph.edge_count(), 2);
  EXPECT_EQ(inst.potential[1], Rational(-5, 4));
  EXPECT_EQ(inst.graph.weight(0, 1), Rational(3, 4));
  EXPECT_EQ(inst.graph.weight(1, 2), Rational(1, 5));
}

TEST(GraphIo, ReportsLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("n 2\ne 1 2 1\ne 2 1 1\n"), 3u);
  EXPECT_EQ(line_of("e 1 2 1\n"), 1u);
  EXPECT_EQ(line_of("n 2\nv 3 1\n"), 2u);
  EXPECT_EQ(line_of("n 2\nx 1\n"), 2u);
  EXPECT_EQ(line_of("n 2\n\ne 1 2 1/0\n"), 3u);
  EXPECT_EQ(line_of("n 2\nv 1 1\nv 1 2\n"), 3u);
}

TEST(GraphIo, RoundTrip) {
  Rng rng(3);
  const WeightedGraph g = random_connected_graph(rng, 5);
  const Potential delta = random_potential(rng, 5, 3);
  const GraphInstance back = parse_graph(format_graph(g, delta));
  EXPECT_EQ(back.potential, delta);
  EXPECT_EQ(build_laplacian(back.graph), build_laplacian(g));
}

TEST(Rational, ParseExactDecimals) {
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_rational("-3e2"), 300 * Rational(-1));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("+.5"), Rational(1, 2));
  EXPECT_THROW(parse_rational("1.2.3"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1e"), std::invalid_argument);
}
