#pragma once

// Line-oriented graph text format:
//
//   # comment
//   n <count>              vertex count, first record
//   v <i> <delta>          potential at vertex i (1-based), default 0
//   e <i> <j> <weight>     edge i-j
//
// Numbers are "p/q" rationals or finite decimals, converted exactly.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "dnglue/errors.hpp"
#include "dnglue/graph_core.hpp"
#include "dnglue/rational.hpp"

namespace dnglue {

struct GraphInstance {
  WeightedGraph graph;
  Potential potential;
};

inline GraphInstance parse_graph(std::istream& in) {
  GraphInstance out;
  bool have_n = false;
  std::vector<bool> potential_seen;
  std::string line;
  std::size_t line_no = 0;

  auto number = [&](const std::string& token) {
    try {
      return parse_rational(token);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  };
  auto vertex = [&](const std::string& token) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(token, &used);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad vertex index '" + token + "'");
    }
    if (used != token.size() || v < 1 || v > out.graph.vertex_count())
      throw ParseError(line_no, "vertex index '" + token + "' out of range");
    return static_cast<int>(v - 1);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok[0].front() == '#') continue;

    const std::string& kind = tok[0];
    if (kind == "n") {
      if (have_n) throw ParseError(line_no, "duplicate 'n' record");
      if (tok.size() != 2) throw ParseError(line_no, "expected 'n <count>'");
      long count = 0;
      try {
        std::size_t used = 0;
        count = std::stol(tok[1], &used);
        if (used != tok[1].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad vertex count '" + tok[1] + "'");
      }
      if (count < 1 || count > 1000) throw ParseError(line_no, "vertex count out of range");
      out.graph = WeightedGraph(static_cast<int>(count));
      out.potential.assign(static_cast<std::size_t>(count), Rational(0));
      potential_seen.assign(static_cast<std::size_t>(count), false);
      have_n = true;
      continue;
    }
    if (!have_n) throw ParseError(line_no, "'n <count>' must come first");

    if (kind == "v") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'v <i> <delta>'");
      const int i = vertex(tok[1]);
      if (potential_seen[static_cast<std::size_t>(i)]) throw ParseError(line_no, "duplicate potential for vertex " + tok[1]);
      potential_seen[static_cast<std::size_t>(i)] = true;
      out.potential[static_cast<std::size_t>(i)] = number(tok[2]);
    } else if (kind == "e") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'e <i> <j> <weight>'");
      const int i = vertex(tok[1]);
      const int j = vertex(tok[2]);
      try {
        out.graph.add_edge(i, j, number(tok[3]));
      } catch (const GraphError& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "unknown record '" + kind + "'");
    }
  }
  if (!have_n) throw ParseError(line_no, "missing 'n <count>' record");
  return out;
}

inline GraphInstance parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline GraphInstance load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

inline std::string format_graph(const WeightedGraph& g, const Potential& delta) {
  std::ostringstream out;
  out << "n " << g.vertex_count() << "\n";
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] != 0) out << "v " << i + 1 << " " << to_string(delta[i]) << "\n";
  for (const Edge& e : g.edges()) out << "e " << e.u + 1 << " " << e.v + 1 << " " << to_string(e.weight) << "\n";
  return out.str();
}

}  // namespace dnglue
