#pragma once

// Experiment drivers with machine-readable reports, shared by the command
// line tool and its tests. Reports are ordered JSON objects carrying a
// config echo and an "ok" flag; table reports keep their rows under "rows".

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dnglue/graph_io.hpp"
#include "dnglue/matree.hpp"
#include "dnglue/planar_solver.hpp"
#include "dnglue/random_instances.hpp"
#include "dnglue/regdet.hpp"

namespace dnglue {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Json config_echo(const std::string& subcommand, Json fields) {
  Json c;
  c["tool"] = "dnglue";
  c["report_version"] = kReportVersion;
  c["subcommand"] = subcommand;
  for (auto& [k, v] : fields.items()) c[k] = v;
  return c;
}

/// Rows as CSV with a leading "# config" comment; other reports flatten to
/// key,value lines.
inline std::string to_csv(const Json& report) {
  std::ostringstream out;
  auto cell = [](const Json& v) -> std::string {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_null()) return "nan";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  if (report.contains("config")) out << "# config " << report["config"].dump() << "\n";
  if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty()) {
    const Json& rows = report["rows"];
    bool first = true;
    for (auto& [k, v] : rows[0].items()) {
      out << (first ? "" : ",") << k;
      first = false;
    }
    out << "\n";
    for (const Json& row : rows) {
      first = true;
      for (auto& [k, v] : row.items()) {
        out << (first ? "" : ",") << cell(v);
        first = false;
      }
      out << "\n";
    }
    for (auto& [k, v] : report.items())
      if (k != "rows" && k != "config") out << "# " << k << " " << cell(v) << "\n";
    return out.str();
  }
  std::function<void(const std::string&, const Json&)> flat = [&](const std::string& prefix, const Json& v) {
    if (v.is_object()) {
      for (auto& [k, x] : v.items()) flat(prefix.empty() ? k : prefix + "." + k, x);
    } else {
      out << prefix << "," << cell(v) << "\n";
    }
  };
  out << "key,value\n";
  for (auto& [k, v] : report.items())
    if (k != "config") flat(k, v);
  return out.str();
}

// ---------------------------------------------------------------------------
// Graph side.

inline Json kirchhoff_report(const GraphInstance& inst, const std::string& source, const EnumerationLimits& limits = {}) {
  const WeightedGraph& g = inst.graph;
  const Rational direct = det_exact(laplacian_with_potential(g, inst.potential));
  const KirchhoffPairsReport pairs = kirchhoff_pairs_report(g, inst.potential, limits);
  const ForestExpansionReport forests = kirchhoff_forests_report(g, inst.potential, limits);

  Json r;
  r["config"] = config_echo("kirchhoff", {{"graph", source}});
  r["vertices"] = g.vertex_count();
  r["edges"] = g.edge_count();
  Json marks = Json::array();
  for (int v : marked_vertices(inst.potential)) marks.push_back(v + 1);
  r["marked"] = marks;
  r["det_direct"] = rational_json(direct);
  r["det_pairs"] = rational_json(pairs.value);
  r["det_forests"] = rational_json(forests.value);
  r["det_direct_approx"] = to_double(direct);
  r["pairs_equal"] = pairs.value == direct;
  r["forests_equal"] = forests.value == direct;
  r["tree_count"] = pairs.tree_count;
  r["pair_count"] = pairs.pair_count;
  r["forest_count"] = pairs.forest_count;
  Json hist = Json::object();
  for (const auto& [m, count] : pairs.multiplicity_histogram) hist[std::to_string(m)] = count;
  r["multiplicity_histogram"] = hist;
  Json coeffs = Json::array();
  for (const auto& [set, value] : pairs.coefficients) {
    Json vs = Json::array();
    for (int v = 0; v < g.vertex_count(); ++v)
      if (set >> v & 1U) vs.push_back(v + 1);
    coeffs.push_back({{"monomial", vs}, {"coefficient", rational_json(value)}});
  }
  r["coefficients"] = coeffs;
  r["ok"] = pairs.value == direct && forests.value == direct;
  return r;
}

/// Seeded random suite: connected graphs on 2..n_max vertices with signed
/// rational weights and 0..n marks.
inline std::vector<GraphInstance> random_graph_suite(std::uint64_t seed, int cases, int n_max) {
  if (n_max < 2) throw GraphError("suite needs n_max ≥ 2");
  Rng rng(seed);
  std::vector<GraphInstance> out;
  for (int c = 0; c < cases; ++c) {
    const int n = static_cast<int>(uniform_int(rng, 2, n_max));
    WeightedGraph g = random_connected_graph(rng, n);
    const int marks = static_cast<int>(uniform_int(rng, 0, n));
    out.push_back({std::move(g), random_potential(rng, n, marks)});
  }
  return out;
}

struct GraphSuiteSummary {
  int cases = 0;
  int pairs_equal = 0;
  int forests_equal = 0;
  int single_mark_holds = 0;   ///< det(Δ + δ_v e_v) = δ_v det Δ^{[v]}
  int tree_sum_holds = 0;      ///< Σ_i det Δ^{[i]} = n Σ_T ω(T)
  int minors_independent = 0;  ///< det Δ^{[i]} equal for all i
  int induction_checked = 0;
  int induction_holds = 0;
  double enumeration_seconds = 0;  ///< pairs + forests + direct; not part of the report
  bool all() const {
    return pairs_equal == cases && forests_equal == cases && single_mark_holds == cases && tree_sum_holds == cases &&
           minors_independent == cases && induction_holds == induction_checked;
  }
};

inline GraphSuiteSummary run_graph_suite(const std::vector<GraphInstance>& suite, const EnumerationLimits& limits = {}) {
  GraphSuiteSummary s;
  for (const GraphInstance& inst : suite) {
    const WeightedGraph& g = inst.graph;
    const int n = g.vertex_count();
    ++s.cases;

    const auto t0 = std::chrono::steady_clock::now();
    const Rational direct = det_exact(laplacian_with_potential(g, inst.potential));
    const Rational pairs = kirchhoff_det_pairs(g, inst.potential, limits);
    const Rational forests = kirchhoff_det_forests(g, inst.potential, limits);
    s.enumeration_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    s.pairs_equal += pairs == direct;
    s.forests_equal += forests == direct;

    const RationalMatrix lap = build_laplacian(g);
    std::vector<Rational> minors;
    for (int i = 0; i < n; ++i) minors.push_back(principal_minor_det(lap, i));
    bool same = true;
    Rational minor_sum = 0;
    for (const Rational& m : minors) {
      same = same && m == minors[0];
      minor_sum += m;
    }
    s.minors_independent += same;
    Rational tree_sum = 0;
    for (const SpanningTree& t : enumerate_spanning_trees(g, limits)) tree_sum += detail::weight_product(g, t.edges);
    s.tree_sum_holds += minor_sum == Rational(n) * tree_sum;

    const std::vector<int> marks = marked_vertices(inst.potential);
    const int v = marks.empty() ? 0 : marks[0];
    const Rational dv = marks.empty() ? Rational(1) : inst.potential[static_cast<std::size_t>(v)];
    Potential single(static_cast<std::size_t>(n), Rational(0));
    single[static_cast<std::size_t>(v)] = dv;
    s.single_mark_holds += det_exact(laplacian_with_potential(g, single)) == dv * minors[static_cast<std::size_t>(v)];

    for (int k : marks) {
      ++s.induction_checked;
      s.induction_holds += induction_step_check(g, inst.potential, k).holds;
    }
  }
  return s;
}

inline Json sweep_report(std::uint64_t seed, int cases, int n_max, const EnumerationLimits& limits = {}) {
  const GraphSuiteSummary s = run_graph_suite(random_graph_suite(seed, cases, n_max), limits);
  Json r;
  r["config"] = config_echo("kirchhoff", {{"sweep", true}, {"seed", seed}, {"cases", cases}, {"n_max", n_max}});
  r["cases"] = s.cases;
  r["pairs_equal"] = s.pairs_equal;
  r["forests_equal"] = s.forests_equal;
  r["single_mark_holds"] = s.single_mark_holds;
  r["tree_sum_holds"] = s.tree_sum_holds;
  r["minors_independent"] = s.minors_independent;
  r["induction_checked"] = s.induction_checked;
  r["induction_holds"] = s.induction_holds;
  r["ok"] = s.all();
  return r;
}

struct BoundsOptions {
  std::uint64_t seed = 1;
  int trees = 160;
  int n_max = 6;
  Rational kappa = Rational(2);
  int band_samples = 20;
  std::vector<Rational> kappa0s{Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
  double perturbation_tolerance = 0.1;
};

struct BoundsSummary {
  int trees = 0;
  int multi_mark = 0;          ///< k ≥ 2 instances of the inequality
  int multi_mark_holds = 0;
  int single_mark = 0;
  int single_mark_identity = 0;
  int lower_bound_holds = 0;
  int band_within = 0;
  Rational band_min, band_max;
  int perturbation_close = 0;  ///< |ratio − 1| ≤ tolerance at the last κ0
  int perturbation_monotone = 0;
  double worst_final_deviation = 0;
  bool all() const {
    return multi_mark_holds == multi_mark && single_mark_identity == single_mark && lower_bound_holds == trees &&
           band_within == trees && perturbation_close == trees;
  }
};

/// Random positive trees on 2..n_max vertices; every fourth tree carries a
/// single mark, the rest 2..n marks.
inline BoundsSummary run_bounds_suite(const BoundsOptions& opt) {
  Rng rng(opt.seed);
  BoundsSummary s;
  bool first = true;
  for (int i = 0; i < opt.trees; ++i) {
    const int n = static_cast<int>(uniform_int(rng, 2, opt.n_max));
    const WeightedGraph t = random_tree(rng, n);
    const int k = i % 4 == 0 ? 1 : static_cast<int>(uniform_int(rng, 2, n));
    const Potential delta = random_potential(rng, n, k, true);
    const std::uint64_t sub_seed = rng();
    ++s.trees;

    const EstimateReport e = estimate_bounds(t, delta);
    if (e.identity_branch) {
      ++s.single_mark;
      s.single_mark_identity += e.holds;
    } else {
      ++s.multi_mark;
      s.multi_mark_holds += e.holds;
    }
    s.lower_bound_holds += e.lower_bound_holds;

    const BandReport b = band_comparison(t, delta, opt.kappa, opt.band_samples, sub_seed);
    s.band_within += b.within;
    const Rational lo = b.min_ratio * b.bound, hi = b.max_ratio / b.bound;  // both ≤ 1 inside the band
    if (first || lo < s.band_min) s.band_min = lo;
    if (first || hi > s.band_max) s.band_max = hi;
    first = false;

    const PerturbationReport p = complete_graph_perturbation(t, delta, opt.kappa0s, sub_seed ^ 0x9e3779b97f4a7c15ULL);
    const PerturbationSample& last = p.sweep.back();
    const double dev = last.vacuous ? std::numeric_limits<double>::infinity() : std::abs(to_double(last.ratio) - 1);
    s.perturbation_close += dev <= opt.perturbation_tolerance;
    s.perturbation_monotone += p.monotone;
    s.worst_final_deviation = std::max(s.worst_final_deviation, dev);
  }
  return s;
}

inline Json bounds_report(const BoundsOptions& opt) {
  const BoundsSummary s = run_bounds_suite(opt);
  Json k0 = Json::array();
  for (const Rational& q : opt.kappa0s) k0.push_back(rational_json(q));
  Json r;
  r["config"] = config_echo("bounds", {{"seed", opt.seed},
                                       {"trees", opt.trees},
                                       {"n_max", opt.n_max},
                                       {"kappa", rational_json(opt.kappa)},
                                       {"band_samples", opt.band_samples},
                                       {"kappa0", k0},
                                       {"perturbation_tolerance", opt.perturbation_tolerance}});
  r["trees"] = s.trees;
  r["multi_mark"] = s.multi_mark;
  r["multi_mark_holds"] = s.multi_mark_holds;
  r["single_mark"] = s.single_mark;
  r["single_mark_identity"] = s.single_mark_identity;
  r["lower_bound_holds"] = s.lower_bound_holds;
  r["band_within"] = s.band_within;
  r["perturbation_close"] = s.perturbation_close;
  r["perturbation_monotone"] = s.perturbation_monotone;
  r["worst_final_deviation"] = s.worst_final_deviation;
  r["ok"] = s.all();
  return r;
}

// ---------------------------------------------------------------------------
// Analytic side.

inline Json annulus_report(const std::vector<double>& taus, double truncation_tolerance, double identity_tolerance = 1e-12,
                           double quadrature_tolerance = 1e-6) {
  const TruncationOptions opt{truncation_tolerance, 1'000'000};
  const double at_zero = det_prime_Nhat(0.0, opt).log_det;
  Json rows = Json::array();
  bool ok = true;
  for (double tau : taus) {
    const double nhat = det_prime_Nhat(tau, opt).log_det;
    const double half_na = 0.5 * detQ_prime_NA(tau, 1.0, opt).log_det;
    const double quad = integrate_trace_derivative(tau, at_zero);
    const double residual = nhat - half_na;
    ok = ok && std::abs(residual) < identity_tolerance && std::abs(quad - nhat) < quadrature_tolerance;
    rows.push_back({{"tau", tau},
                    {"log_det_Nhat", nhat},
                    {"half_log_detQ_NA", half_na},
                    {"residual", residual},
                    {"quadrature", quad},
                    {"quadrature_error", quad - nhat}});
  }
  Json r;
  r["config"] = config_echo("annulus", {{"tau", taus},
                                        {"truncation_tolerance", truncation_tolerance},
                                        {"identity_tolerance", identity_tolerance},
                                        {"quadrature_tolerance", quadrature_tolerance}});
  r["rows"] = rows;
  r["ok"] = ok;
  return r;
}

inline Json disk_identity_report(const std::vector<double>& radii, const std::vector<double>& rhos,
                                 double truncation_tolerance, double tolerance = 1e-8) {
  const TruncationOptions opt{truncation_tolerance, 1'000'000};
  Json rows = Json::array();
  bool ok = true;
  double spread = 0;
  for (double rho : rhos) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double r : radii) {
      const DiskIdentityReport d = disk_identity(r, rho, opt);
      ok = ok && std::abs(d.residual) < tolerance;
      lo = std::min(lo, d.residual);
      hi = std::max(hi, d.residual);
      rows.push_back({{"r", r},
                      {"rho", rho},
                      {"log_det_N", d.log_det_N},
                      {"log_det_star_NA", d.log_det_star_NA},
                      {"product", d.product},
                      {"residual", d.residual},
                      {"truncation", d.truncation}});
    }
    spread = std::max(spread, hi - lo);
  }
  ok = ok && spread < tolerance;
  Json r;
  r["config"] = config_echo("disk-identity",
                            {{"r", radii}, {"rho", rhos}, {"truncation_tolerance", truncation_tolerance}, {"tolerance", tolerance}});
  r["rows"] = rows;
  r["radius_spread"] = spread;
  r["ok"] = ok;
  return r;
}

// ---------------------------------------------------------------------------
// Planar experiment.

struct PlanarConfig {
  double R = 0;
  std::vector<Circle> holes;
  double eps0 = 0;
  int N = 0;
  int M = 0;  ///< 0 selects 4N + 16
};

/// Domain file {R, holes: [{x, y, eps}], eps0, modes: {N, M}}. Every field
/// is required.
inline PlanarConfig parse_planar_config(const Json& j) {
  auto need = [](const Json& obj, const char* key) -> const Json& {
    if (!obj.is_object() || !obj.contains(key)) throw DomainError(std::string("domain file: missing field '") + key + "'");
    return obj[key];
  };
  PlanarConfig c;
  try {
    c.R = need(j, "R").get<double>();
    c.eps0 = need(j, "eps0").get<double>();
    const Json& modes = need(j, "modes");
    c.N = need(modes, "N").get<int>();
    c.M = need(modes, "M").get<int>();
    const Json& holes = need(j, "holes");
    if (!holes.is_array()) throw DomainError("domain file: 'holes' must be an array");
    for (const Json& h : holes)
      c.holes.push_back({Complex(need(h, "x").get<double>(), need(h, "y").get<double>()), need(h, "eps").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("domain file: ") + e.what());
  }
  if (c.N < 1) throw DomainError("domain file: modes.N must be at least 1");
  if (c.M < 0) throw DomainError("domain file: modes.M must be nonnegative (0 selects 4N + 16)");
  return c;
}

inline Json planar_config_json(const PlanarConfig& c) {
  Json holes = Json::array();
  for (const Circle& h : c.holes) holes.push_back({{"x", h.center.real()}, {"y", h.center.imag()}, {"eps", h.radius}});
  return {{"R", c.R}, {"holes", holes}, {"eps0", c.eps0}, {"modes", {{"N", c.N}, {"M", c.M}}}};
}

/// Runs the degeneration experiment. Without an explicit schedule the holes'
/// own (common) radius is the single ε.
inline Json planar_report(const PlanarConfig& c, std::vector<double> schedule, const std::string& source,
                          double invariant_tolerance = 1e-8, double oracle_tolerance = 1e-6) {
  std::vector<Complex> centers;
  for (const Circle& h : c.holes) centers.push_back(h.center);
  if (schedule.empty() && !c.holes.empty()) {
    for (const Circle& h : c.holes)
      if (h.radius != c.holes[0].radius) throw DomainError("holes of different radii need an explicit --eps schedule");
    schedule.push_back(c.holes[0].radius);
  }
  const PlanarReport rep = planar_asymptotics_experiment(c.R, centers, schedule, c.eps0, {c.N, c.M});

  Json rows = Json::array();
  for (const PlanarRow& row : rep.rows)
    rows.push_back({{"eps", row.eps},
                    {"log_det_N", row.log_det_N},
                    {"log_det_N_raw", row.log_det_N_raw},
                    {"diff", row.diff},
                    {"invariant", row.invariant},
                    {"estimate", row.estimate},
                    {"exact", row.exact},
                    {"asymmetry_defect", row.asymmetry_defect}});

  bool ok = true;
  Json checks = Json::object();
  if (c.holes.empty()) {
    const double err = std::abs(rep.rows[0].invariant - 1);
    checks["disk_invariant_error"] = err;
    checks["disk_identity_residual"] = rep.disk_identity_residual;
    ok = err < invariant_tolerance && (std::isnan(rep.disk_identity_residual) || std::abs(rep.disk_identity_residual) < invariant_tolerance);
  } else if (rep.concentric) {
    double worst = 0;
    for (const PlanarRow& row : rep.rows) worst = std::max(worst, std::abs(row.estimate - 2 * std::numbers::pi));
    checks["annulus_estimate_error"] = worst;
    checks["concentric_oracle_error"] = rep.concentric_oracle_error;
    ok = worst < invariant_tolerance && rep.concentric_oracle_error < oracle_tolerance;
  } else {
    checks["cauchy"] = rep.cauchy;
    checks["final_relative_error"] = rep.rows.back().estimate / rep.target - 1;
    ok = rep.cauchy;
  }

  Json r;
  r["config"] = config_echo("planar", {{"domain_file", source},
                                       {"domain", planar_config_json(c)},
                                       {"eps", schedule},
                                       {"invariant_tolerance", invariant_tolerance},
                                       {"oracle_tolerance", oracle_tolerance}});
  r["rows"] = rows;
  r["holes"] = rep.holes;
  r["concentric"] = rep.concentric;
  r["target"] = rep.target;
  r["graph_factor"] = rep.graph_factor;
  r["log_det_N_limit"] = rep.log_det_N_limit;
  r["checks"] = checks;
  r["ok"] = ok;
  return r;
}

}  // namespace dnglue
