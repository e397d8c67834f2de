// dnglue: experiment driver. Exit 0 when every check of the run holds, 1 when
// a check fails, 2 on invalid input or numerical failure.

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <numbers>

#include "dnglue/report.hpp"

using namespace dnglue;

namespace {

struct Common {
  std::uint64_t seed = 1;
  double tol = 1e-15;
  int modes = 0;
  std::string out;
  std::string format = "json";
};

void emit(const Json& report, const Common& c) {
  const std::string text = c.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact graph determinants, annulus jump operators and planar degeneration experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", common.tol, "Truncation tolerance for mode sums")->capture_default_str();
  app.add_option("--modes", common.modes, "Fourier cutoff N (planar; overrides the domain file)");
  app.add_option("--out", common.out, "Write the report here instead of stdout");
  app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto* kirchhoff = app.add_subcommand("kirchhoff", "Three routes to det(Δ + D) for a graph file, or a random sweep");
  std::string graph_path;
  bool sweep = false;
  int n_max = 7, cases = 200, max_edges = EnumerationLimits{}.max_edges;
  kirchhoff->add_option("graph", graph_path, "Graph file");
  kirchhoff->add_flag("--sweep", sweep, "Run the random-graph suite instead");
  kirchhoff->add_option("--n-max", n_max, "Largest vertex count in the sweep")->capture_default_str();
  kirchhoff->add_option("--cases", cases, "Sweep size")->capture_default_str();
  kirchhoff->add_option("--max-edges", max_edges, "Enumeration limit on edges")->capture_default_str();

  auto* annulus = app.add_subcommand("annulus", "Annulus constants and the gluing identity on a τ grid");
  std::vector<double> taus{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  annulus->add_option("--tau", taus, "τ values")->delimiter(',')->capture_default_str();

  auto* disk = app.add_subcommand("disk-identity", "Disk factorization on an (r, ρ) grid");
  std::vector<double> radii{0.3, 1.0, 2.0}, rhos{std::numbers::e, 5.0, 20.0};
  disk->add_option("--r", radii, "Radii")->delimiter(',')->capture_default_str();
  disk->add_option("--rho", rhos, "Moduli ρ > 1")->delimiter(',')->capture_default_str();

  auto* planar = app.add_subcommand("planar", "Degeneration experiment on a circular-hole domain");
  std::string domain_path;
  std::vector<double> schedule;
  planar->add_option("domain", domain_path, "Domain JSON file")->required();
  planar->add_option("--eps", schedule, "Decreasing hole radii")->delimiter(',');

  auto* bounds = app.add_subcommand("bounds", "Tree comparison inequalities on random weighted trees");
  BoundsOptions bopt;
  std::string kappa = "2";
  bounds->add_option("--trees", bopt.trees, "Number of random trees")->capture_default_str();
  bounds->add_option("--n-max", bopt.n_max, "Largest tree size")->capture_default_str();
  bounds->add_option("--kappa", kappa, "Band parameter κ ≥ 1 (rational)")->capture_default_str();
  bounds->add_option("--samples", bopt.band_samples, "Band samples per tree")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    Json report;
    if (kirchhoff->parsed()) {
      EnumerationLimits limits;
      limits.max_edges = max_edges;
      if (sweep) {
        report = sweep_report(common.seed, cases, n_max, limits);
      } else {
        if (graph_path.empty()) throw std::invalid_argument("kirchhoff needs a graph file or --sweep");
        report = kirchhoff_report(load_graph(graph_path), graph_path, limits);
      }
    } else if (annulus->parsed()) {
      report = annulus_report(taus, common.tol);
    } else if (disk->parsed()) {
      report = disk_identity_report(radii, rhos, common.tol);
    } else if (planar->parsed()) {
      std::ifstream f(domain_path);
      if (!f) throw std::invalid_argument("cannot read " + domain_path);
      Json j;
      try {
        j = Json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("domain file: ") + e.what());
      }
      PlanarConfig c = parse_planar_config(j);
      if (common.modes > 0) c.N = common.modes;
      report = planar_report(c, schedule, domain_path);
    } else if (bounds->parsed()) {
      bopt.seed = common.seed;
      bopt.kappa = parse_rational(kappa);
      report = bounds_report(bopt);
    }
    emit(report, common);
    return report.value("ok", false) ? 0 : 1;
  } catch (const SolverError& e) {
    std::cerr << "dnglue: " << e.what() << " (diagnostic " << format_double(e.diagnostic()) << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "dnglue: " << e.what() << "\n";
  }
  return 2;
}
