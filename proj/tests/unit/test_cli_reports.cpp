#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dnglue/report.hpp"

using namespace dnglue;

namespace {

const std::string kData = DNGLUE_DATA_DIR;

std::string run_cli(const std::string& args, int* status) {
  const std::string out = ::testing::TempDir() + "dnglue_cli_out.txt";
  const std::string cmd = std::string(DNGLUE_CLI) + " " + args + " > " + out + " 2>&1";
  const int raw = std::system(cmd.c_str());
  *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json planar_json() {
  return Json::parse(R"({"R": 1.0, "holes": [{"x": 0.0, "y": 0.0, "eps": 0.01}], "eps0": 0.3, "modes": {"N": 10, "M": 0}})");
}

}  // namespace

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(std::stod(format_double(std::numbers::pi)), std::numbers::pi);
}

TEST(Csv, TableAndFlatLayouts) {
  Json t;
  t["config"] = config_echo("x", {{"a", 1}});
  t["rows"] = Json::array({{{"p", 0.5}, {"q", 2}}, {{"p", 1.0 / 3}, {"q", 3}}});
  t["ok"] = true;
  EXPECT_EQ(to_csv(t),
            "# config {\"tool\":\"dnglue\",\"report_version\":1,\"subcommand\":\"x\",\"a\":1}\n"
            "p,q\n0.5,2\n0.33333333333333331,3\n# ok true\n");
  Json f;
  f["n"] = 3;
  f["inner"] = {{"x", 0.25}};
  EXPECT_EQ(to_csv(f), "key,value\nn,3\ninner.x,0.25\n");
}

TEST(Kirchhoff, FourCycleReport) {
  const Json r = kirchhoff_report(load_graph(kData + "/four_cycle.graph"), "four_cycle");
  EXPECT_TRUE(r["ok"].get<bool>());
  EXPECT_EQ(r["multiplicity_histogram"], Json({{"2", 8}}));
  bool found = false;
  for (const Json& c : r["coefficients"])
    if (c["monomial"] == Json::array({1, 2})) {
      EXPECT_EQ(c["coefficient"], "70");  // (2 + 5)(3 + 7)
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(r["config"]["graph"], "four_cycle");
}

TEST(Kirchhoff, SingleEdgeReport) {
  const Json r = kirchhoff_report(load_graph(kData + "/single_edge.graph"), "single");
  EXPECT_TRUE(r["ok"].get<bool>());
  // (1/2 + 5/3)(3 + 5/3) − (5/3)² = 3/2 + 5/6 + 5 = 22/3
  EXPECT_EQ(r["det_direct"], "22/3");
}

TEST(Sweep, AllRoutesAgreeAndReportsAreDeterministic) {
  const Json a = sweep_report(7, 40, 6);
  EXPECT_TRUE(a["ok"].get<bool>());
  EXPECT_EQ(a["cases"], 40);
  EXPECT_EQ(a.dump(), sweep_report(7, 40, 6).dump());
  EXPECT_NE(a["config"].dump(), sweep_report(8, 40, 6)["config"].dump());
}

TEST(Sweep, SuiteRespectsRanges) {
  for (const GraphInstance& g : random_graph_suite(3, 60, 5)) {
    EXPECT_GE(g.graph.vertex_count(), 2);
    EXPECT_LE(g.graph.vertex_count(), 5);
    EXPECT_TRUE(g.graph.is_connected());
    for (const Edge& e : g.graph.edges()) {
      EXPECT_NE(e.weight, 0);
      EXPECT_LE(abs(e.weight), 4);
    }
  }
}

TEST(Bounds, SuiteHoldsAndIsDeterministic) {
  BoundsOptions opt;
  opt.trees = 40;
  const Json r = bounds_report(opt);
  EXPECT_TRUE(r["ok"].get<bool>());
  EXPECT_EQ(r["multi_mark"].get<int>() + r["single_mark"].get<int>(), 40);
  EXPECT_EQ(r.dump(), bounds_report(opt).dump());
}

TEST(Annulus, RowsAndConstants) {
  const Json r = annulus_report({0.0, 0.5}, 1e-15);
  ASSERT_EQ(r["rows"].size(), 2u);
  EXPECT_NEAR(r["rows"][0]["log_det_Nhat"].get<double>(), -std::log(2.0), 1e-15);
  EXPECT_NEAR(r["rows"][0]["half_log_detQ_NA"].get<double>(), -std::log(2.0), 1e-14);
  EXPECT_NEAR(r["rows"][1]["log_det_Nhat"].get<double>(), 0.053223703747774585872, 1e-12);
  EXPECT_TRUE(r["ok"].get<bool>());
}

TEST(DiskIdentity, GridReport) {
  const Json r = disk_identity_report({0.3, 1.0}, {5.0}, 1e-15);
  EXPECT_EQ(r["rows"].size(), 2u);
  EXPECT_LT(r["radius_spread"].get<double>(), 1e-8);
  EXPECT_TRUE(r["ok"].get<bool>());
}

TEST(Planar, ConfigRequiresEveryField) {
  EXPECT_NO_THROW(parse_planar_config(planar_json()));
  for (const char* key : {"R", "holes", "eps0", "modes"}) {
    Json j = planar_json();
    j.erase(key);
    EXPECT_THROW(parse_planar_config(j), DomainError) << key;
  }
  Json j = planar_json();
  j["modes"].erase("M");
  EXPECT_THROW(parse_planar_config(j), DomainError);
  j = planar_json();
  j["holes"][0].erase("eps");
  EXPECT_THROW(parse_planar_config(j), DomainError);
  j = planar_json();
  j["R"] = "one";
  EXPECT_THROW(parse_planar_config(j), DomainError);
}

TEST(Planar, AnnulusDiskAndSchedule) {
  const PlanarConfig c = parse_planar_config(planar_json());
  const Json r = planar_report(c, {1e-2, 1e-3}, "inline");
  EXPECT_TRUE(r["ok"].get<bool>());
  for (const Json& row : r["rows"]) EXPECT_NEAR(row["estimate"].get<double>(), 2 * std::numbers::pi, 1e-8);
  EXPECT_EQ(r["config"]["domain"], planar_config_json(c));

  PlanarConfig disk = c;
  disk.holes.clear();
  EXPECT_TRUE(planar_report(disk, {}, "inline")["ok"].get<bool>());

  PlanarConfig uneven = c;
  uneven.holes = {{Complex(-0.5, 0), 0.01}, {Complex(0.5, 0), 0.02}};
  uneven.eps0 = 0.2;
  EXPECT_THROW(planar_report(uneven, {}, "inline"), DomainError);
}

TEST(Tool, ExitCodesAndDeterminism) {
  int status = -1;
  const std::string a = run_cli("kirchhoff " + kData + "/four_cycle.graph", &status);
  EXPECT_EQ(status, 0);
  EXPECT_EQ(Json::parse(a)["multiplicity_histogram"], Json({{"2", 8}}));
  EXPECT_EQ(run_cli("kirchhoff " + kData + "/four_cycle.graph", &status), a);

  const std::string s1 = run_cli("kirchhoff --sweep --cases 20 --n-max 5 --seed 4 --format csv", &status);
  EXPECT_EQ(status, 0);
  EXPECT_EQ(run_cli("kirchhoff --sweep --cases 20 --n-max 5 --seed 4 --format csv", &status), s1);

  // identity tolerance cannot be met with a loose truncation
  run_cli("annulus --tau 0.9 --tol 1e-3", &status);
  EXPECT_EQ(status, 1);

  run_cli("planar " + kData + "/no_such_file.json", &status);
  EXPECT_EQ(status, 2);
  run_cli("disk-identity --rho 0.5", &status);
  EXPECT_EQ(status, 2);
}
