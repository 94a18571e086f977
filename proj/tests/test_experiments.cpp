#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "revholder/errors.hpp"
#include "revholder/experiments.hpp"

using namespace revholder;
using doctest::Approx;

namespace {

ExtendedRational X(const char* s) { return ExtendedRational::parse(s); }

std::vector<double> grid() { return {16, 23, 32, 45, 64, 91, 128, 181, 256}; }

ExperimentConfig only(std::vector<std::string> suites) {
  ExperimentConfig c;
  c.suites = std::move(suites);
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fit_slope examples") {
  const auto n = grid();
  std::vector<double> v;
  for (double x : n) v.push_back(std::pow(x, 0.5));
  SlopeFit f = fit_slope(n, v);
  CHECK(f.slope == Approx(0.5).epsilon(1e-13));
  CHECK(f.max_residual <= 1e-12);
  CHECK(std::exp(f.intercept) == Approx(1.0).epsilon(1e-12));

  v.assign(n.size(), 3.0);
  CHECK(fit_slope(n, v).slope == Approx(0.0).scale(1.0));

  v.clear();
  for (std::size_t i = 0; i < n.size(); ++i) v.push_back(std::pow(n[i], -0.25) * (1 + 0.01 * (i % 2 ? -1 : 1)));
  f = fit_slope(n, v);
  CHECK(std::fabs(f.slope + 0.25) <= 0.02);
  CHECK(f.max_residual > 0.0);
}

TEST_CASE("fit_slope errors") {
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), DegenerateGridError);
  CHECK_THROWS_AS(fit_slope(std::vector<double>{4, 4, 4, 4}, std::vector<double>{1, 2, 3, 4}), DegenerateGridError);
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 3, 2, 4}, std::vector<double>{1, 2, 3, 4}), DegenerateGridError);
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3}), DomainError);
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 0, 3, 4}), DomainError);
  CHECK_THROWS_AS(fit_slope(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, NAN, 3, 4}), DomainError);
  // Degenerate grids derive from DomainError.
  CHECK_THROWS_AS(fit_slope(std::vector<double>{}, std::vector<double>{}), DomainError);
}

TEST_CASE("verify_family_rate examples") {
  const ExperimentConfig cfg;
  const ReportRow a = verify_family_rate(cfg, 3, Family::Power, X("2"));
  CHECK(a.predicted == Approx(-0.25));
  CHECK(a.status == "pass");
  CHECK(a.key == "family d=3 power p=2");
  const ReportRow b = verify_family_rate(cfg, 3, Family::Zonal, X("8"));
  CHECK(b.predicted == Approx(-0.25));
  CHECK(b.status == "pass");
  const ReportRow c = verify_family_rate(cfg, 4, Family::Zonal, X("2"));
  CHECK(c.predicted == Approx(-0.5));
  CHECK(c.status == "pass");
  // The critical zonal exponent is refused.
  const ReportRow crit = verify_family_rate(cfg, 3, Family::Zonal, X("4"));
  CHECK(crit.status == "refused-log-critical");
  CHECK_FALSE(crit.failed());
}

TEST_CASE("verify_ratio_lower_bounds examples") {
  const ExperimentConfig cfg;
  const ReportRow a = verify_ratio_lower_bounds(cfg, 3, X("1"), X("2"));
  CHECK(a.predicted == Approx(0.25));
  CHECK(a.status == "pass");
  const ReportRow b = verify_ratio_lower_bounds(cfg, 3, X("2"), X("inf"));
  CHECK(b.predicted == Approx(0.5));
  CHECK(b.status == "pass");
  // p = 3 is the critical exponent of the zonal witness for d = 4.
  const ReportRow c = verify_ratio_lower_bounds(cfg, 4, X("3"), X("inf"));
  CHECK(c.status == "refused-log-critical");
  CHECK(c.predicted == Approx(1.0));
  CHECK(std::isnan(c.measured));
  const ReportRow open = verify_ratio_lower_bounds(cfg, 4, X("5/2"), X("3"));
  CHECK(open.status == "refused-open");
  CHECK(std::isnan(open.predicted));
  CHECK_THROWS_AS(verify_ratio_lower_bounds(cfg, 3, X("2"), X("1")), DomainError);
}

TEST_CASE("default ratio pairs cover the regimes") {
  std::vector<Regime> seen;
  for (int d : {3, 4})
    for (const auto& [p, q] : default_ratio_pairs(d)) seen.push_back(classify(d, p, q).regime);
  for (Regime r : {Regime::I, Regime::III, Regime::IVHigh, Regime::IVLow})
    CHECK(std::find(seen.begin(), seen.end(), r) != seen.end());
  CHECK(default_ratio_pairs(3).size() == 5u);
  CHECK(default_ratio_pairs(4).size() == 3u);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = ExperimentConfig::from_json_text(R"({
    "dims": [3, 4], "family_p": [1, 2], "n_grid": [8, 16, 32, 64], "band_grid": [8, 16],
    "seeds": [5], "budget": {"piece_nodes": 24, "node_cap": 1000000},
    "tolerances": {"slope": 0.1}, "suites": ["exponents"],
    "ratio_pairs": {"3": [[1, 2], ["2", "inf"], ["5/2", 6]]},
    "output": {"csv": "a.csv", "json": "b.json"}, "max_degree": 512})");
  CHECK(c.dims == std::vector<int>{3, 4});
  CHECK(c.family_p == std::vector<double>{1, 2});
  CHECK(c.seeds == std::vector<std::uint64_t>{5});
  CHECK(c.budget.piece_nodes == 24);
  CHECK(c.budget.node_cap == 1000000u);
  CHECK(c.budget.sup_samples == NormBudget{}.sup_samples);
  CHECK(c.slope_tolerance == 0.1);
  CHECK(c.identity_tolerance == 1e-8);
  CHECK(c.max_degree == 512);
  CHECK(c.csv_path == "a.csv");
  REQUIRE(c.ratio_pairs.at(3).size() == 3u);
  CHECK(c.ratio_pairs.at(3)[1].second.is_infinite());
  CHECK(c.ratio_pairs.at(3)[2].first == X("5/2"));
  CHECK(ExperimentConfig::from_json_text("{}").dims == std::vector<int>{3});
}

TEST_CASE("config errors") {
  for (const char* bad : {
           "not json", "[]", R"({"unknown": 1})", R"({"dims": 3})", R"({"dims": [2]})", R"({"dims": [7]})",
           R"({"dims": ["3"]})", R"({"n_grid": [16, 8, 32, 64]})", R"({"n_grid": [8, 16, 32]})",
           R"({"family_p": [0]})", R"({"tolerances": {"slope": -1}})", R"({"tolerances": {"bogus": 1}})",
           R"({"budget": {"piece_nodes": 1}})", R"({"budget": {"extra": 1}})", R"({"suites": ["nope"]})",
           R"({"ratio_pairs": {"3": [[2, 1]]}})", R"({"ratio_pairs": {"9": []}})", R"({"ratio_pairs": {"3": [[1]]}})",
           R"({"seeds": []})", R"({"seeds": [-1]})", R"({"dims": [3.5]})", R"({"max_degree": 0})", R"({"output": {"pdf": "x"}})"})
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(bad), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/revholder.json"), ConfigError);
}

TEST_CASE("budget precheck runs before any computation") {
  ExperimentConfig c = only({"rates"});
  c.n_grid = {16, 32, 64, 4096};
  CHECK_THROWS_AS(c.check_budget(), BudgetError);
  CHECK_THROWS_AS(run_suite(c), BudgetError);
  ExperimentConfig k = only({"kernels"});
  k.band_grid = {8, 4096};
  CHECK_THROWS_AS(run_suite(k), BudgetError);
  ExperimentConfig o = only({"operators"});
  o.budget.node_cap = 1000;
  CHECK_THROWS_AS(run_suite(o), BudgetError);
  // Unselected suites do not count.
  ExperimentConfig e = only({"exponents"});
  e.n_grid = {16, 32, 64, 4096};
  CHECK_NOTHROW(e.check_budget());
}

TEST_CASE("empty suite selection") {
  const Report r = run_suite(only({}));
  CHECK(r.rows.empty());
  CHECK(r.passed());
  CHECK(r.to_csv() == "suite,key,measured,predicted,tolerance,status,detail\n");
}

TEST_CASE("reports are sorted and deterministic") {
  const auto dir = std::filesystem::temp_directory_path();
  ExperimentConfig c = only({"exponents", "quadrature"});
  c.dims = {4, 3};
  c.csv_path = (dir / "revholder_report_a.csv").string();
  c.json_path = (dir / "revholder_report_a.json").string();
  const Report a = run_suite(c);
  const Report b = run_suite(c);
  CHECK(a.passed());
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_json() == b.to_json());
  CHECK(slurp(c.csv_path) == a.to_csv());
  CHECK(slurp(c.json_path) == a.to_json());
  std::filesystem::remove(c.csv_path);
  std::filesystem::remove(c.json_path);
  for (std::size_t i = 1; i < a.rows.size(); ++i)
    CHECK(std::tie(a.rows[i - 1].suite, a.rows[i - 1].key) <= std::tie(a.rows[i].suite, a.rows[i].key));
}

TEST_CASE("report formatting") {
  Report r;
  r.rows.push_back({"b", "k,1", NAN, 0.5, 0.1, "refused-open", "say \"x\""});
  r.rows.push_back({"a", "k2", 1.0, 1.0, 0.0, "pass", ""});
  r.sort();
  CHECK(r.rows.front().suite == "a");
  const std::string csv = r.to_csv();
  CHECK(csv.find("a,k2,1,1,0,pass,\n") != std::string::npos);
  CHECK(csv.find("b,\"k,1\",,0.5,0.1,refused-open,\"say \"\"x\"\"\"\n") != std::string::npos);
  const std::string json = r.to_json();
  CHECK(json.find("\"measured\": null") != std::string::npos);
  CHECK(r.passed());
  r.rows.push_back({"c", "k3", 0, 0, 0, "fail", ""});
  CHECK_FALSE(r.passed());
}

TEST_CASE("helpers") {
  const auto pts = sphere_test_points(4, 10, 3);
  REQUIRE(pts.size() == 40u);
  for (std::size_t i = 0; i < 10; ++i) {
    double n2 = 0.0;
    for (int k = 0; k < 4; ++k) n2 += pts[4 * i + k] * pts[4 * i + k];
    CHECK(n2 == Approx(1.0).epsilon(1e-14));
  }
  CHECK(sphere_test_points(4, 10, 3) == pts);
  CHECK(sphere_test_points(4, 10, 4) != pts);
  const BoundedFunction f = random_polynomial(3, 5, 1);
  CHECK(f.degree == 5);
  const std::vector<double> x{0.0, 0.6, 0.8};
  CHECK(std::isfinite(f.f(x)));
  CHECK(relative_difference(std::vector<double>{1, 2}, std::vector<double>{1, 4}) == Approx(0.5));
  CHECK(suite_names().size() == 6u);
}

TEST_CASE("individual checks pass at small scale") {
  ExperimentConfig cfg;
  cfg.band_grid = {8, 16, 32, 64};
  for (const auto& row : check_kernel_band(cfg, 3)) CHECK(row.status == "pass");
  for (const auto& row : check_difference_band(cfg, 4)) CHECK(row.status == "pass");
  for (const auto& row : check_reproduction(cfg, 3, {2, 5})) CHECK(row.status == "pass");
  for (const auto& row : check_projection_identities(cfg, 3)) CHECK(row.status == "pass");
  for (const auto& row : check_expansion(cfg, 3, 2, 8)) CHECK(row.status == "pass");
  for (const auto& row : check_growth_band(cfg, 3, {8, 16, 32, 64})) CHECK(row.status == "pass");
  for (const auto& row : check_quadrature(cfg, 5)) CHECK(row.status == "pass");
}
