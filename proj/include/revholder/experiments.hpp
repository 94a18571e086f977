#pragma once

// Verification harness: log-log slope fits of norms and norm ratios against
// predicted exponents, band-stability audits of the kernel bounds, operator
// identity checks and the exponent-table audits. Every check produces report
// rows carrying measured value, prediction, tolerance and status.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "revholder/exponents.hpp"
#include "revholder/harmonics.hpp"
#include "revholder/operators.hpp"

namespace revholder {

struct SlopeFit {
  std::vector<double> n_grid;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // in log-log coordinates
};

// Ordinary least squares of log(values) on log(n). Throws DegenerateGridError
// for fewer than 4 points, a grid that is not strictly increasing, or zero
// spread; DomainError for nonpositive values.
SlopeFit fit_slope(std::span<const double> n_grid, std::span<const double> values);

struct ExperimentConfig {
  std::vector<int> dims{3};
  // Exponents of the power-family rate checks.
  std::vector<double> family_p{0.5, 1.0, 2.0, 4.0};
  // (p, q) pairs of the ratio checks per dimension; dimensions without an
  // entry use default_ratio_pairs.
  std::map<int, std::vector<std::pair<ExtendedRational, ExtendedRational>>> ratio_pairs;
  std::vector<int> n_grid{16, 23, 32, 45, 64, 91, 128, 181, 256};
  // Degrees of the kernel and difference band audits.
  std::vector<int> band_grid{8, 16, 32, 64, 128, 256, 512};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  NormBudget budget;
  // Largest degree any check may request.
  int max_degree = 2048;
  double slope_tolerance = 0.05;
  double identity_tolerance = 1e-8;
  double band_limit = 4.0;
  double audit_tolerance = 1e-10;
  std::vector<std::string> suites{"all"};
  std::string csv_path;
  std::string json_path;

  // Throws ConfigError on unknown keys, wrong types or invalid values.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  // Throws ConfigError for nonpositive tolerances, bad dimensions, etc.
  void validate() const;
  // Throws BudgetError when a selected suite would exceed max_degree or the
  // sphere node cap. Runs before any computation.
  void check_budget() const;
};

std::vector<std::pair<ExtendedRational, ExtendedRational>> default_ratio_pairs(int d);

// Row status values: pass, fail, refused-open, refused-log-critical.
struct ReportRow {
  std::string suite;
  std::string key;
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  std::string status;
  std::string detail;

  bool failed() const { return status == "fail"; }
};

struct Report {
  std::vector<ReportRow> rows;

  bool passed() const;
  // Rows sorted by (suite, key) before printing.
  std::string to_csv() const;
  std::string to_json() const;
  void sort();
};

// Names accepted in ExperimentConfig::suites; "all" selects every one.
const std::vector<std::string>& suite_names();

// Deterministic points on S^{d-1} (Gaussian directions from a Mersenne
// twister), stored point after point.
std::vector<double> sphere_test_points(int d, std::size_t count, std::uint64_t seed);

// prod_{j=1}^{degree} (a_j . x + b_j) with random a_j, b_j: a polynomial of
// the given degree with components in every lower degree.
BoundedFunction random_polynomial(int d, int degree, std::uint64_t seed);

// max |f - g| / max |g| over the test points.
double relative_difference(std::span<const double> f, std::span<const double> g);

// Individual checks. Each returns one or more report rows.
std::vector<ReportRow> check_quadrature(const ExperimentConfig& cfg, int d);
std::vector<ReportRow> check_kernel_band(const ExperimentConfig& cfg, int d);
std::vector<ReportRow> check_difference_band(const ExperimentConfig& cfg, int d);
std::vector<ReportRow> check_reproduction(const ExperimentConfig& cfg, int d, const std::vector<int>& degrees);
std::vector<ReportRow> check_expansion(const ExperimentConfig& cfg, int d, int polynomials, int max_degree);
std::vector<ReportRow> check_projection_identities(const ExperimentConfig& cfg, int d);
std::vector<ReportRow> check_growth_band(const ExperimentConfig& cfg, int d, const std::vector<int>& degrees);
ReportRow verify_family_rate(const ExperimentConfig& cfg, int d, Family family, const ExtendedRational& p);
ReportRow verify_ratio_lower_bounds(const ExperimentConfig& cfg, int d, const ExtendedRational& p,
                                    const ExtendedRational& q);
// Zonal rate checks at p = 2 x critical and p = 2.
std::vector<ReportRow> check_zonal_rates(const ExperimentConfig& cfg, int d);
std::vector<ReportRow> check_exponent_table(int d);
std::vector<ReportRow> check_restriction_sweep(int d, int grid = 200);
std::vector<ReportRow> check_pitt(int d);

// Runs the selected suites, writes csv_path/json_path when set.
Report run_suite(const ExperimentConfig& cfg);

}  // namespace revholder
