// Command-line front end: evaluation, norms, operators, the exponent table
// and the verification suites. Exit status 0 on success, 1 on a failed check
// or runtime failure, 2 on a configuration or argument error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "revholder/errors.hpp"
#include "revholder/experiments.hpp"
#include "revholder/exponents.hpp"
#include "revholder/harmonics.hpp"
#include "revholder/operators.hpp"

using namespace revholder;

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_point(const std::string& text, int d) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("point: malformed coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(v.size()) != d) throw ConfigError("point: expected " + std::to_string(d) + " coordinates");
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (std::fabs(std::sqrt(n2) - 1.0) > 1e-12) throw ConfigError("point: not on the unit sphere");
  return v;
}

double parse_p(const std::string& text) {
  try {
    return ExtendedRational::parse(text).to_double();
  } catch (const std::exception&) {
    throw ConfigError("exponent: cannot parse '" + text + "'");
  }
}

NormMethod parse_route(const std::string& s) {
  for (NormMethod m : {NormMethod::ClosedForm, NormMethod::Factorized1D, NormMethod::ProductQuadrature,
                       NormMethod::SupSampling})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown route '" + s + "'");
}

BoundedFunction spec_function(const HarmonicSpec& spec) {
  return {[spec](std::span<const double> x) { return evaluate(spec, x).real(); }, spec.degree()};
}

// Points given with --point, or a few deterministic ones.
std::vector<std::vector<double>> operator_points(const std::vector<std::string>& given, int d) {
  std::vector<std::vector<double>> pts;
  for (const auto& s : given) pts.push_back(parse_point(s, d));
  if (pts.empty()) {
    const auto flat = sphere_test_points(d, 5, 1);
    for (int i = 0; i < 5; ++i) pts.emplace_back(flat.begin() + i * d, flat.begin() + (i + 1) * d);
  }
  return pts;
}

void print_operator(const AppliedOperator& op, const HarmonicSpec& spec, const std::vector<std::vector<double>>& pts) {
  std::cout << "point,input,output\n";
  for (const auto& x : pts) {
    std::string coords;
    for (std::size_t i = 0; i < x.size(); ++i) coords += (i ? " " : "") + num(x[i]);
    std::cout << coords << ',' << num(evaluate(spec, x).real()) << ',' << num(op(x)) << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical harmonic L^p tools: zonal kernels, norms and exponent regimes"};
  app.require_subcommand(1);

  std::string spec_text, point_text, p_text = "2", route_text, csv_path, json_path, config_path, suite = "all";
  std::vector<std::string> points;
  int k = 0, n = 0, d = 3;
  double ratio = 0.0;

  auto* eval = app.add_subcommand("eval", "Evaluate a harmonic at a point");
  eval->add_option("spec", spec_text, "e.g. zonal:d=3,n=12")->required();
  eval->add_option("--point", point_text, "comma-separated unit vector")->required();

  auto* norm = app.add_subcommand("norm", "L^p norm of a harmonic");
  norm->add_option("spec", spec_text)->required();
  norm->add_option("-p", p_text, "exponent, 0 < p <= inf")->required();
  norm->add_option("--route", route_text, "closed-form|factorized-1d|product-quadrature|sup-sampling");

  auto* proj = app.add_subcommand("project", "Apply proj_k to a harmonic");
  proj->add_option("-k", k)->required();
  proj->add_option("spec", spec_text)->required();
  proj->add_option("--point", points, "evaluation point (repeatable)");

  auto* top = app.add_subcommand("toperator", "Apply T_n to a harmonic");
  top->add_option("-n", n)->required();
  top->add_option("spec", spec_text)->required();
  top->add_option("--point", points, "evaluation point (repeatable)");

  auto* regimes = app.add_subcommand("regimes", "Exponent table for one dimension");
  regimes->add_option("-d", d)->required();
  regimes->add_option("--csv", csv_path, "write the table here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "quadrature", "kernels", "operators", "rates", "ratios", "exponents"}));
  verify->add_option("--config", config_path, "JSON experiment configuration");
  verify->add_option("--csv", csv_path, "report CSV path");
  verify->add_option("--json", json_path, "report JSON path");

  auto* pitt = app.add_subcommand("pitt", "Pitt best constant");
  pitt->add_option("-d", d)->required();
  pitt->add_option("-k", k)->required();
  pitt->add_option("-p", p_text)->required();
  pitt->add_option("--ratio", ratio, "empirical harmonic ratio; asymptotic order when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*eval) {
      const HarmonicSpec spec = HarmonicSpec::parse(spec_text);
      const auto x = parse_point(point_text, spec.dims().d());
      const auto v = evaluate(spec, x);
      std::cout << num(v.real()) << ' ' << num(v.imag()) << '\n';
    } else if (*norm) {
      const HarmonicSpec spec = HarmonicSpec::parse(spec_text);
      const double p = parse_p(p_text);
      if (!(p > 0)) throw ConfigError("p must be > 0");
      std::optional<NormMethod> route;
      if (!route_text.empty()) route = parse_route(route_text);
      const NormResult r = lp_norm(spec, p, NormBudget{}, route);
      std::cout << "value=" << num(r.value) << " method=" << to_string(r.method);
      if (std::isinf(p)) std::cout << " slack=" << num(r.slack);
      std::cout << '\n';
    } else if (*proj || *top) {
      const HarmonicSpec spec = HarmonicSpec::parse(spec_text);
      const auto pts = operator_points(points, spec.dims().d());
      const AppliedOperator op = *proj ? project(spec.dims(), k, spec_function(spec))
                                       : t_operator(spec.dims(), n, spec_function(spec));
      print_operator(op, spec, pts);
    } else if (*regimes) {
      const auto grid = default_exponent_grid(d);
      const std::string csv = make_rate_table(d, grid, grid).to_csv();
      if (csv_path.empty()) std::cout << csv;
      else write_file(csv_path, csv);
    } else if (*verify) {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(config_path);
      if (verify->count("--suite") || config_path.empty()) cfg.suites = {suite};
      if (!csv_path.empty()) cfg.csv_path = csv_path;
      if (!json_path.empty()) cfg.json_path = json_path;
      const Report report = run_suite(cfg);
      std::cout << report.to_csv();
      return report.passed() ? 0 : 1;
    } else if (*pitt) {
      const double p = parse_p(p_text);
      const bool empirical = pitt->count("--ratio") > 0;
      const PittConstant c = pitt_constant(d, k, p, empirical ? RatioSource::Empirical : RatioSource::Asymptotic, ratio);
      std::cout << "value=" << num(c.value) << " gamma_part=" << num(c.gamma_part) << " ratio=" << num(c.ratio)
                << (c.order_only ? " order-only" : "") << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
