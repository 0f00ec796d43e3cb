// Command line front end: runs scenario check suites, prints pointwise
// curvature and map data, and browses the built-in geometry catalog.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mapgeo/catalog.hpp"
#include "mapgeo/einstein.hpp"
#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"
#include "mapgeo/maps.hpp"
#include "mapgeo/scenario.hpp"

namespace {

using namespace mapgeo;

void print_issues(const ValidationError& e) {
  std::cerr << "scenario is invalid:\n";
  for (const std::string& issue : e.issues()) std::cerr << "  - " << issue << "\n";
}

int run_check(const std::string& file, const CLI::Option* seed_opt,
              std::uint64_t seed, const CLI::Option* tol_opt, double tolerance,
              const std::string& format) {
  Scenario scenario;
  try {
    scenario = load_scenario(file);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    print_issues(e);
    return 2;
  }

  RunOptions options;
  if (*seed_opt) options.seed = seed;
  if (*tol_opt) options.tolerance = tolerance;

  RunResult result = run_checks(scenario, options);
  std::cout << emit_report(result, format);
  return exit_code_for(result);
}

void print_matrix(const char* label, const TensorValue& t,
                  const std::vector<std::string>& names) {
  const int m = t.shape()[0];
  std::printf("%s\n", label);
  for (int a = 0; a < m; ++a) {
    std::printf("  %-8s", names[static_cast<std::size_t>(a)].c_str());
    for (int b = 0; b < m; ++b) std::printf(" % .12e", t({a, b}));
    std::printf("\n");
  }
}

int run_curvature(const std::string& file, const std::vector<double>& at) {
  Scenario scenario;
  try {
    scenario = load_scenario(file);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    print_issues(e);
    return 2;
  }

  const MetricField& g = *scenario.metric;
  if (static_cast<int>(at.size()) != g.dim()) {
    std::cerr << "--at needs " << g.dim() << " coordinates ("
              << at.size() << " given)\n";
    return 2;
  }

  try {
    const Point p(at.begin(), at.end());
    std::printf("scenario: %s\n", scenario.name.c_str());
    std::printf("point:");
    for (std::size_t i = 0; i < p.size(); ++i)
      std::printf(" %s = %.12g%s", g.chart().names[i].c_str(), p[i],
                  i + 1 < p.size() ? "," : "\n");

    print_matrix("metric g_ab:", g.value(p), g.chart().names);
    print_matrix("ricci R_ab:", ricci(g, p), g.chart().names);
    std::printf("scalar curvature: % .12e\n", scalar_curvature(g, p));
    print_matrix("einstein G_ab:", einstein_tensor(g, p), g.chart().names);

    if (scenario.map && scenario.target) {
      const MapField& phi = *scenario.map;
      const MetricField& h = *scenario.target;
      std::printf("map energy density: % .12e\n",
                  energy_density(g, phi, h, p));
      print_matrix("map stress T_ab:", stress_energy(g, phi, h, p),
                   g.chart().names);
      const TensorValue tau = tension_field(g, phi, h, p);
      std::printf("tension tau^i:\n");
      for (int i = 0; i < tau.shape()[0]; ++i)
        std::printf("  %-8s % .12e\n",
                    phi.target().names[static_cast<std::size_t>(i)].c_str(),
                    tau({i}));
      CouplingContext ctx(scenario.kappa, g, phi, h);
      std::printf("field equation residual (max |kappa Ric - pullback|): % .12e\n",
                  einstein_residual_ricci(ctx, p).max_abs());
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_catalog_list() {
  for (const std::string& name : catalog_names()) std::cout << name << "\n";
  return 0;
}

int run_catalog_show(const std::string& name) {
  try {
    std::cout << catalog_describe(name) << "\n";
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-geometric verification of maps between manifolds"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand(
      "check", "Run a scenario's check suite and report pass/fail");
  std::string check_file;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string format = "text";
  check->add_option("file", check_file, "Scenario file (JSON)")->required();
  auto* seed_opt =
      check->add_option("--seed", seed, "Override the sampling seed");
  auto* tol_opt = check->add_option(
      "--tolerance", tolerance, "Default tolerance for checks without one");
  check->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));

  // curvature
  auto* curv = app.add_subcommand(
      "curvature", "Print curvature and map data at one point");
  std::string curv_file;
  std::vector<double> at;
  curv->add_option("file", curv_file, "Scenario file (JSON)")->required();
  curv->add_option("--at", at, "Point, comma separated coordinates")
      ->required()
      ->delimiter(',');

  // catalog
  auto* catalog = app.add_subcommand("catalog", "Browse built-in geometries");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List entry names");
  auto* show = catalog->add_subcommand("show", "Describe one entry");
  std::string show_name;
  show->add_option("name", show_name, "Entry name")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed())
    return run_check(check_file, seed_opt, seed, tol_opt, tolerance, format);
  if (curv->parsed()) return run_curvature(curv_file, at);
  if (list->parsed()) return run_catalog_list();
  if (show->parsed()) return run_catalog_show(show_name);
  return 0;
}
