#include "mapgeo/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "mapgeo/conditions.hpp"
#include "mapgeo/einstein.hpp"
#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"
#include "mapgeo/maps.hpp"

namespace mapgeo {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Collects every structural problem instead of stopping at the first.
struct Issues {
  std::vector<std::string> list;
  void add(std::string s) { list.push_back(std::move(s)); }
  bool any() const { return !list.empty(); }
};

const std::set<std::string>& known_checks() {
  static const std::set<std::string> names = {
      "einstein_residual", "residual_equivalence", "trace_relation",
      "tension",           "divergence_T",         "totally_geodesic",
      "gradient_identity", "degeneracy",           "radiation",
      "certificates",      "energy_conditions"};
  return names;
}

const std::set<std::string>& vector_checks() {
  static const std::set<std::string> names = {
      "degeneracy", "radiation", "certificates", "energy_conditions"};
  return names;
}

const std::set<std::string>& map_checks() {
  static const std::set<std::string> names = {
      "einstein_residual", "residual_equivalence", "trace_relation",
      "tension",           "divergence_T",         "totally_geodesic",
      "gradient_identity", "degeneracy",           "energy_conditions"};
  return names;
}

const std::set<std::string>& certificate_names() {
  static const std::set<std::string> names = {
      "killing", "parallel", "hypersurface_orthogonal", "lightlike"};
  return names;
}

std::optional<std::vector<std::string>> parse_name_list(const json& j,
                                                        const char* what,
                                                        Issues& issues) {
  if (!j.is_array()) {
    issues.add(std::string(what) + " must be an array of strings");
    return std::nullopt;
  }
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) {
      issues.add(std::string(what) + " must contain only strings");
      return std::nullopt;
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::optional<Chart> parse_chart(const json& j, Issues& issues) {
  if (!j.is_object()) {
    issues.add("chart must be an object with names and box");
    return std::nullopt;
  }
  if (!j.contains("names") || !j.contains("box")) {
    issues.add("chart needs both names and box");
    return std::nullopt;
  }
  auto names = parse_name_list(j.at("names"), "chart.names", issues);
  if (!names || names->empty()) {
    if (names && names->empty()) issues.add("chart.names is empty");
    return std::nullopt;
  }
  const json& box_j = j.at("box");
  if (!box_j.is_array() || box_j.size() != names->size()) {
    issues.add("chart.box must pair one [low, high] with every coordinate");
    return std::nullopt;
  }
  std::vector<std::pair<double, double>> box;
  for (const auto& item : box_j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number()) {
      issues.add("chart.box entries must be numeric pairs [low, high]");
      return std::nullopt;
    }
    box.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  Chart chart = make_box_chart(*names, box);
  if (j.contains("periodic")) {
    const json& per = j.at("periodic");
    if (!per.is_array() || per.size() != names->size()) {
      issues.add("chart.periodic must list one boolean per coordinate");
      return std::nullopt;
    }
    for (std::size_t i = 0; i < per.size(); ++i) {
      if (!per[i].is_boolean()) {
        issues.add("chart.periodic must list one boolean per coordinate");
        return std::nullopt;
      }
      if (per[i].get<bool>()) {
        chart.kinds[i] = CoordKind::Periodic;
        chart.periods[i] = box[i].second - box[i].first;
      }
    }
  }
  try {
    chart.validate();
  } catch (const Error& e) {
    issues.add(std::string("chart: ") + e.what());
    return std::nullopt;
  }
  return chart;
}

std::optional<std::vector<Expression>> parse_expressions(
    const json& j, const Chart& chart, std::size_t expected, const char* what,
    Issues& issues) {
  if (!j.is_array() || j.size() != expected) {
    issues.add(std::string(what) + " must list exactly " +
               std::to_string(expected) + " expression strings");
    return std::nullopt;
  }
  auto vars = make_vars(chart.names);
  std::vector<Expression> out;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      issues.add(std::string(what) + "[" + std::to_string(i) +
                 "] must be an expression string");
      ok = false;
      continue;
    }
    try {
      out.push_back(Expression::parse(j[i].get<std::string>(), vars));
    } catch (const Error& e) {
      issues.add(std::string(what) + "[" + std::to_string(i) + "] = '" +
                 j[i].get<std::string>() + "': " + e.what());
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return out;
}

std::optional<MetricField> parse_metric_block(const json& j, const Chart& chart,
                                              const char* what,
                                              Issues& issues) {
  if (!j.is_object() || !j.contains("lower_triangle") ||
      !j.contains("signature")) {
    issues.add(std::string(what) +
               " must be an object with lower_triangle and signature");
    return std::nullopt;
  }
  const std::size_t m = chart.names.size();
  auto tri = parse_expressions(j.at("lower_triangle"), chart,
                               m * (m + 1) / 2,
                               (std::string(what) + ".lower_triangle").c_str(),
                               issues);
  const json& sig_j = j.at("signature");
  std::vector<int> sig;
  if (!sig_j.is_array() || sig_j.size() != m) {
    issues.add(std::string(what) + ".signature must list " +
               std::to_string(m) + " entries of +1 or -1");
  } else {
    for (const auto& item : sig_j) {
      if (!item.is_number_integer() ||
          std::abs(item.get<int>()) != 1) {
        issues.add(std::string(what) + ".signature entries must be +1 or -1");
        sig.clear();
        break;
      }
      sig.push_back(item.get<int>());
    }
  }
  if (!tri || sig.size() != m) return std::nullopt;
  try {
    return MetricField(chart, std::move(*tri), sig);
  } catch (const Error& e) {
    issues.add(std::string(what) + ": " + e.what());
    return std::nullopt;
  }
}

void parse_catalog_block(const json& j, Scenario& s,
                         std::optional<double> kappa_override,
                         Issues& issues) {
  std::string name;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> expressions;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object() && j.contains("name") && j.at("name").is_string()) {
    name = j.at("name").get<std::string>();
    if (j.contains("numbers")) {
      for (const auto& [k, v] : j.at("numbers").items()) {
        if (!v.is_number()) {
          issues.add("catalog.numbers." + k + " must be a number");
          return;
        }
        numbers[k] = v.get<double>();
      }
    }
    if (j.contains("expressions")) {
      for (const auto& [k, v] : j.at("expressions").items()) {
        if (!v.is_string()) {
          issues.add("catalog.expressions." + k + " must be a string");
          return;
        }
        expressions[k] = v.get<std::string>();
      }
    }
  } else {
    issues.add("catalog must be an entry name or {name, numbers, expressions}");
    return;
  }
  if (kappa_override) numbers["kappa"] = *kappa_override;
  try {
    CatalogEntry entry = make_catalog_entry(name, numbers, expressions);
    s.catalog_ref = entry.name;
    s.metric = std::move(entry.metric);
    s.map = std::move(entry.map);
    s.target = std::move(entry.target);
    s.kappa = entry.kappa;
    s.vector_fields = std::move(entry.vector_fields);
  } catch (const Error& e) {
    issues.add("catalog '" + name + "': " + e.what());
  }
}

void parse_checks(const json& j, Scenario& s, Issues& issues) {
  if (!j.is_array()) {
    issues.add("checks must be an array");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& cj = j[i];
    const std::string where = "checks[" + std::to_string(i) + "]";
    if (!cj.is_object() || !cj.contains("check") ||
        !cj.at("check").is_string()) {
      issues.add(where + " must be an object naming its check");
      continue;
    }
    CheckSpec spec;
    spec.name = cj.at("check").get<std::string>();
    if (!known_checks().count(spec.name)) {
      issues.add(where + ": unknown check '" + spec.name + "'");
      continue;
    }
    if (cj.contains("vector")) {
      if (!cj.at("vector").is_string()) {
        issues.add(where + ".vector must be a vector field name");
        continue;
      }
      spec.vector = cj.at("vector").get<std::string>();
    }
    if (cj.contains("require")) {
      auto req = parse_name_list(cj.at("require"), (where + ".require").c_str(),
                                 issues);
      if (!req) continue;
      spec.require = *req;
      for (const std::string& r : spec.require)
        if (!certificate_names().count(r))
          issues.add(where + ".require: unknown certificate '" + r + "'");
    }
    if (cj.contains("tolerance")) {
      if (!cj.at("tolerance").is_number() ||
          cj.at("tolerance").get<double>() <= 0.0) {
        issues.add(where + ".tolerance must be a positive number");
        continue;
      }
      spec.tolerance = cj.at("tolerance").get<double>();
    }
    if (vector_checks().count(spec.name)) {
      if (spec.vector.empty()) {
        issues.add(where + ": check '" + spec.name +
                   "' needs a vector field name");
      } else if (!s.find_vector(spec.vector)) {
        issues.add(where + ": vector field '" + spec.vector +
                   "' is not declared");
      }
    }
    if (spec.name == "certificates" && spec.require.empty())
      issues.add(where + ": certificates needs a require list");
    if (map_checks().count(spec.name) && !s.map)
      issues.add(where + ": check '" + spec.name +
                 "' needs an attached map");
    s.checks.push_back(std::move(spec));
  }
}

void parse_sampling(const json& j, Scenario& s, Issues& issues) {
  if (!j.is_object()) {
    issues.add("sampling must be an object");
    return;
  }
  const bool has_grid = j.contains("grid");
  const bool has_random = j.contains("random");
  if (has_grid == has_random) {
    issues.add("sampling needs exactly one of grid or random");
    return;
  }
  if (has_grid) {
    if (!j.at("grid").is_number_integer() || j.at("grid").get<int>() < 1) {
      issues.add("sampling.grid must be a positive integer");
      return;
    }
    s.sampling.grid = j.at("grid").get<int>();
  } else {
    if (!j.at("random").is_number_integer() ||
        j.at("random").get<int>() < 1) {
      issues.add("sampling.random must be a positive integer");
      return;
    }
    s.sampling.random = j.at("random").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) {
      issues.add("sampling.seed must be a nonnegative integer");
      return;
    }
    s.sampling.seed = j.at("seed").get<std::uint64_t>();
  }
}

std::string format_point(const Point& p) {
  std::string out = "(";
  char buf[64];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    if (i) out += ", ";
    out += buf;
  }
  out += ")";
  return out;
}

std::string format_residual(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", r);
  return buf;
}

}  // namespace

const NamedVectorField* Scenario::find_vector(const std::string& vname) const {
  for (const NamedVectorField& nv : vector_fields)
    if (nv.name == vname) return &nv;
  return nullptr;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin, line_of_byte(text, e.byte));
  }

  Issues issues;
  if (!j.is_object())
    throw ValidationError({"scenario must be a JSON object"});

  static const std::set<std::string> allowed = {
      "name",   "catalog",       "kappa",  "chart",    "metric",
      "target", "map",           "checks", "sampling", "vector_fields"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) issues.add("unknown key '" + key + "'");
  }

  Scenario s;
  if (j.contains("name") && j.at("name").is_string())
    s.name = j.at("name").get<std::string>();
  else
    issues.add("name is required and must be a string");

  std::optional<double> kappa_override;
  if (j.contains("kappa")) {
    if (j.at("kappa").is_number())
      kappa_override = j.at("kappa").get<double>();
    else
      issues.add("kappa must be a number");
  }

  const bool has_catalog = j.contains("catalog");
  const bool has_inline = j.contains("chart") || j.contains("metric");
  if (has_catalog && has_inline)
    issues.add("give either a catalog reference or an inline chart+metric, "
               "not both");
  if (!has_catalog && !has_inline)
    issues.add("a catalog reference or an inline chart+metric is required");

  if (has_catalog && !has_inline)
    parse_catalog_block(j.at("catalog"), s, kappa_override, issues);

  if (has_inline && !has_catalog) {
    if (!j.contains("chart") || !j.contains("metric")) {
      issues.add("inline scenarios need both chart and metric");
    } else if (auto chart = parse_chart(j.at("chart"), issues)) {
      s.metric = parse_metric_block(j.at("metric"), *chart, "metric", issues);
    }
    if (kappa_override) s.kappa = *kappa_override;
  }

  // An inline target+map pair attaches to (or replaces) whatever the
  // geometry source provided.
  const bool has_target = j.contains("target");
  const bool has_map = j.contains("map");
  if (has_target != has_map) {
    issues.add("target and map must be given together");
  } else if (has_target && s.metric) {
    std::optional<Chart> tchart;
    if (j.at("target").is_object() && j.at("target").contains("names"))
      tchart = parse_chart(j.at("target"), issues);
    else
      issues.add("target must be a chart+metric object");
    if (tchart) {
      auto h = parse_metric_block(j.at("target"), *tchart, "target", issues);
      auto comps =
          parse_expressions(j.at("map"), s.metric->chart(),
                            tchart->names.size(), "map", issues);
      if (h && comps) {
        try {
          s.map = MapField(s.metric->chart(), h->chart(), std::move(*comps));
          s.target = std::move(h);
          if (kappa_override) s.kappa = *kappa_override;
        } catch (const Error& e) {
          issues.add(std::string("map: ") + e.what());
        }
      }
    }
  }

  if (j.contains("vector_fields")) {
    const json& vf = j.at("vector_fields");
    if (!vf.is_object()) {
      issues.add("vector_fields must map names to component arrays");
    } else if (s.metric) {
      for (const auto& [vname, comps_j] : vf.items()) {
        auto comps = parse_expressions(
            comps_j, s.metric->chart(), s.metric->chart().names.size(),
            ("vector_fields." + vname).c_str(), issues);
        if (!comps) continue;
        VectorField field{s.metric->chart(), std::move(*comps)};
        bool replaced = false;
        for (NamedVectorField& existing : s.vector_fields)
          if (existing.name == vname) {
            existing.field = std::move(field);
            replaced = true;
            break;
          }
        if (!replaced) s.vector_fields.push_back({vname, std::move(field)});
      }
    }
  }

  if (s.map && s.metric && s.target) {
    try {
      CouplingContext probe(s.kappa, *s.metric, *s.map, *s.target);
    } catch (const ValidationError& e) {
      for (const std::string& issue : e.issues()) issues.add(issue);
    } catch (const Error& e) {
      issues.add(e.what());
    }
  }

  if (j.contains("checks")) parse_checks(j.at("checks"), s, issues);
  if (j.contains("sampling")) parse_sampling(j.at("sampling"), s, issues);
  if (s.sampling.grid == 0 && s.sampling.random == 0) s.sampling.random = 32;

  if (issues.any()) throw ValidationError(issues.list);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot open scenario file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

namespace {

double trace_against(const TensorValue& ginv, const TensorValue& t) {
  const int m = t.shape()[0];
  double s = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s += ginv({a, b}) * t({a, b});
  return s;
}

/// Round trip between the direct residual kappa Ric - f and the
/// trace-reversed residual kappa G - (f - 1/2 g tr f): converting either
/// form into the other must land on the independently computed one.
double equivalence_residual(const CouplingContext& ctx,
                            std::span<const double> p) {
  const TensorValue res = einstein_residual_ricci(ctx, p);
  const TensorValue full = einstein_residual_full(ctx, p);
  const TensorValue g = ctx.g.value(p);
  const TensorValue ginv = ctx.g.inverse_value(p);
  const int m = g.shape()[0];

  const double tr_res = trace_against(ginv, res);
  const double tr_full = trace_against(ginv, full);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double fwd = res({a, b}) - 0.5 * g({a, b}) * tr_res - full({a, b});
      const double bwd =
          full({a, b}) - g({a, b}) * tr_full / (m - 2.0) - res({a, b});
      worst = std::max({worst, std::abs(fwd), std::abs(bwd)});
    }
  return worst;
}

double certificate_value(const VectorFieldCertificates& cert,
                         const std::string& which) {
  if (which == "killing") return cert.killing;
  if (which == "parallel") return cert.covariantly_constant;
  if (which == "hypersurface_orthogonal") return cert.hypersurface_orthogonal;
  return cert.lightlike;
}

double radiation_max(const RadiationReport& r) {
  return std::max({r.lich1, r.lich2, r.bel1, r.bel2, r.bel3, r.ricci_rad1,
                   r.ricci_rad2, r.einstein_rad1, r.einstein_rad2});
}

}  // namespace

RunResult run_checks(const Scenario& s, const RunOptions& options) {
  if (!s.metric) throw ValidationError({"scenario has no metric"});
  const MetricField& g = *s.metric;

  RunResult result;
  result.scenario = s.name;
  result.seed = options.seed.value_or(s.sampling.seed);
  const double default_tol = options.tolerance.value_or(1e-8);

  std::vector<Point> points;
  if (s.sampling.grid > 0) {
    points = grid_points(g.chart(),
                         std::vector<int>(g.chart().names.size(),
                                          s.sampling.grid));
  } else {
    std::mt19937_64 rng(result.seed);
    for (int i = 0; i < s.sampling.random; ++i)
      points.push_back(sample_point(g.chart(), rng));
  }

  std::optional<CouplingContext> ctx;
  if (s.map && s.target)
    ctx.emplace(s.kappa, g, *s.map, *s.target);

  for (const CheckSpec& spec : s.checks) {
    CheckReport report;
    report.name = spec.vector.empty() ? spec.name
                                      : spec.name + "(" + spec.vector + ")";
    report.tolerance = spec.tolerance.value_or(default_tol);

    const VectorField* vf = nullptr;
    if (!spec.vector.empty()) vf = &s.find_vector(spec.vector)->field;

    std::function<double(const Point&)> residual;
    if (spec.name == "einstein_residual")
      residual = [&](const Point& p) {
        return einstein_residual_ricci(*ctx, p).max_abs();
      };
    else if (spec.name == "residual_equivalence")
      residual = [&](const Point& p) { return equivalence_residual(*ctx, p); };
    else if (spec.name == "trace_relation")
      residual = [&](const Point& p) {
        return std::abs(trace_relation_residual(*ctx, p));
      };
    else if (spec.name == "tension")
      residual = [&](const Point& p) {
        return tension_field(g, *s.map, *s.target, p).max_abs();
      };
    else if (spec.name == "divergence_T")
      residual = [&](const Point& p) {
        return stress_divergence(g, *s.map, *s.target, p).max_abs();
      };
    else if (spec.name == "totally_geodesic")
      residual = [&](const Point& p) { return totally_geodesic_check(*ctx, p); };
    else if (spec.name == "gradient_identity")
      residual = [&](const Point& p) {
        return ricci_gradient_identity_residual(*ctx, p).max_abs();
      };
    else if (spec.name == "degeneracy")
      residual = [&](const Point& p) {
        return degeneracy_check(*ctx, *vf, p).conditions_max();
      };
    else if (spec.name == "radiation")
      residual = [&](const Point& p) {
        return radiation_max(
            radiation_conditions(g, *vf, p, report.tolerance));
      };
    else if (spec.name == "certificates")
      residual = [&](const Point& p) {
        VectorFieldCertificates cert = vector_field_certificates(g, *vf, p);
        double worst = 0.0;
        for (const std::string& r : spec.require)
          worst = std::max(worst, certificate_value(cert, r));
        return worst;
      };
    else  // energy_conditions
      residual = [&](const Point& p) {
        const TensorValue gval = g.value(p);
        const TensorValue stress = stress_energy(g, *s.map, *s.target, p);
        ObserverFrame frame =
            make_observer_frame(gval, vf->value(p), 1e-8);
        EnergyConditionReport rep = classical_energy_conditions(
            stress, gval, std::span<const ObserverFrame>(&frame, 1),
            report.tolerance);
        return std::max({0.0, -rep.worst_density, -rep.worst_momentum_norm2,
                         -rep.worst_strong_margin});
      };

    const auto start = std::chrono::steady_clock::now();
    try {
      for (const Point& p : points) {
        const double r = residual(p);
        ++report.samples;
        if (report.samples == 1 || r > report.max_residual) {
          report.max_residual = r;
          report.worst_point = p;
        }
      }
      report.status = report.max_residual <= report.tolerance ? "pass" : "fail";
    } catch (const Error& e) {
      report.status = "skipped";
      report.reason = e.what();
      report.max_residual = 0.0;
      report.samples = 0;
      report.worst_point.clear();
    }
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.checks.push_back(std::move(report));
  }
  return result;
}

std::string emit_report(const RunResult& result, const std::string& format) {
  if (format == "json") {
    ordered_json out;
    out["scenario"] = result.scenario;
    out["seed"] = result.seed;
    out["checks"] = ordered_json::array();
    for (const CheckReport& c : result.checks) {
      ordered_json cj;
      cj["name"] = c.name;
      cj["status"] = c.status;
      if (c.status == "skipped") {
        cj["reason"] = c.reason;
        cj["max_residual"] = nullptr;
        cj["tolerance"] = c.tolerance;
        cj["worst_point"] = nullptr;
      } else {
        cj["max_residual"] = c.max_residual;
        cj["tolerance"] = c.tolerance;
        cj["worst_point"] = c.worst_point;
      }
      cj["samples"] = c.samples;
      out["checks"].push_back(std::move(cj));
    }
    return out.dump(2) + "\n";
  }
  if (format != "text")
    throw Error("unknown report format '" + format + "'");

  std::ostringstream out;
  out << "scenario: " << result.scenario << "\n";
  out << "seed: " << result.seed << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-8s %-14s %-14s %-8s %s\n", "check",
                "status", "max_residual", "tolerance", "samples",
                "worst_point");
  out << line;
  for (const CheckReport& c : result.checks) {
    const std::string residual =
        c.status == "skipped" ? "-" : format_residual(c.max_residual);
    const std::string point =
        c.status == "skipped" ? "-" : format_point(c.worst_point);
    std::snprintf(line, sizeof line, "%-34s %-8s %-14s %-14s %-8d %s\n",
                  c.name.c_str(), c.status.c_str(), residual.c_str(),
                  format_residual(c.tolerance).c_str(), c.samples,
                  point.c_str());
    out << line;
    if (c.status == "skipped") out << "    reason: " << c.reason << "\n";
  }
  return out.str();
}

int exit_code_for(const RunResult& result) {
  for (const CheckReport& c : result.checks)
    if (c.status == "fail") return 1;
  return 0;
}

}  // namespace mapgeo
