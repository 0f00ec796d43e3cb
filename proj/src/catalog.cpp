#include "mapgeo/catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"

namespace mapgeo {

namespace {

std::string format_point(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

Expression parse_in(const std::string& text, const VarList& vars) {
  return Expression::parse(text, vars);
}

}  // namespace

void CatalogEntry::self_test(int trials, unsigned seed, double tol) const {
  std::mt19937_64 rng(seed);
  std::vector<std::string> issues;
  for (int t = 0; t < trials; ++t) {
    Point p = sample_point(metric.chart(), rng);
    for (const auto& fact : facts) {
      const double r = fact.residual(*this, p);
      if (!(r <= tol)) {
        issues.push_back("fact '" + fact.label + "' residual " + std::to_string(r) +
                         " at " + format_point(p));
        if (issues.size() >= 8) {
          issues.push_back("(further failures suppressed)");
          throw ValidationError(issues);
        }
      }
    }
  }
  if (!issues.empty()) throw ValidationError(issues);
}

// ---------------------------------------------------------------------------
// Elementary metrics.

MetricField minkowski_metric(int dim) {
  if (dim < 2) throw DimensionTooSmall("a Lorentzian metric needs dimension >= 2");
  std::vector<std::string> names = {"t"};
  std::vector<std::pair<double, double>> box = {{-2, 2}};
  for (int i = 1; i < dim; ++i) {
    names.push_back("x" + std::to_string(i));
    box.push_back({-2, 2});
  }
  Chart c = make_box_chart(names, box);
  auto vars = make_vars(names);
  std::vector<Expression> diag = {Expression::constant(1, vars)};
  std::vector<int> sig = {1};
  for (int i = 1; i < dim; ++i) {
    diag.push_back(Expression::constant(-1, vars));
    sig.push_back(-1);
  }
  return MetricField::diagonal(std::move(c), std::move(diag), std::move(sig));
}

MetricField euclidean_metric(int dim) {
  if (dim < 1) throw DimensionTooSmall("dimension must be positive");
  std::vector<std::string> names;
  std::vector<std::pair<double, double>> box;
  for (int i = 0; i < dim; ++i) {
    names.push_back("x" + std::to_string(i));
    box.push_back({-2, 2});
  }
  Chart c = make_box_chart(names, box);
  auto vars = make_vars(names);
  return MetricField::diagonal(std::move(c),
                               std::vector<Expression>(static_cast<std::size_t>(dim),
                                                       Expression::constant(1, vars)),
                               std::vector<int>(static_cast<std::size_t>(dim), 1));
}

Chart sphere_chart() {
  Chart c;
  c.names = {"theta", "phi"};
  c.box = {{1e-3, M_PI - 1e-3}, {0.0, 2 * M_PI}};
  c.kinds = {CoordKind::Polar, CoordKind::Periodic};
  c.periods = {0.0, 2 * M_PI};
  return c;
}

MetricField sphere_metric(double radius) {
  if (!(radius > 0)) throw Error("sphere radius must be positive");
  Chart c = sphere_chart();
  auto vars = make_vars({"theta", "phi"});
  Expression r2 = Expression::constant(radius * radius, vars);
  return MetricField::diagonal(
      std::move(c), {r2, r2 * pow(parse_in("sin(theta)", vars), 2.0)}, {1, 1});
}

MetricField polar_plane_metric() {
  Chart c;
  c.names = {"r", "phi"};
  c.box = {{0.2, 3.0}, {0.0, 2 * M_PI}};
  c.kinds = {CoordKind::Line, CoordKind::Periodic};
  c.periods = {0.0, 2 * M_PI};
  auto vars = make_vars({"r", "phi"});
  return MetricField::diagonal(std::move(c),
                               {Expression::constant(1, vars),
                                pow(Expression::variable(0, vars), 2.0)},
                               {1, 1});
}

MetricField circle_metric() {
  Chart c;
  c.names = {"lambda"};
  c.box = {{0.0, 2 * M_PI}};
  c.kinds = {CoordKind::Periodic};
  c.periods = {2 * M_PI};
  auto vars = make_vars({"lambda"});
  return MetricField::diagonal(std::move(c), {Expression::constant(1, vars)}, {1});
}

MetricField line_metric(const std::string& coordinate, double half_width) {
  Chart c = make_box_chart({coordinate}, {{-half_width, half_width}});
  auto vars = make_vars({coordinate});
  return MetricField::diagonal(std::move(c), {Expression::constant(1, vars)}, {1});
}

// ---------------------------------------------------------------------------
// Products and warped products.

namespace {

struct ProductFrame {
  Chart chart;
  VarList vars;
  std::vector<int> map1, map2;  // old index -> product index
  int m1 = 0, m2 = 0;
};

ProductFrame product_frame(const MetricField& g1, const MetricField& g2) {
  ProductFrame f;
  f.m1 = g1.dim();
  f.m2 = g2.dim();
  const Chart& c1 = g1.chart();
  const Chart& c2 = g2.chart();
  for (const auto& n : c1.names)
    if (std::find(c2.names.begin(), c2.names.end(), n) != c2.names.end())
      throw ValidationError({"product factors share the coordinate name '" + n + "'"});
  f.chart.names = c1.names;
  f.chart.names.insert(f.chart.names.end(), c2.names.begin(), c2.names.end());
  f.chart.box = c1.box;
  f.chart.box.insert(f.chart.box.end(), c2.box.begin(), c2.box.end());
  f.chart.kinds = c1.kinds;
  f.chart.kinds.insert(f.chart.kinds.end(), c2.kinds.begin(), c2.kinds.end());
  f.chart.periods = c1.periods;
  f.chart.periods.insert(f.chart.periods.end(), c2.periods.begin(), c2.periods.end());
  f.vars = make_vars(f.chart.names);
  for (int i = 0; i < f.m1; ++i) f.map1.push_back(i);
  for (int i = 0; i < f.m2; ++i) f.map2.push_back(f.m1 + i);
  return f;
}

MetricField assemble_warped(const MetricField& g1, const MetricField& g2,
                            const Expression* warp) {
  ProductFrame f = product_frame(g1, g2);
  const int m = f.m1 + f.m2;
  Expression zero = Expression::constant(0, f.vars);
  std::vector<Expression> tri;
  tri.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
  Expression w2 = warp ? pow(warp->remapped(f.vars, f.map1), 2.0)
                       : Expression::constant(1, f.vars);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      if (a < f.m1 && b < f.m1) {
        tri.push_back(g1.component(a, b).remapped(f.vars, f.map1));
      } else if (a >= f.m1 && b >= f.m1) {
        Expression fiber = g2.component(a - f.m1, b - f.m1).remapped(f.vars, f.map2);
        tri.push_back(warp ? w2 * fiber : fiber);
      } else {
        tri.push_back(zero);
      }
    }
  std::vector<int> sig = g1.signature();
  sig.insert(sig.end(), g2.signature().begin(), g2.signature().end());
  return MetricField(std::move(f.chart), std::move(tri), std::move(sig));
}

}  // namespace

MetricField product_metric(const MetricField& g1, const MetricField& g2) {
  return assemble_warped(g1, g2, nullptr);
}

MetricField warped_product_metric(const MetricField& g1, const MetricField& g2,
                                  const Expression& warp) {
  if (warp.num_vars() != g1.dim())
    throw ShapeMismatch("warp function must be written in the first factor's coordinates");
  std::mt19937_64 rng(911);
  for (int t = 0; t < 200; ++t) {
    Point p = sample_point(g1.chart(), rng);
    if (!(warp.evaluate(p) > 0)) throw NonPositiveWarp(p);
  }
  return assemble_warped(g1, g2, &warp);
}

std::pair<TensorValue, TensorValue> warped_ricci_oracle(const MetricField& g1,
                                                        const MetricField& g2,
                                                        const Expression& warp,
                                                        std::span<const double> p) {
  const int m1 = g1.dim();
  const int m2 = g2.dim();
  if (static_cast<int>(p.size()) != m1 + m2)
    throw ShapeMismatch("point dimension does not match the product");
  const Point p1(p.begin(), p.begin() + m1);
  const Point p2(p.begin() + m1, p.end());

  const double w = warp.evaluate(p1);
  if (!(w > 0)) throw NonPositiveWarp(p1);

  const MetricJet j1 = metric_jet(g1, p1, 1);
  Eigen::VectorXd dw(m1);
  Eigen::MatrixXd ddw(m1, m1);
  for (int a = 0; a < m1; ++a) {
    Expression da = warp.derivative(a);
    dw(a) = da.evaluate(p1);
    for (int b = 0; b < m1; ++b) ddw(a, b) = da.derivative(b).evaluate(p1);
  }
  // Hess(w)_ab = ∂a∂b w - Γ^c_ab ∂c w on the first factor.
  Eigen::MatrixXd hess(m1, m1);
  for (int a = 0; a < m1; ++a)
    for (int b = 0; b < m1; ++b) {
      double acc = ddw(a, b);
      for (int c = 0; c < m1; ++c) acc -= j1.gamma[static_cast<std::size_t>(c)](a, b) * dw(c);
      hess(a, b) = acc;
    }
  const double lap = (j1.ginv * hess).trace();
  const double grad2 = dw.dot(j1.ginv * dw);

  TensorValue ric1 = ricci(g1, p1);
  TensorValue block1({m1, m1}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m1; ++a)
    for (int b = 0; b < m1; ++b)
      block1({a, b}) = ric1({a, b}) - (m2 / w) * hess(a, b);

  TensorValue ric2 = ricci(g2, p2);
  TensorValue g2v = g2.value(p2);
  const double fiber_scale = w * lap + (m2 - 1) * grad2;
  TensorValue block2({m2, m2}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m2; ++a)
    for (int b = 0; b < m2; ++b)
      block2({a, b}) = ric2({a, b}) - fiber_scale * g2v({a, b});

  return {block1, block2};
}

double closed_integral(const Expression& f, const MetricField& g, int per_axis) {
  const int d = g.dim();
  if (per_axis < 1) throw Error("quadrature resolution must be positive");
  const Chart& c = g.chart();
  for (int a = 0; a < d; ++a)
    if (c.kinds[static_cast<std::size_t>(a)] == CoordKind::Line)
      throw NotClosedFactor("coordinate '" + c.names[static_cast<std::size_t>(a)] +
                            "' has no periodicity metadata");

  // Per-axis nodes and weights.
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(d)),
      weights(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    auto& xs = nodes[static_cast<std::size_t>(a)];
    auto& ws = weights[static_cast<std::size_t>(a)];
    if (c.kinds[static_cast<std::size_t>(a)] == CoordKind::Periodic) {
      const double lo = c.box[static_cast<std::size_t>(a)].first;
      const double span = c.box[static_cast<std::size_t>(a)].second - lo;
      const double h = span / per_axis;
      for (int i = 0; i < per_axis; ++i) {
        xs.push_back(lo + (i + 0.5) * h);
        ws.push_back(h);
      }
    } else {
      // Colatitude: substitute u = cos θ, midpoints in u over [-1, 1]; the
      // du/dθ Jacobian contributes 1/sin θ to the weight.
      const double hu = 2.0 / per_axis;
      for (int i = 0; i < per_axis; ++i) {
        const double u = 1.0 - (i + 0.5) * hu;
        const double theta = std::acos(u);
        xs.push_back(theta);
        ws.push_back(hu / std::sin(theta));
      }
    }
  }

  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Point p(static_cast<std::size_t>(d));
  while (true) {
    double weight = 1.0;
    for (int a = 0; a < d; ++a) {
      p[static_cast<std::size_t>(a)] =
          nodes[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      weight *= weights[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    }
    TensorValue gv = g.value(p);
    Eigen::MatrixXd gm(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) gm(a, b) = gv({a, b});
    total += f.evaluate(p) * std::sqrt(std::abs(gm.determinant())) * weight;

    int axis = d - 1;
    while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Wave normal forms.

namespace {

const std::vector<std::string> kWaveNames = {"x0", "x1", "x2", "x3"};

Chart wave_chart() {
  return make_box_chart(kWaveNames, {{-8, 8}, {-8, 8}, {-2, 2}, {-2, 2}});
}

/// Parses a wave-form component and rejects any x0 dependence.
Expression wave_component(const std::string& text, const VarList& vars,
                          const std::string& slot) {
  Expression e = Expression::parse(text, vars);
  if (!e.derivative(0).is_constant(0.0))
    throw FormViolation("component " + slot + " = '" + text +
                        "' depends on x0; the normal form requires x0-independence");
  return e;
}

VectorField coordinate_field(const Chart& chart, int index) {
  auto vars = make_vars(chart.names);
  std::vector<Expression> comps(chart.names.size(), Expression::constant(0, vars));
  comps[static_cast<std::size_t>(index)] = Expression::constant(1, vars);
  return VectorField{chart, std::move(comps)};
}

ExactFact ricci_component_fact(const std::string& label, int a, int b,
                               std::function<double(const Point&)> expected) {
  return ExactFact{label, [a, b, expected](const CatalogEntry& e, const Point& p) {
                     return std::abs(ricci(e.metric, p)({a, b}) - expected(p));
                   }};
}

ExactFact flatness_fact() {
  return ExactFact{"curvature vanishes", [](const CatalogEntry& e, const Point& p) {
                     return riemann(e.metric, p).max_abs();
                   }};
}

std::vector<std::string> default_gij() {
  return {"-1", "0", "-1", "0", "0", "-1"};
}

CatalogEntry make_wave_entry(std::string name, std::string summary,
                             std::vector<Expression> tri) {
  MetricField metric(wave_chart(), std::move(tri), {1, -1, -1, -1});
  CatalogEntry entry{.name = std::move(name), .summary = std::move(summary),
                     .metric = std::move(metric)};
  entry.vector_fields.push_back({"l", coordinate_field(entry.metric.chart(), 0)});
  return entry;
}

}  // namespace

CatalogEntry wave_form_killing(const std::string& g01,
                               const std::vector<std::string>& gij_lower) {
  auto vars = make_vars(kWaveNames);
  std::vector<std::string> gij = gij_lower.empty() ? default_gij() : gij_lower;
  if (gij.size() != 6)
    throw ShapeMismatch("the spatial block needs 6 lower-triangle components");
  // Lower triangle rows over (x0..x3); spatial block indices i,j in {1,2,3}.
  std::vector<Expression> tri = {
      Expression::constant(0, vars),
      wave_component(g01, vars, "g01"), wave_component(gij[0], vars, "g11"),
      Expression::constant(0, vars), wave_component(gij[1], vars, "g21"),
      wave_component(gij[2], vars, "g22"),
      Expression::constant(0, vars), wave_component(gij[3], vars, "g31"),
      wave_component(gij[4], vars, "g32"), wave_component(gij[5], vars, "g33")};
  CatalogEntry e = make_wave_entry(
      "wave_killing", "lightlike Killing normal form 2 g01 dx0 dx1 + gij dxi dxj",
      std::move(tri));
  return e;
}

CatalogEntry wave_form_parallel(const std::vector<std::string>& gij_lower) {
  CatalogEntry e = wave_form_killing("1", gij_lower);
  e.name = "wave_parallel";
  e.summary = "parallel lightlike normal form 2 dx0 dx1 + gij dxi dxj";
  return e;
}

CatalogEntry wave_form_bel(const std::string& g11, const std::string& g12,
                           const std::string& g13, const std::string& g01) {
  auto vars = make_vars(kWaveNames);
  std::vector<Expression> tri = {
      Expression::constant(0, vars),
      wave_component(g01, vars, "g01"), wave_component(g11, vars, "g11"),
      Expression::constant(0, vars), wave_component(g12, vars, "g12"),
      Expression::constant(-1, vars),
      Expression::constant(0, vars), wave_component(g13, vars, "g13"),
      Expression::constant(0, vars), Expression::constant(-1, vars)};
  return make_wave_entry("wave_bel",
                         "Bel normal form 2 g01 dx0 dx1 + g11 dx1² + 2 g1I dx1 dxI - dxI dxI",
                         std::move(tri));
}

CatalogEntry wave_form_lichnerowicz(const std::string& g11, const std::string& g01) {
  CatalogEntry e = wave_form_bel(g11, "0", "0", g01);
  e.name = "wave_lichnerowicz";
  e.summary = "pure-radiation normal form 2 g01 dx0 dx1 + g11 dx1² - dxI dxI";
  return e;
}

double WaveCurvatureIdentities::max_residual() const {
  return std::max({std::abs(r1223_minus_r13), std::abs(r1323_plus_r12),
                   std::abs(transverse_ricci)});
}

WaveCurvatureIdentities wave_curvature_identities(const MetricField& g,
                                                  std::span<const double> p) {
  if (g.dim() != 4) throw ShapeMismatch("the wave identities are specific to dimension 4");
  TensorValue riem = riemann(g, p);
  TensorValue ric = ricci(g, p);
  WaveCurvatureIdentities out;
  out.r1223_minus_r13 = riem({1, 2, 2, 3}) - ric({1, 3});
  out.r1323_plus_r12 = riem({1, 3, 2, 3}) + ric({1, 2});
  out.transverse_ricci =
      std::max({std::abs(ric({2, 2})), std::abs(ric({2, 3})), std::abs(ric({3, 3}))});
  return out;
}

// ---------------------------------------------------------------------------
// Exact coupled solutions and named fixtures.

CatalogEntry coupled_plane_wave(double kappa) {
  if (kappa == 0.0) throw Error("the coupling constant must be nonzero");
  std::vector<std::string> names = {"v", "u", "x2", "x3"};
  Chart c = make_box_chart(names, {{-8, 8}, {-8, 8}, {-2, 2}, {-2, 2}});
  auto vars = make_vars(names);
  Expression H = parse_in("(x2^2 + x3^2)", vars) *
                 Expression::constant(1.0 / (2 * kappa), vars);
  std::vector<Expression> tri = {
      Expression::constant(0, vars),
      Expression::constant(1, vars), H,
      Expression::constant(0, vars), Expression::constant(0, vars),
      Expression::constant(-1, vars),
      Expression::constant(0, vars), Expression::constant(0, vars),
      Expression::constant(0, vars), Expression::constant(-1, vars)};
  MetricField metric(c, std::move(tri), {1, -1, -1, -1});

  MetricField target = line_metric("y", 10.0);
  MapField phi(c, target.chart(), {Expression::variable(1, vars)});

  CatalogEntry entry{.name = "coupled_plane_wave",
                     .summary = "plane wave 2dudv + H du^2 - dx2^2 - dx3^2 coupled to the "
                                "scalar field u; solves kappa Ric = pullback exactly",
                     .metric = std::move(metric)};
  entry.map = std::move(phi);
  entry.target = std::move(target);
  entry.kappa = kappa;
  entry.vector_fields.push_back({"l", coordinate_field(entry.metric.chart(), 0)});
  entry.vector_fields.push_back({"wavevector", coordinate_field(entry.metric.chart(), 1)});

  const double ruu = 1.0 / kappa;
  entry.facts.push_back(ricci_component_fact("R_uu = 1/kappa", 1, 1,
                                             [ruu](const Point&) { return ruu; }));
  entry.facts.push_back(
      {"Ricci is concentrated on the wave direction", [](const CatalogEntry& e, const Point& p) {
         TensorValue ric = ricci(e.metric, p);
         double off = 0.0;
         for (int a = 0; a < 4; ++a)
           for (int b = 0; b < 4; ++b)
             if (!(a == 1 && b == 1)) off = std::max(off, std::abs(ric({a, b})));
         return off;
       }});
  entry.facts.push_back({"scalar curvature vanishes", [](const CatalogEntry& e, const Point& p) {
                           return std::abs(scalar_curvature(e.metric, p));
                         }});
  entry.facts.push_back({"coupling residual vanishes", [](const CatalogEntry& e, const Point& p) {
                           TensorValue ric = ricci(e.metric, p);
                           TensorValue f = pullback_metric(*e.map, *e.target, p);
                           double worst = 0.0;
                           for (int a = 0; a < 4; ++a)
                             for (int b = 0; b < 4; ++b)
                               worst = std::max(worst,
                                                std::abs(e.kappa * ric({a, b}) - f({a, b})));
                           return worst;
                         }});
  entry.facts.push_back({"map has rank one", [](const CatalogEntry& e, const Point& p) {
                           return std::abs(map_rank(*e.map, p) - 1.0);
                         }});
  return entry;
}

CatalogEntry coupled_sigma_product() {
  MetricField metric = product_metric(circle_metric(), sphere_metric(1.0));
  MetricField target = sphere_metric(1.0);
  auto vars = make_vars(metric.chart().names);
  MapField phi(metric.chart(), target.chart(),
               {Expression::variable(1, vars), Expression::variable(2, vars)});

  CatalogEntry entry{.name = "coupled_sigma_product",
                     .summary = "circle x sphere with the fiber projection onto the round "
                                "sphere; solves kappa Ric = pullback at kappa = 1",
                     .metric = std::move(metric)};
  entry.map = std::move(phi);
  entry.target = std::move(target);
  entry.kappa = 1.0;
  entry.vector_fields.push_back({"circle", coordinate_field(entry.metric.chart(), 0)});

  entry.facts.push_back({"coupling residual vanishes", [](const CatalogEntry& e, const Point& p) {
                           TensorValue ric = ricci(e.metric, p);
                           TensorValue f = pullback_metric(*e.map, *e.target, p);
                           double worst = 0.0;
                           for (int a = 0; a < 3; ++a)
                             for (int b = 0; b < 3; ++b)
                               worst = std::max(worst,
                                                std::abs(e.kappa * ric({a, b}) - f({a, b})));
                           return worst;
                         }});
  entry.facts.push_back({"projection is harmonic", [](const CatalogEntry& e, const Point& p) {
                           return tension_field(e.metric, *e.map, *e.target, p).max_abs();
                         }});
  entry.facts.push_back({"circle block of Ricci vanishes",
                         [](const CatalogEntry& e, const Point& p) {
                           TensorValue ric = ricci(e.metric, p);
                           return std::max({std::abs(ric({0, 0})), std::abs(ric({0, 1})),
                                            std::abs(ric({0, 2}))});
                         }});
  return entry;
}

CatalogEntry exp_warped_sphere() {
  MetricField base = line_metric("r", 0.75);
  MetricField fiber = sphere_metric(1.0);
  auto rvars = make_vars({"r"});
  Expression warp = parse_in("exp(r)", rvars);
  MetricField metric = warped_product_metric(base, fiber, warp);

  CatalogEntry entry{.name = "exp_warped_sphere",
                     .summary = "dr^2 + e^{2r} (round sphere); exponentially warped shell",
                     .metric = std::move(metric)};
  entry.facts.push_back(ricci_component_fact("Ric_rr = -2", 0, 0,
                                             [](const Point&) { return -2.0; }));
  entry.facts.push_back(
      {"warped decomposition matches the engine", [base, fiber, warp](const CatalogEntry& e,
                                                                      const Point& p) {
         auto [block1, block2] = warped_ricci_oracle(base, fiber, warp, p);
         TensorValue ric = ricci(e.metric, p);
         double worst = std::abs(block1({0, 0}) - ric({0, 0}));
         for (int a = 0; a < 2; ++a)
           for (int b = 0; b < 2; ++b)
             worst = std::max(worst, std::abs(block2({a, b}) - ric({a + 1, b + 1})));
         return worst;
       }});
  return entry;
}

CatalogEntry warped_circle_sphere() {
  MetricField base = circle_metric();
  MetricField fiber = sphere_metric(1.0);
  auto lvars = make_vars({"lambda"});
  Expression warp = parse_in("2 + sin(lambda)", lvars);
  MetricField metric = warped_product_metric(base, fiber, warp);

  CatalogEntry entry{.name = "warped_circle_sphere",
                     .summary = "circle x sphere with warp 2 + sin(lambda); not a coupled "
                                "solution",
                     .metric = std::move(metric)};
  entry.facts.push_back(
      {"warped decomposition matches the engine", [base, fiber, warp](const CatalogEntry& e,
                                                                      const Point& p) {
         auto [block1, block2] = warped_ricci_oracle(base, fiber, warp, p);
         TensorValue ric = ricci(e.metric, p);
         double worst = std::abs(block1({0, 0}) - ric({0, 0}));
         for (int a = 0; a < 2; ++a)
           for (int b = 0; b < 2; ++b)
             worst = std::max(worst, std::abs(block2({a, b}) - ric({a + 1, b + 1})));
         return worst;
       }});
  entry.facts.push_back({"mixed Ricci block vanishes", [](const CatalogEntry& e, const Point& p) {
                           TensorValue ric = ricci(e.metric, p);
                           return std::max(std::abs(ric({0, 1})), std::abs(ric({0, 2})));
                         }});
  return entry;
}

CatalogEntry flat_entry(const std::string& kind, int dim) {
  if (kind == "minkowski") {
    CatalogEntry e{.name = "minkowski", .summary = "flat Lorentzian space",
                   .metric = minkowski_metric(dim)};
    e.facts.push_back(flatness_fact());
    e.vector_fields.push_back({"time", coordinate_field(e.metric.chart(), 0)});
    return e;
  }
  if (kind == "euclidean") {
    CatalogEntry e{.name = "euclidean", .summary = "flat Riemannian space",
                   .metric = euclidean_metric(dim)};
    e.facts.push_back(flatness_fact());
    return e;
  }
  throw UnknownIdentifier(kind);
}

CatalogEntry sphere_entry(double radius) {
  CatalogEntry e{.name = "sphere",
                 .summary = "round sphere in colatitude-longitude coordinates",
                 .metric = sphere_metric(radius)};
  const double r2 = radius * radius;
  e.facts.push_back({"Ricci equals the metric over radius squared",
                     [r2](const CatalogEntry& entry, const Point& p) {
                       TensorValue ric = ricci(entry.metric, p);
                       TensorValue g = entry.metric.value(p);
                       double worst = 0.0;
                       for (int a = 0; a < 2; ++a)
                         for (int b = 0; b < 2; ++b)
                           worst = std::max(worst, std::abs(ric({a, b}) - g({a, b}) / r2));
                       return worst;
                     }});
  e.facts.push_back({"scalar curvature is 2 over radius squared",
                     [r2](const CatalogEntry& entry, const Point& p) {
                       return std::abs(scalar_curvature(entry.metric, p) - 2.0 / r2);
                     }});
  e.vector_fields.push_back({"rotation", coordinate_field(e.metric.chart(), 1)});
  return e;
}

CatalogEntry polar_plane_entry() {
  CatalogEntry e{.name = "polar_plane", .summary = "flat plane in polar coordinates",
                 .metric = polar_plane_metric()};
  e.facts.push_back(flatness_fact());
  return e;
}

// ---------------------------------------------------------------------------
// Registry.

namespace {

double num_param(const std::map<std::string, double>& nums, const std::string& key,
                 double fallback) {
  auto it = nums.find(key);
  return it == nums.end() ? fallback : it->second;
}

std::string expr_param(const std::map<std::string, std::string>& exprs,
                       const std::string& key, const std::string& fallback) {
  auto it = exprs.find(key);
  return it == exprs.end() ? fallback : it->second;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"minkowski",        "euclidean",        "sphere",
          "polar_plane",      "coupled_plane_wave", "coupled_sigma_product",
          "exp_warped_sphere", "warped_circle_sphere", "wave_killing",
          "wave_parallel",    "wave_bel",         "wave_lichnerowicz"};
}

std::string catalog_describe(const std::string& name) {
  if (name == "minkowski") return "flat Lorentzian space; parameters: dim (default 4)";
  if (name == "euclidean") return "flat Riemannian space; parameters: dim (default 3)";
  if (name == "sphere") return "round sphere; parameters: radius (default 1)";
  if (name == "polar_plane") return "flat plane in polar coordinates; no parameters";
  if (name == "coupled_plane_wave")
    return "exactly coupled plane wave with scalar field u; parameters: kappa (default 1)";
  if (name == "coupled_sigma_product")
    return "circle x sphere with fiber projection, coupled at kappa = 1; no parameters";
  if (name == "exp_warped_sphere")
    return "dr^2 + e^{2r} (round sphere) warped shell; no parameters";
  if (name == "warped_circle_sphere")
    return "circle x sphere with warp 2 + sin(lambda); no parameters";
  if (name == "wave_killing")
    return "normal form 2 g01 dx0 dx1 + gij dxi dxj; expressions: g01 and the "
           "lower triangle g11, g21, g22, g31, g32, g33 (defaults: g01 = 1, gij = -identity)";
  if (name == "wave_parallel")
    return "normal form 2 dx0 dx1 + gij dxi dxj; expressions: lower triangle of gij "
           "(default -identity)";
  if (name == "wave_bel")
    return "normal form 2 g01 dx0 dx1 + g11 dx1^2 + 2 g1I dx1 dxI - dxI dxI; "
           "expressions: g11, g12, g13, g01 (defaults 0, 0, 0, 1)";
  if (name == "wave_lichnerowicz")
    return "normal form 2 g01 dx0 dx1 + g11 dx1^2 - dxI dxI; expressions: g11, g01 "
           "(defaults 0, 1)";
  throw UnknownIdentifier(name);
}

CatalogEntry make_catalog_entry(const std::string& name,
                                const std::map<std::string, double>& numbers,
                                const std::map<std::string, std::string>& expressions) {
  if (name == "minkowski")
    return flat_entry("minkowski", static_cast<int>(num_param(numbers, "dim", 4)));
  if (name == "euclidean")
    return flat_entry("euclidean", static_cast<int>(num_param(numbers, "dim", 3)));
  if (name == "sphere") return sphere_entry(num_param(numbers, "radius", 1.0));
  if (name == "polar_plane") return polar_plane_entry();
  if (name == "coupled_plane_wave")
    return coupled_plane_wave(num_param(numbers, "kappa", 1.0));
  if (name == "coupled_sigma_product") return coupled_sigma_product();
  if (name == "exp_warped_sphere") return exp_warped_sphere();
  if (name == "warped_circle_sphere") return warped_circle_sphere();
  if (name == "wave_killing") {
    std::vector<std::string> gij = {
        expr_param(expressions, "g11", "-1"), expr_param(expressions, "g21", "0"),
        expr_param(expressions, "g22", "-1"), expr_param(expressions, "g31", "0"),
        expr_param(expressions, "g32", "0"),  expr_param(expressions, "g33", "-1")};
    return wave_form_killing(expr_param(expressions, "g01", "1"), gij);
  }
  if (name == "wave_parallel") {
    std::vector<std::string> gij = {
        expr_param(expressions, "g11", "-1"), expr_param(expressions, "g21", "0"),
        expr_param(expressions, "g22", "-1"), expr_param(expressions, "g31", "0"),
        expr_param(expressions, "g32", "0"),  expr_param(expressions, "g33", "-1")};
    return wave_form_parallel(gij);
  }
  if (name == "wave_bel")
    return wave_form_bel(expr_param(expressions, "g11", "0"),
                         expr_param(expressions, "g12", "0"),
                         expr_param(expressions, "g13", "0"),
                         expr_param(expressions, "g01", "1"));
  if (name == "wave_lichnerowicz")
    return wave_form_lichnerowicz(expr_param(expressions, "g11", "0"),
                                  expr_param(expressions, "g01", "1"));
  throw UnknownIdentifier(name);
}

}  // namespace mapgeo
