#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapgeo/chart.hpp"
#include "mapgeo/expr.hpp"
#include "mapgeo/maps.hpp"
#include "mapgeo/metric.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

struct CatalogEntry;

/// Closed-form fact packaged with an entry: returns |engine value - known
/// value| at a point, so the loader can re-verify every entry.
struct ExactFact {
  std::string label;
  std::function<double(const CatalogEntry&, const Point&)> residual;
};

struct NamedVectorField {
  std::string name;
  VectorField field;
};

/// A built-in geometry: metric, optional attached map with target metric and
/// coupling constant, distinguished vector fields, and its analytic facts.
struct CatalogEntry {
  std::string name;
  std::string summary;
  MetricField metric;
  std::optional<MapField> map{};
  std::optional<MetricField> target{};
  double kappa = 1.0;
  std::vector<NamedVectorField> vector_fields{};
  std::vector<ExactFact> facts{};

  /// Re-derives every stored fact with the geometry engine at `trials`
  /// random points; throws ValidationError listing all failures.
  void self_test(int trials = 50, unsigned seed = 2024, double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------
// Elementary metrics (shared fixture builders).

MetricField minkowski_metric(int dim);
MetricField euclidean_metric(int dim);
MetricField sphere_metric(double radius);
Chart sphere_chart();
MetricField polar_plane_metric();
MetricField circle_metric();  // unit circle, coordinate "lambda"
MetricField line_metric(const std::string& coordinate = "s", double half_width = 10.0);

// ---------------------------------------------------------------------------
// Products and warped products.

/// Block product g1 ⊕ g2 on the concatenated chart (names must be disjoint).
MetricField product_metric(const MetricField& g1, const MetricField& g2);

/// Warped product g1 ⊕ w²·g2 with w an expression in the first factor's
/// coordinates; positivity of w is sampled, NonPositiveWarp on failure.
MetricField warped_product_metric(const MetricField& g1, const MetricField& g2,
                                  const Expression& warp);

/// Closed-form Ricci blocks of the warped product, built from factor data
/// only: base block 'Ric - m2 w⁻¹ Hess(w), fiber block
/// ''Ric - (w Δw + (m2-1)|∇w|²)·''g.  Cross-validates the engine.
std::pair<TensorValue, TensorValue> warped_ricci_oracle(const MetricField& g1,
                                                        const MetricField& g2,
                                                        const Expression& warp,
                                                        std::span<const double> p);

/// ∫ f dvol over a closed factor whose coordinates are all Periodic or Polar.
/// Periodic axes use the composite rectangle rule (spectral accuracy);
/// Polar (colatitude) axes integrate in u = cos θ with midpoint placement,
/// which is exact for the area element.  Throws NotClosedFactor otherwise.
double closed_integral(const Expression& f, const MetricField& g, int per_axis);

// ---------------------------------------------------------------------------
// Gravitational-wave normal forms on four-dimensional charts (x0,x1,x2,x3).
// Component expressions may use x1, x2, x3; dependence on x0 is rejected
// with FormViolation.

/// 2·g01·dx0dx1 + gij dxi dxj with an x0-independent lower-triangle block
/// gij over i,j in {1,2,3} (default -identity).  Carries l = ∂_0, which is a
/// hypersurface-orthogonal Killing field.
CatalogEntry wave_form_killing(const std::string& g01,
                               const std::vector<std::string>& gij_lower = {});

/// 2·dx0dx1 + gij dxi dxj (default -identity).  l = ∂_0 is covariantly
/// constant.
CatalogEntry wave_form_parallel(const std::vector<std::string>& gij_lower = {});

/// 2·g01·dx0dx1 + g11 (dx1)² + 2·g12 dx1dx2 + 2·g13 dx1dx3 - (dx2)² - (dx3)².
CatalogEntry wave_form_bel(const std::string& g11, const std::string& g12 = "0",
                           const std::string& g13 = "0", const std::string& g01 = "1");

/// 2·g01·dx0dx1 + g11 (dx1)² - (dx2)² - (dx3)².
CatalogEntry wave_form_lichnerowicz(const std::string& g11, const std::string& g01 = "1");

/// Curvature identities special to the four-dimensional wave normal forms
/// with flat transverse block and unit off-diagonal g01: in the sign
/// conventions fixed in geometry.hpp, R_1223 = R_13, R_1323 = -R_12, and
/// the transverse Ricci block R_IJ (I, J in {2, 3}) vanishes.  A varying
/// g01 genuinely breaks all three, so they certify the normal form itself.
struct WaveCurvatureIdentities {
  double r1223_minus_r13 = 0;
  double r1323_plus_r12 = 0;
  double transverse_ricci = 0;
  double max_residual() const;
};
WaveCurvatureIdentities wave_curvature_identities(const MetricField& g,
                                                  std::span<const double> p);

// ---------------------------------------------------------------------------
// Exact coupled solutions and named fixtures.

/// Plane wave 2dudv + H du² - (dx2)² - (dx3)² with H = ((x2)²+(x3)²)/(2κ)
/// and the scalar field φ(u,v,x2,x3) = u into the real line: solves
/// κ·Ric = φ*h exactly.  Coordinates ordered (v, u, x2, x3) so the parallel
/// lightlike direction is the first coordinate.
CatalogEntry coupled_plane_wave(double kappa);

/// Product circle × unit sphere with the fiber projection into the round
/// sphere: solves κ·Ric = φ*h exactly at κ = 1.
CatalogEntry coupled_sigma_product();

/// dr² + e^{2r}·(round sphere): warped fixture with Ric_rr = -2.
CatalogEntry exp_warped_sphere();

/// Circle × sphere with warp 2 + sin λ: not a coupled solution; used to
/// exercise the warped decomposition and quadrature checks.
CatalogEntry warped_circle_sphere();

CatalogEntry flat_entry(const std::string& kind, int dim);  // kind: "minkowski"|"euclidean"
CatalogEntry sphere_entry(double radius);
CatalogEntry polar_plane_entry();

// ---------------------------------------------------------------------------
// Registry: name + numeric/expression parameters -> entry.

std::vector<std::string> catalog_names();
std::string catalog_describe(const std::string& name);
CatalogEntry make_catalog_entry(const std::string& name,
                                const std::map<std::string, double>& numbers = {},
                                const std::map<std::string, std::string>& expressions = {});

}  // namespace mapgeo
