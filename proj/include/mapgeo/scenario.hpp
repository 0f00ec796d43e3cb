#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapgeo/catalog.hpp"

namespace mapgeo {

/// One requested verification.  `name` picks the computation, `vector`
/// names a declared vector field where the computation needs a direction,
/// `require` selects certificates for the "certificates" check, and
/// `tolerance` (when set) overrides the run default for this check alone.
///
/// Check vocabulary:
///   einstein_residual    max |kappa Ric - pullback|             (needs map)
///   residual_equivalence round trip between the two residual
///                        forms; source dimension must be >= 3   (needs map)
///   trace_relation       contracted-equation residual           (needs map)
///   tension              max |tension field|                    (needs map)
///   divergence_T         max |divergence of the stress tensor|  (needs map)
///   totally_geodesic     max |second fundamental form|          (needs map)
///   gradient_identity    third-derivative compatibility residual(needs map)
///   energy_conditions    classical-condition violation against
///                        the observer field `vector`            (needs map)
///   degeneracy           degenerate-direction conditions along
///                        `vector`                               (needs map)
///   radiation            max of the nine pure-radiation
///                        residuals along the lightlike `vector`
///   certificates         max of the `require`d certificate
///                        values of `vector`; names: killing,
///                        parallel, hypersurface_orthogonal,
///                        lightlike
struct CheckSpec {
  std::string name;
  std::string vector;
  std::vector<std::string> require;
  std::optional<double> tolerance;
};

/// Either a per-axis grid of interior midpoints or seeded uniform draws
/// (strictly interior: the box is shrunk by 1% per side).
struct SamplingSpec {
  int grid = 0;
  int random = 0;
  std::uint64_t seed = 1;
};

/// A fully resolved scenario: geometry, optional coupled map, named vector
/// fields, the checks to run, and how to sample the chart.
struct Scenario {
  std::string name;
  std::optional<std::string> catalog_ref;
  std::optional<MetricField> metric;  // always engaged after loading
  std::optional<MapField> map;
  std::optional<MetricField> target;
  double kappa = 1.0;
  std::vector<NamedVectorField> vector_fields;
  std::vector<CheckSpec> checks;
  SamplingSpec sampling;

  const NamedVectorField* find_vector(const std::string& name) const;
};

/// Result of one check over the sample set.  status is "pass", "fail", or
/// "skipped"; pass holds exactly when max_residual <= tolerance.  A check
/// whose hypotheses fail on the scenario (wrong dimension, direction not
/// lightlike, observer not unit) is skipped with the reason recorded.
struct CheckReport {
  std::string name;
  std::string status;
  std::string reason;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Point worst_point;
  int samples = 0;
  double wall_ms = 0.0;  // informational; never emitted (reports are
                         // byte-stable for a fixed seed)
};

struct RunOptions {
  std::optional<std::uint64_t> seed;     // overrides the scenario seed
  std::optional<double> tolerance;       // default for checks without one
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 1;
  std::vector<CheckReport> checks;
};

/// Parses and validates a scenario file.  Throws ParseError for malformed
/// syntax and ValidationError carrying every structural problem found (not
/// just the first).
Scenario load_scenario(const std::string& path);

/// Same, from in-memory text; `origin` names the source in errors.
Scenario parse_scenario(const std::string& text, const std::string& origin);

/// Runs every requested check over the sample set, in declaration order.
/// Deterministic for a fixed seed.  Per-check failures of hypothesis are
/// reported as skipped entries; nothing aborts the suite.
RunResult run_checks(const Scenario& s, const RunOptions& options = {});

/// Renders a run as "text" (aligned table) or "json" (stable schema
/// {scenario, seed, checks: [{name, status, max_residual, tolerance,
/// worst_point, samples}]}).  Byte-stable across runs for a fixed seed.
std::string emit_report(const RunResult& result, const std::string& format);

/// 0 when every non-skipped check passed, 1 otherwise.
int exit_code_for(const RunResult& result);

}  // namespace mapgeo
