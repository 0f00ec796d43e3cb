#pragma once

#include <span>

#include "mapgeo/maps.hpp"
#include "mapgeo/metric.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

/// The coupled system under study: a source metric g, a map phi into a
/// target carrying metric h, and a nonzero coupling constant kappa.  The
/// field equation is kappa * Ric(g) = pullback of h along phi, with the
/// equivalent trace-adjusted form kappa * G = T available in dimension >= 3.
struct CouplingContext {
  CouplingContext(double kappa, MetricField g, MapField phi, MetricField h);

  double kappa;
  MetricField g;
  MapField phi;
  MetricField h;
};

/// kappa * Ric_ab - (phi*h)_ab; vanishes exactly on coupled solutions.
TensorValue einstein_residual_ricci(const CouplingContext& ctx,
                                    std::span<const double> p);

/// kappa * G_ab - T_ab with G = Ric - 1/2 R g and T = phi*h - e g.  In
/// dimension >= 3 this vanishes if and only if the Ricci-form residual
/// does; below that the two forms are inequivalent, so the call throws
/// DimensionTooSmall.
TensorValue einstein_residual_full(const CouplingContext& ctx,
                                   std::span<const double> p);

/// kappa * R - 2 e(phi): the trace of the Ricci-form equation.  Vanishes
/// whenever the Ricci-form residual vanishes.
double trace_relation_residual(const CouplingContext& ctx,
                               std::span<const double> p);

/// The mutually equivalent degeneracy conditions along a direction v, plus
/// the Ricci collineation they imply.  On a point where the field equation
/// holds, ric_vv, ric_dot_v and pushforward vanish together or not at all,
/// and their vanishing forces lie_ric to vanish.
struct DegeneracyReport {
  double ric_vv = 0.0;     // Ric(v, v)
  TensorValue ric_dot_v;   // Ric(v, .), 1-down
  TensorValue pushforward; // dphi(v), 1-up on the target
  TensorValue lie_ric;     // (L_v Ric)_ab, 2-down

  /// Largest magnitude among the three equivalent conditions (not lie_ric).
  double conditions_max() const;
};

DegeneracyReport degeneracy_check(const CouplingContext& ctx,
                                  const VectorField& v,
                                  std::span<const double> p);

/// Residual of the third-derivative consequence of the field equation,
///   kappa (grad_a R_bc + grad_b R_ca - grad_c R_ab)
///     = 2 h_ij beta^i_ab d_c phi^j,
/// as a 3-down tensor with slots (a, b, c); ~0 on coupled solutions.
TensorValue ricci_gradient_identity_residual(const CouplingContext& ctx,
                                             std::span<const double> p);

/// The conservation pairing h_ij tau^i d_a phi^j (slot a down): the
/// divergence of the stress tensor equals this, so it must vanish where the
/// field equation holds; for submersions its vanishing forces tau = 0.
TensorValue conservation_orthogonality(const CouplingContext& ctx,
                                       std::span<const double> p);

/// Max |beta^i_ab| of the second fundamental form; zero iff the map is
/// totally geodesic at p.
double totally_geodesic_check(const CouplingContext& ctx,
                              std::span<const double> p);

/// Integrates the flow of v from p with a classical 4th-order one-step
/// method (fixed step <= 1e-3 * max |t|) and returns the largest component
/// deviation |phi(f_t(p)) - phi(p)| over the requested times.  Throws
/// FlowLeftDomain if an orbit exits the chart box.
double flow_invariance_check(const CouplingContext& ctx, const VectorField& v,
                             std::span<const double> t_samples,
                             std::span<const double> p);

/// Rank of a 2-tensor value by singular values (relative cutoff, matching
/// map_rank); the pullback phi*h always has the rank of dphi when h is
/// positive definite, and on coupled solutions Ric shares that rank.
int tensor_rank(const TensorValue& t, double tol = 1e-10);

}  // namespace mapgeo
