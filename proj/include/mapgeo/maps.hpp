#pragma once

#include <span>
#include <vector>

#include "mapgeo/chart.hpp"
#include "mapgeo/expr.hpp"
#include "mapgeo/metric.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

/// Smooth map between charted manifolds, one component expression per target
/// coordinate, each written in the source coordinates.  First and second
/// partial derivatives are prepared symbolically at construction.
class MapField {
 public:
  MapField(Chart source, Chart target, std::vector<Expression> components);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  int source_dim() const { return source_.dim(); }
  int target_dim() const { return target_.dim(); }

  const Expression& component(int i) const;
  /// ∂_a φ^i as an expression.
  const Expression& d1(int i, int a) const;
  /// ∂_a ∂_b φ^i as an expression.
  const Expression& d2(int i, int a, int b) const;

  /// Image point φ(p).
  Point value(std::span<const double> p) const;
  /// Differential dφ as a tensor with slots (i, a): target-up, source-down.
  TensorValue differential(std::span<const double> p) const;

 private:
  Chart source_, target_;
  std::vector<Expression> comps_;
  std::vector<Expression> d1_, d2_;
};

/// Pullback φ*h of the target metric, a symmetric 2-down tensor on the
/// source: (φ*h)_ab = ∂_aφ^i ∂_bφ^j h_ij(φ).
TensorValue pullback_metric(const MapField& phi, const MetricField& h,
                            std::span<const double> p);

/// Energy density e(φ) = 1/2 g^{ab} (φ*h)_ab.
double energy_density(const MetricField& g, const MapField& phi,
                      const MetricField& h, std::span<const double> p);

/// Energy-momentum tensor of the map, T_ab = (φ*h)_ab - e(φ) g_ab.
TensorValue stress_energy(const MetricField& g, const MapField& phi,
                          const MetricField& h, std::span<const double> p);

/// Trace g^{ab} T_ab; equals (2 - dim M) e(φ) identically.
double stress_trace(const MetricField& g, const MapField& phi,
                    const MetricField& h, std::span<const double> p);

/// Second fundamental form of the map, slots (i, a, b):
///   β^i_ab = ∂_a∂_bφ^i - Γ^c_ab ∂_cφ^i + Γ'^i_jk(φ) ∂_aφ^j ∂_bφ^k
/// with Γ of the source and Γ' of the target.
TensorValue second_fundamental_form(const MetricField& g, const MapField& phi,
                                    const MetricField& h,
                                    std::span<const double> p);

/// Tension field τ^i = g^{ab} β^i_ab; its vanishing is the harmonic (or, on
/// Lorentzian sources, wave) map equation.
TensorValue tension_field(const MetricField& g, const MapField& phi,
                          const MetricField& h, std::span<const double> p);

/// Divergence ∇^b T_ab of the energy-momentum tensor, computed from exact
/// symbolic partials; slot (a) down.
TensorValue stress_divergence(const MetricField& g, const MapField& phi,
                              const MetricField& h, std::span<const double> p);

/// The pairing h_ij(φ) τ^i ∂_aφ^j that the divergence must equal; slot (a)
/// down.  stress_divergence - tension_pairing is an engine self-check.
TensorValue tension_pairing(const MetricField& g, const MapField& phi,
                            const MetricField& h, std::span<const double> p);

/// Rank of the differential at p (singular values above tol * largest).
int map_rank(const MapField& phi, std::span<const double> p,
             double tol = 1e-10);

}  // namespace mapgeo
