#pragma once

#include <span>

#include "mapgeo/metric.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

// Curvature conventions used throughout (fixed so the round sphere has
// positive-definite Ricci and positive scalar curvature):
//   Γ^c_ab   = 1/2 g^{cd} (∂_a g_db + ∂_b g_da - ∂_d g_ab)
//   R^d_cab  = ∂_a Γ^d_bc - ∂_b Γ^d_ac + Γ^d_ae Γ^e_bc - Γ^d_be Γ^e_ac
//   R_abcd   = g_ae R^e_bcd          (antisymmetric in (a,b) and (c,d))
//   Ric_ab   = R^c_acb,   R = g^{ab} Ric_ab
// Lorentzian signature convention: (+, -, ..., -); timelike vectors have
// positive norm.

/// Christoffel symbols Γ^c_ab as a (up, down, down) tensor, slots (c, a, b).
TensorValue christoffel(const MetricField& g, std::span<const double> p);

/// Fully lowered curvature tensor R_abcd.
TensorValue riemann(const MetricField& g, std::span<const double> p);

/// Ricci tensor R_ab.
TensorValue ricci(const MetricField& g, std::span<const double> p);

/// Scalar curvature g^{ab} R_ab.
double scalar_curvature(const MetricField& g, std::span<const double> p);

/// Einstein tensor G_ab = R_ab - 1/2 R g_ab.
TensorValue einstein_tensor(const MetricField& g, std::span<const double> p);

/// Coordinate partials ∂_c R_ab, slots (c, a, b).
TensorValue ricci_partial(const MetricField& g, std::span<const double> p);

/// Covariant derivative ∇_c R_ab, slots (c, a, b).
TensorValue ricci_covariant_derivative(const MetricField& g, std::span<const double> p);

/// Divergence of the Einstein tensor, ∇^b G_ab (identically zero by the
/// contracted differential identity; exposed as an engine self-check).
TensorValue einstein_divergence(const MetricField& g, std::span<const double> p);

/// Covariant derivative of an expression tensor field; the new derivative
/// slot comes first: (∇T)_{c i1..ik} = ∂_c T_{i1..ik} ± Γ corrections.
TensorValue covariant_derivative(const MetricField& g, const TensorField& t,
                                 std::span<const double> p);

/// Divergence ∇^b S_ab of a symmetric 2-down expression field.
TensorValue divergence(const MetricField& g, const TensorField& s,
                       std::span<const double> p);

/// Lie derivative (L_v S)_ab of a 2-down expression field along v.
TensorValue lie_derivative(const VectorField& v, const TensorField& s,
                           std::span<const double> p);

}  // namespace mapgeo
