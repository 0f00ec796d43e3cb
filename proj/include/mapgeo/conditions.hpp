#pragma once

#include <span>
#include <vector>

#include "mapgeo/metric.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

/// Pointwise unit timelike observer direction v^a, g(v,v) = +1.
struct ObserverFrame {
  TensorValue v;  // 1-up
};

/// Pointwise pair of lightlike directions with g(l,l) = g(n,n) = 0 and
/// g(l,n) = 1.
struct NullFrame {
  TensorValue l, n;  // 1-up each
};

/// Validates g(v,v) = 1 to `tol`; throws FrameNotUnit otherwise.
ObserverFrame make_observer_frame(const TensorValue& g, const TensorValue& v,
                                  double tol = 1e-10);

/// Validates the three null-frame normalizations to `tol`; throws
/// FrameNotNull otherwise.
NullFrame make_null_frame(const TensorValue& g, const TensorValue& l,
                          const TensorValue& n, double tol = 1e-10);

/// Builds a null pair from a unit timelike v: s is the g-unit spacelike
/// direction orthogonal to v obtained by projecting the coordinate axes in
/// increasing index order (the first axis whose projection does not vanish
/// wins), and l, n = (v +/- s)/sqrt(2).
NullFrame null_frame_from_timelike(const TensorValue& g, const TensorValue& v,
                                   double tol = 1e-10);

/// Observer-adapted positive definite metric 2 v_a v_b - g_ab (indices
/// lowered with g).  Throws FrameNotUnit if the result fails the positive
/// definiteness that a unit timelike v guarantees.
TensorValue shadow_metric(const TensorValue& g, const ObserverFrame& frame);

/// Its inverse in closed form, 2 v^a v^b - g^{ab}.
TensorValue shadow_metric_inverse(const TensorValue& g,
                                  const ObserverFrame& frame);

/// Observer decomposition of the stress tensor T = f - e g built from the
/// pullback f (the pullback is required: on 2-dimensional sources the trace
/// of T vanishes identically, so e is not recoverable from T alone).
struct EnergySplit {
  double energy = 0.0;    // e = 1/2 g^{ab} f_ab, any sign
  double density = 0.0;   // T(v,v)
  double e_plus = 0.0;    // 1/2 (shadow inverse)^{ab} f_ab; equals density
  TensorValue momentum;   // I_a = T_ab v^b, 1-down
  TensorValue proper;     // J_a = I_a - density v_a, orthogonal to v
  double momentum_norm2 = 0.0;  // g^{ab} I_a I_b; e^2 <= |I|^2 <= e_plus^2
};

EnergySplit energy_split(const TensorValue& pullback, const TensorValue& g,
                         const ObserverFrame& frame);

/// Lightlike decomposition of the same stress tensor: T(l,l) >= 0,
/// T(l,n) >= 0, 0 <= |I|^2 <= 2 T(l,l) T(l,n), and I = T(l,l) n exactly
/// when T(l,n) = 0.
struct NullSplit {
  double t_ll = 0.0;
  double t_ln = 0.0;
  TensorValue momentum;  // I_a = T_ab l^b, 1-down
  double momentum_norm2 = 0.0;
};

NullSplit null_energy_split(const TensorValue& pullback, const TensorValue& g,
                            const NullFrame& frame);

/// Classical energy conditions of a stress tensor against a set of
/// observers: dominant is T(v,v) >= 0 and |I|^2 >= 0, strong is
/// (m-2) T(v,v) >= tr T.  At m = 2 the strong inequality degenerates to
/// 0 >= tr T; it is evaluated literally and flagged, not redefined.
struct FrameConditions {
  double density = 0.0;
  double momentum_norm2 = 0.0;
  double strong_margin = 0.0;  // (m-2) T(v,v) - tr T
  bool dominant = false;
  bool strong = false;
};

struct EnergyConditionReport {
  std::vector<FrameConditions> frames;
  double worst_density = 0.0;
  double worst_momentum_norm2 = 0.0;
  double worst_strong_margin = 0.0;
  bool dominant_all = false;
  bool strong_all = false;
  bool trace_degenerate = false;  // source dimension is 2
};

EnergyConditionReport classical_energy_conditions(
    const TensorValue& stress, const TensorValue& g,
    std::span<const ObserverFrame> frames, double tol = 1e-10);

/// Pure-radiation residuals with respect to a lightlike direction l, as
/// max-norms.  Bracket antisymmetrization uses the 1/k! normalization
/// (average over signed permutations); every condition is an "= 0"
/// statement, so the factor only fixes residual magnitudes.
///   lich1:         R_abcd l^d
///   lich2:         R_ab[cd l_e]
///   bel1:          R_abcd l^b l^d
///   bel2:          l^b R_ab[cd l_e]
///   bel3:          l_[f R_ab][cd l_e]
///   ricci_rad1/2:  R_ab l^b,  R_a[b l_c]
///   einstein_rad1/2: the same with G in place of Ric
struct RadiationReport {
  double lich1 = 0.0, lich2 = 0.0;
  double bel1 = 0.0, bel2 = 0.0, bel3 = 0.0;
  double ricci_rad1 = 0.0, ricci_rad2 = 0.0;
  double einstein_rad1 = 0.0, einstein_rad2 = 0.0;

  double max_lichnerowicz() const;
  double max_bel() const;
};

/// Throws FrameNotNull unless l is lightlike at p (|g(l,l)| <= tol).
RadiationReport radiation_conditions(const MetricField& g,
                                     const VectorField& l,
                                     std::span<const double> p,
                                     double tol = 1e-10);

/// Certificates for the wave normal forms: max-norms of the Killing
/// equation grad_(a l_b), the hypersurface-orthogonality obstruction
/// l_[c grad_a l_b], the full covariant derivative grad_a l_b, and the
/// causal character |g(l,l)|.
struct VectorFieldCertificates {
  double killing = 0.0;
  double hypersurface_orthogonal = 0.0;
  double covariantly_constant = 0.0;
  double lightlike = 0.0;
};

VectorFieldCertificates vector_field_certificates(const MetricField& g,
                                                  const VectorField& l,
                                                  std::span<const double> p);

}  // namespace mapgeo
