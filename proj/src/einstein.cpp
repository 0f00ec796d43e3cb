#include "mapgeo/einstein.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"

namespace mapgeo {

CouplingContext::CouplingContext(double kappa_in, MetricField g_in,
                                 MapField phi_in, MetricField h_in)
    : kappa(kappa_in),
      g(std::move(g_in)),
      phi(std::move(phi_in)),
      h(std::move(h_in)) {
  std::vector<std::string> issues;
  if (kappa == 0.0) issues.push_back("coupling constant must be nonzero");
  if (phi.source().names != g.chart().names)
    issues.push_back("map source coordinates do not match the metric chart");
  if (phi.target().names != h.chart().names)
    issues.push_back("map target coordinates do not match the target metric chart");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

TensorValue einstein_residual_ricci(const CouplingContext& ctx,
                                    std::span<const double> p) {
  TensorValue r = ricci(ctx.g, p);
  r *= ctx.kappa;
  r -= pullback_metric(ctx.phi, ctx.h, p);
  return r;
}

TensorValue einstein_residual_full(const CouplingContext& ctx,
                                   std::span<const double> p) {
  if (ctx.g.dim() < 3)
    throw DimensionTooSmall(
        "the trace-adjusted residual form is equivalent to the Ricci form "
        "only in dimension >= 3; got dimension " +
        std::to_string(ctx.g.dim()));
  TensorValue r = einstein_tensor(ctx.g, p);
  r *= ctx.kappa;
  r -= stress_energy(ctx.g, ctx.phi, ctx.h, p);
  return r;
}

double trace_relation_residual(const CouplingContext& ctx,
                               std::span<const double> p) {
  return ctx.kappa * scalar_curvature(ctx.g, p) -
         2.0 * energy_density(ctx.g, ctx.phi, ctx.h, p);
}

double DegeneracyReport::conditions_max() const {
  return std::max({std::abs(ric_vv), ric_dot_v.max_abs(), pushforward.max_abs()});
}

DegeneracyReport degeneracy_check(const CouplingContext& ctx,
                                  const VectorField& v,
                                  std::span<const double> p) {
  const int m = ctx.g.dim();
  if (static_cast<int>(v.comps.size()) != m)
    throw ShapeMismatch("direction field dimension does not match the metric");

  const TensorValue ric = ricci(ctx.g, p);
  const TensorValue vv = v.value(p);

  DegeneracyReport rep;
  rep.ric_dot_v = TensorValue({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b) s += ric({a, b}) * vv({b});
    rep.ric_dot_v({a}) = s;
    rep.ric_vv += s * vv({a});
  }

  const int n = ctx.phi.target_dim();
  const TensorValue dphi = ctx.phi.differential(p);
  rep.pushforward = TensorValue({n}, {Variance::Up});
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int a = 0; a < m; ++a) s += dphi({i, a}) * vv({a});
    rep.pushforward({i}) = s;
  }

  // (L_v Ric)_ab = v^c d_c R_ab + R_cb d_a v^c + R_ac d_b v^c.
  const TensorValue dric = ricci_partial(ctx.g, p);
  Eigen::MatrixXd dv(m, m);  // (a, c) = d_a v^c
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a) dv(a, c) = v.comps[c].derivative(a).evaluate(p);
  rep.lie_ric = TensorValue({m, m}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int c = 0; c < m; ++c)
        s += vv({c}) * dric({c, a, b}) + ric({c, b}) * dv(a, c) +
             ric({a, c}) * dv(b, c);
      rep.lie_ric({a, b}) = s;
    }
  return rep;
}

TensorValue ricci_gradient_identity_residual(const CouplingContext& ctx,
                                             std::span<const double> p) {
  const int m = ctx.g.dim();
  const TensorValue grad_ric = ricci_covariant_derivative(ctx.g, p);  // (c,a,b)
  const TensorValue beta = second_fundamental_form(ctx.g, ctx.phi, ctx.h, p);
  const TensorValue dphi = ctx.phi.differential(p);
  const Point image = ctx.phi.value(p);
  const TensorValue hval = ctx.h.value(image);
  const int n = ctx.phi.target_dim();

  TensorValue out({m, m, m},
                  {Variance::Down, Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const double lhs =
            ctx.kappa * (grad_ric({a, b, c}) + grad_ric({b, c, a}) -
                         grad_ric({c, a, b}));
        double rhs = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            rhs += hval({i, j}) * beta({i, a, b}) * dphi({j, c});
        out({a, b, c}) = lhs - 2.0 * rhs;
      }
  return out;
}

TensorValue conservation_orthogonality(const CouplingContext& ctx,
                                       std::span<const double> p) {
  return tension_pairing(ctx.g, ctx.phi, ctx.h, p);
}

double totally_geodesic_check(const CouplingContext& ctx,
                              std::span<const double> p) {
  return second_fundamental_form(ctx.g, ctx.phi, ctx.h, p).max_abs();
}

double flow_invariance_check(const CouplingContext& ctx, const VectorField& v,
                             std::span<const double> t_samples,
                             std::span<const double> p) {
  const int m = ctx.g.dim();
  if (static_cast<int>(v.comps.size()) != m)
    throw ShapeMismatch("direction field dimension does not match the metric");

  double horizon = 0.0;
  for (double t : t_samples) horizon = std::max(horizon, std::abs(t));
  const Point base(p.begin(), p.end());
  const Point image0 = ctx.phi.value(p);
  if (horizon == 0.0) return 0.0;
  const double max_step = 1e-3 * horizon;

  auto velocity = [&](const Point& x) {
    Point out(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) out[a] = v.comps[a].evaluate(x);
    return out;
  };

  double worst = 0.0;
  for (double t : t_samples) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_step)));
    const double dt = t / steps;
    Point x = base;
    Point k1(m), k2(m), k3(m), k4(m), stage(m);
    for (int s = 0; s < steps; ++s) {
      k1 = velocity(x);
      for (int a = 0; a < m; ++a) stage[a] = x[a] + 0.5 * dt * k1[a];
      k2 = velocity(stage);
      for (int a = 0; a < m; ++a) stage[a] = x[a] + 0.5 * dt * k2[a];
      k3 = velocity(stage);
      for (int a = 0; a < m; ++a) stage[a] = x[a] + dt * k3[a];
      k4 = velocity(stage);
      for (int a = 0; a < m; ++a)
        x[a] += dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
      if (!ctx.g.chart().contains(x))
        throw FlowLeftDomain("flow orbit left the chart box near t = " +
                             std::to_string((s + 1) * dt));
    }
    const Point image_t = ctx.phi.value(x);
    for (std::size_t i = 0; i < image_t.size(); ++i)
      worst = std::max(worst, std::abs(image_t[i] - image0[i]));
  }
  return worst;
}

int tensor_rank(const TensorValue& t, double tol) {
  if (t.order() != 2)
    throw ShapeMismatch("rank is defined for 2-tensor values");
  const int rows = t.shape()[0];
  const int cols = t.shape()[1];
  Eigen::MatrixXd mat(rows, cols);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) mat(a, b) = t({a, b});
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double top = sv(0);
  if (top <= tol) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * top) ++rank;
  return rank;
}

}  // namespace mapgeo
