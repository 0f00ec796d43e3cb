#include "mapgeo/conditions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"

namespace mapgeo {

namespace {

constexpr int kPerm3[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                              {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
constexpr double kSign3[6] = {1, 1, 1, -1, -1, -1};

int square_dim(const TensorValue& g) {
  if (g.order() != 2 || g.shape()[0] != g.shape()[1])
    throw ShapeMismatch("metric value must be a square 2-tensor");
  return g.shape()[0];
}

Eigen::MatrixXd to_matrix(const TensorValue& t) {
  const int r = t.shape()[0];
  const int c = t.shape()[1];
  Eigen::MatrixXd m(r, c);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < c; ++b) m(a, b) = t({a, b});
  return m;
}

double pair_norm(const TensorValue& g, const TensorValue& a,
                 const TensorValue& b) {
  const int m = square_dim(g);
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += g({i, j}) * a({i}) * b({j});
  return s;
}

TensorValue lower_vector(const TensorValue& g, const TensorValue& v) {
  const int m = square_dim(g);
  TensorValue out({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b) s += g({a, b}) * v({b});
    out({a}) = s;
  }
  return out;
}

void require_vector(const TensorValue& v, int dim, const char* what) {
  if (v.order() != 1 || v.shape()[0] != dim)
    throw ShapeMismatch(std::string(what) + " must be a dimension-matched vector");
}

double half_trace_against(const Eigen::MatrixXd& inverse, const TensorValue& f) {
  double s = 0.0;
  for (int a = 0; a < inverse.rows(); ++a)
    for (int b = 0; b < inverse.cols(); ++b) s += inverse(a, b) * f({a, b});
  return 0.5 * s;
}

}  // namespace

ObserverFrame make_observer_frame(const TensorValue& g, const TensorValue& v,
                                  double tol) {
  const int m = square_dim(g);
  require_vector(v, m, "observer direction");
  const double norm = pair_norm(g, v, v);
  if (std::abs(norm - 1.0) > tol)
    throw FrameNotUnit("observer direction has g(v,v) = " +
                       std::to_string(norm) + ", expected 1");
  return ObserverFrame{v};
}

NullFrame make_null_frame(const TensorValue& g, const TensorValue& l,
                          const TensorValue& n, double tol) {
  const int m = square_dim(g);
  require_vector(l, m, "first null direction");
  require_vector(n, m, "second null direction");
  const double ll = pair_norm(g, l, l);
  const double nn = pair_norm(g, n, n);
  const double ln = pair_norm(g, l, n);
  if (std::abs(ll) > tol || std::abs(nn) > tol || std::abs(ln - 1.0) > tol)
    throw FrameNotNull("null frame normalizations are g(l,l) = " +
                       std::to_string(ll) + ", g(n,n) = " + std::to_string(nn) +
                       ", g(l,n) = " + std::to_string(ln));
  return NullFrame{l, n};
}

NullFrame null_frame_from_timelike(const TensorValue& g, const TensorValue& v,
                                   double tol) {
  ObserverFrame obs = make_observer_frame(g, v, tol);
  const int m = square_dim(g);

  // Project coordinate axes onto the orthogonal complement of v and take
  // the first one that survives; v's complement is spacelike, so the
  // candidate's g-norm is negative.
  TensorValue s({m}, {Variance::Up});
  bool found = false;
  for (int k = 0; k < m && !found; ++k) {
    TensorValue axis({m}, {Variance::Up});
    axis({k}) = 1.0;
    const double along = pair_norm(g, axis, obs.v);
    TensorValue candidate = axis;
    for (int a = 0; a < m; ++a) candidate({a}) -= along * obs.v({a});
    const double norm = pair_norm(g, candidate, candidate);
    if (norm < -1e-8) {
      const double scale = 1.0 / std::sqrt(-norm);
      for (int a = 0; a < m; ++a) s({a}) = candidate({a}) * scale;
      found = true;
    }
  }
  if (!found)
    throw FrameNotNull(
        "no spacelike direction orthogonal to the observer was found");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  TensorValue l({m}, {Variance::Up});
  TensorValue n({m}, {Variance::Up});
  for (int a = 0; a < m; ++a) {
    l({a}) = (obs.v({a}) + s({a})) * inv_sqrt2;
    n({a}) = (obs.v({a}) - s({a})) * inv_sqrt2;
  }
  return make_null_frame(g, l, n, std::max(tol, 1e-8));
}

TensorValue shadow_metric(const TensorValue& g, const ObserverFrame& frame) {
  const int m = square_dim(g);
  const TensorValue vd = lower_vector(g, frame.v);
  TensorValue out({m, m}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      out({a, b}) = 2.0 * vd({a}) * vd({b}) - g({a, b});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_matrix(out));
  const double floor = -1e-10 * std::max(1.0, out.max_abs());
  if (eig.eigenvalues().minCoeff() <= floor)
    throw FrameNotUnit(
        "observer-adapted metric is not positive definite; the direction is "
        "not unit timelike for this metric");
  return out;
}

TensorValue shadow_metric_inverse(const TensorValue& g,
                                  const ObserverFrame& frame) {
  const int m = square_dim(g);
  const Eigen::MatrixXd ginv = invert_metric_matrix(to_matrix(g), Point{});
  TensorValue out({m, m}, {Variance::Up, Variance::Up});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      out({a, b}) = 2.0 * frame.v({a}) * frame.v({b}) - ginv(a, b);
  return out;
}

EnergySplit energy_split(const TensorValue& pullback, const TensorValue& g,
                         const ObserverFrame& frame) {
  const int m = square_dim(g);
  if (pullback.order() != 2 || pullback.shape() != g.shape())
    throw ShapeMismatch("pullback and metric value shapes differ");
  make_observer_frame(g, frame.v, 1e-8);  // defensive recheck

  const Eigen::MatrixXd gmat = to_matrix(g);
  const Eigen::MatrixXd ginv = invert_metric_matrix(gmat, Point{});

  EnergySplit split;
  split.energy = half_trace_against(ginv, pullback);

  // Stress tensor T = f - e g.
  TensorValue stress = pullback;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) stress({a, b}) -= split.energy * g({a, b});

  const TensorValue vd = lower_vector(g, frame.v);
  split.momentum = TensorValue({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b) s += stress({a, b}) * frame.v({b});
    split.momentum({a}) = s;
    split.density += s * frame.v({a});
  }

  // Independent route to the density: invert the observer-adapted metric
  // numerically and contract; agreement with T(v,v) is the split identity.
  const TensorValue shadow = shadow_metric(g, frame);
  const Eigen::MatrixXd shadow_inv =
      invert_metric_matrix(to_matrix(shadow), Point{});
  split.e_plus = half_trace_against(shadow_inv, pullback);

  split.proper = split.momentum;
  for (int a = 0; a < m; ++a) split.proper({a}) -= split.density * vd({a});

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      split.momentum_norm2 += ginv(a, b) * split.momentum({a}) * split.momentum({b});
  return split;
}

NullSplit null_energy_split(const TensorValue& pullback, const TensorValue& g,
                            const NullFrame& frame) {
  const int m = square_dim(g);
  if (pullback.order() != 2 || pullback.shape() != g.shape())
    throw ShapeMismatch("pullback and metric value shapes differ");
  make_null_frame(g, frame.l, frame.n, 1e-8);  // defensive recheck

  const Eigen::MatrixXd ginv = invert_metric_matrix(to_matrix(g), Point{});
  const double e = half_trace_against(ginv, pullback);

  NullSplit split;
  split.t_ll = 0.0;
  split.momentum = TensorValue({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b) s += pullback({a, b}) * frame.l({b});
    // T_ab l^b = f_ab l^b - e l_a.
    double la = 0.0;
    for (int b = 0; b < m; ++b) la += g({a, b}) * frame.l({b});
    split.momentum({a}) = s - e * la;
    split.t_ll += split.momentum({a}) * frame.l({a});
    split.t_ln += split.momentum({a}) * frame.n({a});
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      split.momentum_norm2 += ginv(a, b) * split.momentum({a}) * split.momentum({b});
  return split;
}

EnergyConditionReport classical_energy_conditions(
    const TensorValue& stress, const TensorValue& g,
    std::span<const ObserverFrame> frames, double tol) {
  const int m = square_dim(g);
  if (stress.order() != 2 || stress.shape() != g.shape())
    throw ShapeMismatch("stress and metric value shapes differ");
  const Eigen::MatrixXd ginv = invert_metric_matrix(to_matrix(g), Point{});

  double trace = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) trace += ginv(a, b) * stress({a, b});

  EnergyConditionReport report;
  report.trace_degenerate = (m == 2);
  report.dominant_all = true;
  report.strong_all = true;
  bool first = true;
  for (const ObserverFrame& frame : frames) {
    make_observer_frame(g, frame.v, 1e-8);  // defensive recheck
    FrameConditions fc;
    TensorValue momentum({m}, {Variance::Down});
    for (int a = 0; a < m; ++a) {
      double s = 0.0;
      for (int b = 0; b < m; ++b) s += stress({a, b}) * frame.v({b});
      momentum({a}) = s;
      fc.density += s * frame.v({a});
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        fc.momentum_norm2 += ginv(a, b) * momentum({a}) * momentum({b});
    fc.strong_margin = (m - 2.0) * fc.density - trace;
    fc.dominant = fc.density >= -tol && fc.momentum_norm2 >= -tol;
    fc.strong = fc.strong_margin >= -tol;

    report.dominant_all = report.dominant_all && fc.dominant;
    report.strong_all = report.strong_all && fc.strong;
    if (first || fc.density < report.worst_density)
      report.worst_density = fc.density;
    if (first || fc.momentum_norm2 < report.worst_momentum_norm2)
      report.worst_momentum_norm2 = fc.momentum_norm2;
    if (first || fc.strong_margin < report.worst_strong_margin)
      report.worst_strong_margin = fc.strong_margin;
    first = false;
    report.frames.push_back(fc);
  }
  return report;
}

double RadiationReport::max_lichnerowicz() const {
  return std::max(lich1, lich2);
}

double RadiationReport::max_bel() const {
  return std::max({bel1, bel2, bel3});
}

RadiationReport radiation_conditions(const MetricField& g,
                                     const VectorField& l,
                                     std::span<const double> p, double tol) {
  const int m = g.dim();
  if (static_cast<int>(l.comps.size()) != m)
    throw ShapeMismatch("direction field dimension does not match the metric");

  const TensorValue gv = g.value(p);
  const TensorValue lu = l.value(p);
  const TensorValue ld = lower_vector(gv, lu);
  double ll = 0.0;
  for (int a = 0; a < m; ++a) ll += ld({a}) * lu({a});
  if (std::abs(ll) > tol)
    throw FrameNotNull("direction is not lightlike: g(l,l) = " +
                       std::to_string(ll));

  const TensorValue R = riemann(g, p);
  const TensorValue ric = ricci(g, p);
  const TensorValue G = einstein_tensor(g, p);

  RadiationReport rep;

  // lich1 and bel1: plain contractions of the curvature with l.
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s1 = 0.0;
        for (int d = 0; d < m; ++d) s1 += R({a, b, c, d}) * lu({d});
        rep.lich1 = std::max(rep.lich1, std::abs(s1));
      }
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      double s = 0.0;
      for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) s += R({a, b, c, d}) * lu({b}) * lu({d});
      rep.bel1 = std::max(rep.bel1, std::abs(s));
    }

  // lich2 / bel2: antisymmetrize R_abcd l_e over (c, d, e); bel2 contracts
  // the remaining b slot with l.
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      for (int d = 0; d < m; ++d)
        for (int e = 0; e < m; ++e) {
          const int idx[3] = {c, d, e};
          double anti_contracted = 0.0;
          for (int b = 0; b < m; ++b) {
            double anti = 0.0;
            for (int perm = 0; perm < 6; ++perm)
              anti += kSign3[perm] * R({a, b, idx[kPerm3[perm][0]],
                                        idx[kPerm3[perm][1]]}) *
                      ld({idx[kPerm3[perm][2]]});
            anti /= 6.0;
            rep.lich2 = std::max(rep.lich2, std::abs(anti));
            anti_contracted += lu({b}) * anti;
          }
          rep.bel2 = std::max(rep.bel2, std::abs(anti_contracted));
        }

  // bel3: double antisymmetrization over (f, a, b) and (c, d, e).
  for (int f = 0; f < m; ++f)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (int d = 0; d < m; ++d)
            for (int e = 0; e < m; ++e) {
              const int left[3] = {f, a, b};
              const int right[3] = {c, d, e};
              double anti = 0.0;
              for (int ps = 0; ps < 6; ++ps)
                for (int pt = 0; pt < 6; ++pt)
                  anti += kSign3[ps] * kSign3[pt] *
                          ld({left[kPerm3[ps][0]]}) *
                          R({left[kPerm3[ps][1]], left[kPerm3[ps][2]],
                             right[kPerm3[pt][0]], right[kPerm3[pt][1]]}) *
                          ld({right[kPerm3[pt][2]]});
              anti /= 36.0;
              rep.bel3 = std::max(rep.bel3, std::abs(anti));
            }

  // Ricci and Einstein forms.
  auto rank2_forms = [&](const TensorValue& t, double& rad1, double& rad2) {
    for (int a = 0; a < m; ++a) {
      double s = 0.0;
      for (int b = 0; b < m; ++b) s += t({a, b}) * lu({b});
      rad1 = std::max(rad1, std::abs(s));
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          rad2 = std::max(rad2, std::abs(0.5 * (t({a, b}) * ld({c}) -
                                                t({a, c}) * ld({b}))));
  };
  rank2_forms(ric, rep.ricci_rad1, rep.ricci_rad2);
  rank2_forms(G, rep.einstein_rad1, rep.einstein_rad2);
  return rep;
}

VectorFieldCertificates vector_field_certificates(const MetricField& g,
                                                  const VectorField& l,
                                                  std::span<const double> p) {
  const int m = g.dim();
  if (static_cast<int>(l.comps.size()) != m)
    throw ShapeMismatch("direction field dimension does not match the metric");

  // Lower the field symbolically so the covariant derivative is exact.
  TensorField flat;
  flat.chart = g.chart();
  flat.shape = {m};
  flat.variance = {Variance::Down};
  flat.comps.reserve(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b) {
    Expression acc = g.component(b, 0) * l.comps[0];
    for (int c = 1; c < m; ++c) acc = acc + g.component(b, c) * l.comps[c];
    flat.comps.push_back(std::move(acc));
  }

  const TensorValue grad = covariant_derivative(g, flat, p);  // (a, b)
  const TensorValue gv = g.value(p);
  const TensorValue lu = l.value(p);
  const TensorValue ld = lower_vector(gv, lu);

  VectorFieldCertificates cert;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      cert.killing = std::max(cert.killing,
                              0.5 * std::abs(grad({a, b}) + grad({b, a})));
      cert.covariantly_constant =
          std::max(cert.covariantly_constant, std::abs(grad({a, b})));
    }
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const int idx[3] = {c, a, b};
        double anti = 0.0;
        for (int perm = 0; perm < 6; ++perm)
          anti += kSign3[perm] * ld({idx[kPerm3[perm][0]]}) *
                  grad({idx[kPerm3[perm][1]], idx[kPerm3[perm][2]]});
        anti /= 6.0;
        cert.hypersurface_orthogonal =
            std::max(cert.hypersurface_orthogonal, std::abs(anti));
      }
  double ll = 0.0;
  for (int a = 0; a < m; ++a) ll += ld({a}) * lu({a});
  cert.lightlike = std::abs(ll);
  return cert;
}

}  // namespace mapgeo
