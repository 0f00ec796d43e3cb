#include "mapgeo/maps.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "mapgeo/errors.hpp"

namespace mapgeo {

MapField::MapField(Chart source, Chart target, std::vector<Expression> components)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(components)) {
  source_.validate();
  target_.validate();
  const int m = source_.dim();
  const int n = target_.dim();
  if (static_cast<int>(comps_.size()) != n) {
    throw ShapeMismatch("map needs " + std::to_string(n) + " components, got " +
                        std::to_string(comps_.size()));
  }
  for (const auto& c : comps_) {
    if (c.num_vars() != m) {
      throw ShapeMismatch("map component '" + c.unparse() + "' is written in " +
                          std::to_string(c.num_vars()) + " variables; the source chart has " +
                          std::to_string(m));
    }
  }
  d1_.reserve(static_cast<std::size_t>(n * m));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) d1_.push_back(comps_[static_cast<std::size_t>(i)].derivative(a));
  d2_.reserve(static_cast<std::size_t>(n * m * m));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        d2_.push_back(d1_[static_cast<std::size_t>(i * m + a)].derivative(b));
}

const Expression& MapField::component(int i) const {
  return comps_[static_cast<std::size_t>(i)];
}

const Expression& MapField::d1(int i, int a) const {
  return d1_[static_cast<std::size_t>(i * source_dim() + a)];
}

const Expression& MapField::d2(int i, int a, int b) const {
  const int m = source_dim();
  return d2_[static_cast<std::size_t>((i * m + a) * m + b)];
}

Point MapField::value(std::span<const double> p) const {
  Point out(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].evaluate(p);
  return out;
}

TensorValue MapField::differential(std::span<const double> p) const {
  const int n = target_dim();
  const int m = source_dim();
  TensorValue out({n, m}, {Variance::Up, Variance::Down});
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) out({i, a}) = d1(i, a).evaluate(p);
  return out;
}

namespace {

/// Everything the pointwise formulas share: Jacobian, Hessian, target metric
/// at the image point, and its first partials.
struct MapJet {
  int m = 0, n = 0;
  Point image;
  Eigen::MatrixXd jac;                      // (i, a)
  std::vector<Eigen::MatrixXd> hess;        // [i](a, b)
  Eigen::MatrixXd h;                        // h_ij(φ)
  std::vector<Eigen::MatrixXd> dh;          // [k](i, j) = ∂_k h_ij at φ
};

MapJet map_jet(const MapField& phi, const MetricField& h, std::span<const double> p,
               bool need_dh) {
  MapJet out;
  out.m = phi.source_dim();
  out.n = phi.target_dim();
  out.image = phi.value(p);
  out.jac.resize(out.n, out.m);
  for (int i = 0; i < out.n; ++i)
    for (int a = 0; a < out.m; ++a) out.jac(i, a) = phi.d1(i, a).evaluate(p);
  out.hess.assign(static_cast<std::size_t>(out.n), Eigen::MatrixXd(out.m, out.m));
  for (int i = 0; i < out.n; ++i)
    for (int a = 0; a < out.m; ++a)
      for (int b = a; b < out.m; ++b) {
        const double v = phi.d2(i, a, b).evaluate(p);
        out.hess[static_cast<std::size_t>(i)](a, b) = v;
        out.hess[static_cast<std::size_t>(i)](b, a) = v;
      }
  out.h.resize(out.n, out.n);
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) out.h(i, j) = h.component(i, j).evaluate(out.image);
  if (need_dh) {
    out.dh.assign(static_cast<std::size_t>(out.n), Eigen::MatrixXd(out.n, out.n));
    for (int k = 0; k < out.n; ++k)
      for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j)
          out.dh[static_cast<std::size_t>(k)](i, j) = h.d1(k, i, j).evaluate(out.image);
  }
  return out;
}

Eigen::MatrixXd pullback_matrix(const MapJet& mj) {
  return mj.jac.transpose() * mj.h * mj.jac;  // f_ab = B^i_a h_ij B^j_b
}

TensorValue wrap2(const Eigen::MatrixXd& mat) {
  const int d = static_cast<int>(mat.rows());
  TensorValue out({d, d}, {Variance::Down, Variance::Down});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out({a, b}) = mat(a, b);
  return out;
}

}  // namespace

TensorValue pullback_metric(const MapField& phi, const MetricField& h,
                            std::span<const double> p) {
  return wrap2(pullback_matrix(map_jet(phi, h, p, false)));
}

double energy_density(const MetricField& g, const MapField& phi, const MetricField& h,
                      std::span<const double> p) {
  const Eigen::MatrixXd f = pullback_matrix(map_jet(phi, h, p, false));
  const MetricJet jet = metric_jet(g, p, 0);
  return 0.5 * (jet.ginv * f).trace();
}

TensorValue stress_energy(const MetricField& g, const MapField& phi, const MetricField& h,
                          std::span<const double> p) {
  const Eigen::MatrixXd f = pullback_matrix(map_jet(phi, h, p, false));
  const MetricJet jet = metric_jet(g, p, 0);
  const double e = 0.5 * (jet.ginv * f).trace();
  return wrap2(f - e * jet.g);
}

double stress_trace(const MetricField& g, const MapField& phi, const MetricField& h,
                    std::span<const double> p) {
  const Eigen::MatrixXd f = pullback_matrix(map_jet(phi, h, p, false));
  const MetricJet jet = metric_jet(g, p, 0);
  const double e = 0.5 * (jet.ginv * f).trace();
  return (jet.ginv * (f - e * jet.g)).trace();
}

TensorValue second_fundamental_form(const MetricField& g, const MapField& phi,
                                    const MetricField& h, std::span<const double> p) {
  const MapJet mj = map_jet(phi, h, p, false);
  const MetricJet jg = metric_jet(g, p, 1);
  const MetricJet jh = metric_jet(h, mj.image, 1);
  TensorValue out({mj.n, mj.m, mj.m}, {Variance::Up, Variance::Down, Variance::Down});
  for (int i = 0; i < mj.n; ++i)
    for (int a = 0; a < mj.m; ++a)
      for (int b = 0; b < mj.m; ++b) {
        double acc = mj.hess[static_cast<std::size_t>(i)](a, b);
        for (int c = 0; c < mj.m; ++c)
          acc -= jg.gamma[static_cast<std::size_t>(c)](a, b) * mj.jac(i, c);
        for (int j = 0; j < mj.n; ++j)
          for (int k = 0; k < mj.n; ++k)
            acc += jh.gamma[static_cast<std::size_t>(i)](j, k) * mj.jac(j, a) * mj.jac(k, b);
        out({i, a, b}) = acc;
      }
  return out;
}

TensorValue tension_field(const MetricField& g, const MapField& phi, const MetricField& h,
                          std::span<const double> p) {
  const TensorValue beta = second_fundamental_form(g, phi, h, p);
  const MetricJet jet = metric_jet(g, p, 0);
  const int n = phi.target_dim();
  const int m = phi.source_dim();
  TensorValue out({n}, {Variance::Up});
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) acc += jet.ginv(a, b) * beta.at(std::vector<int>{i, a, b});
    out({i}) = acc;
  }
  return out;
}

TensorValue stress_divergence(const MetricField& g, const MapField& phi, const MetricField& h,
                              std::span<const double> p) {
  const MapJet mj = map_jet(phi, h, p, true);
  const MetricJet jet = metric_jet(g, p, 1);
  const int m = mj.m;
  const int n = mj.n;

  const Eigen::MatrixXd f = pullback_matrix(mj);
  const double e = 0.5 * (jet.ginv * f).trace();

  // ∂_c f_ab from the chain rule through the image point.
  std::vector<Eigen::MatrixXd> df(static_cast<std::size_t>(m),
                                  Eigen::MatrixXd::Zero(m, m));
  for (int c = 0; c < m; ++c) {
    Eigen::MatrixXd& out = df[static_cast<std::size_t>(c)];
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            acc += (mj.hess[static_cast<std::size_t>(i)](c, a) * mj.jac(j, b) +
                    mj.jac(i, a) * mj.hess[static_cast<std::size_t>(j)](c, b)) *
                   mj.h(i, j);
            for (int k = 0; k < n; ++k)
              acc += mj.jac(i, a) * mj.jac(j, b) *
                     mj.dh[static_cast<std::size_t>(k)](i, j) * mj.jac(k, c);
          }
        out(a, b) = acc;
      }
  }

  TensorValue div({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int c = 0; c < m; ++c) {
      const double de_c =
          0.5 * ((jet.dginv[static_cast<std::size_t>(c)] * f).trace() +
                 (jet.ginv * df[static_cast<std::size_t>(c)]).trace());
      for (int b = 0; b < m; ++b) {
        // ∇_c T_ab with T = f - e g.
        double grad = df[static_cast<std::size_t>(c)](a, b) - de_c * jet.g(a, b) -
                      e * jet.dg[static_cast<std::size_t>(c)](a, b);
        for (int d = 0; d < m; ++d) {
          const double T_db = f(d, b) - e * jet.g(d, b);
          const double T_ad = f(a, d) - e * jet.g(a, d);
          grad -= jet.gamma[static_cast<std::size_t>(d)](c, a) * T_db;
          grad -= jet.gamma[static_cast<std::size_t>(d)](c, b) * T_ad;
        }
        acc += jet.ginv(b, c) * grad;
      }
    }
    div({a}) = acc;
  }
  return div;
}

TensorValue tension_pairing(const MetricField& g, const MapField& phi, const MetricField& h,
                            std::span<const double> p) {
  const MapJet mj = map_jet(phi, h, p, false);
  const TensorValue tau = tension_field(g, phi, h, p);
  TensorValue out({mj.m}, {Variance::Down});
  for (int a = 0; a < mj.m; ++a) {
    double acc = 0.0;
    for (int i = 0; i < mj.n; ++i)
      for (int j = 0; j < mj.n; ++j) acc += mj.h(i, j) * tau.at(std::vector<int>{i}) * mj.jac(j, a);
    out({a}) = acc;
  }
  return out;
}

int map_rank(const MapField& phi, std::span<const double> p, double tol) {
  const int n = phi.target_dim();
  const int m = phi.source_dim();
  Eigen::MatrixXd jac(n, m);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) jac(i, a) = phi.d1(i, a).evaluate(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
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
