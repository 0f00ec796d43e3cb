#include "mapgeo/metric.hpp"

#include <cmath>

namespace mapgeo {

namespace {

std::size_t flat_of(const std::vector<int>& shape, std::span<const int> idx) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape[k]) throw ShapeMismatch("field index out of range");
    flat = flat * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

}  // namespace

const Expression& TensorField::comp(std::span<const int> idx) const {
  return comps[flat_of(shape, idx)];
}

Expression& TensorField::comp(std::span<const int> idx) {
  return comps[flat_of(shape, idx)];
}

TensorValue TensorField::value(std::span<const double> p) const {
  TensorValue out(shape, variance);
  auto data = out.data();
  for (std::size_t i = 0; i < comps.size(); ++i) data[i] = comps[i].evaluate(p);
  return out;
}

TensorValue VectorField::value(std::span<const double> p) const {
  TensorValue out({chart.dim()}, {Variance::Up});
  auto data = out.data();
  for (std::size_t i = 0; i < comps.size(); ++i) data[i] = comps[i].evaluate(p);
  return out;
}

TensorField VectorField::as_field() const {
  return TensorField{chart, {chart.dim()}, {Variance::Up}, comps};
}

MetricField::MetricField(Chart chart, std::vector<Expression> lower_triangle,
                         std::vector<int> signature)
    : chart_(std::move(chart)), signature_(std::move(signature)),
      comps_(std::move(lower_triangle)) {
  chart_.validate();
  const int d = chart_.dim();
  const std::size_t tri_size = static_cast<std::size_t>(d) * (d + 1) / 2;
  if (comps_.size() != tri_size)
    throw ShapeMismatch("metric needs dim*(dim+1)/2 lower-triangle components");
  if (static_cast<int>(signature_.size()) != d)
    throw ShapeMismatch("declared signature length must equal the dimension");
  for (int s : signature_)
    if (s != 1 && s != -1) throw ShapeMismatch("signature entries must be +1 or -1");
  for (const auto& e : comps_) {
    if (!e.valid()) throw ShapeMismatch("metric component expression is empty");
    if (e.num_vars() != d)
      throw ShapeMismatch("metric component is over the wrong coordinate list");
  }
  vars_ = comps_.front().vars();

  // Exact derivative tables.  Third order is needed because one covariant
  // derivative of curvature consumes three derivatives of the metric.
  const std::size_t dd = static_cast<std::size_t>(d);
  d1_.resize(dd * tri_size);
  d2_.resize(dd * dd * tri_size);
  d3_.resize(dd * dd * dd * tri_size);
  for (std::size_t t = 0; t < tri_size; ++t) {
    for (int c = 0; c < d; ++c) {
      Expression dc = comps_[t].derivative(c);
      d1_[c * tri_size + t] = dc;
      for (int e = 0; e < d; ++e) {
        Expression dce = dc.derivative(e);
        d2_[(c * dd + e) * tri_size + t] = dce;
        for (int f = 0; f < d; ++f)
          d3_[((c * dd + e) * dd + f) * tri_size + t] = dce.derivative(f);
      }
    }
  }
}

MetricField MetricField::diagonal(Chart chart, std::vector<Expression> diag,
                                  std::vector<int> signature) {
  const int d = chart.dim();
  if (static_cast<int>(diag.size()) != d)
    throw ShapeMismatch("diagonal metric needs one component per coordinate");
  VarList vars = diag.front().vars();
  std::vector<Expression> tri(static_cast<std::size_t>(d) * (d + 1) / 2,
                              Expression::constant(0.0, vars));
  for (int a = 0; a < d; ++a)
    tri[static_cast<std::size_t>(a) * (a + 1) / 2 + a] = diag[static_cast<std::size_t>(a)];
  return MetricField(std::move(chart), std::move(tri), std::move(signature));
}

std::size_t MetricField::tri(int a, int b) const {
  if (a < b) std::swap(a, b);
  return static_cast<std::size_t>(a) * (a + 1) / 2 + static_cast<std::size_t>(b);
}

const Expression& MetricField::component(int a, int b) const { return comps_[tri(a, b)]; }

const Expression& MetricField::d1(int c, int a, int b) const {
  const std::size_t tri_size = comps_.size();
  return d1_[static_cast<std::size_t>(c) * tri_size + tri(a, b)];
}

const Expression& MetricField::d2(int c, int d, int a, int b) const {
  const std::size_t tri_size = comps_.size();
  const std::size_t dd = static_cast<std::size_t>(dim());
  return d2_[(static_cast<std::size_t>(c) * dd + static_cast<std::size_t>(d)) * tri_size +
             tri(a, b)];
}

const Expression& MetricField::d3(int c, int d, int e, int a, int b) const {
  const std::size_t tri_size = comps_.size();
  const std::size_t dd = static_cast<std::size_t>(dim());
  return d3_[((static_cast<std::size_t>(c) * dd + static_cast<std::size_t>(d)) * dd +
              static_cast<std::size_t>(e)) *
                 tri_size +
             tri(a, b)];
}

TensorValue MetricField::value(std::span<const double> p) const {
  const int d = dim();
  TensorValue out({d, d}, {Variance::Down, Variance::Down});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= a; ++b) {
      double v = comps_[tri(a, b)].evaluate(p);
      out({a, b}) = v;
      out({b, a}) = v;
    }
  return out;
}

Eigen::MatrixXd invert_metric_matrix(const Eigen::MatrixXd& g,
                                     std::span<const double> p) {
  const int d = static_cast<int>(g.rows());
  const double scale = g.cwiseAbs().maxCoeff();
  const double det = g.determinant();
  const double threshold = 1e-13 * std::pow(std::max(scale, 1e-300), d);
  if (std::abs(det) < threshold)
    throw SingularMetric(Point(p.begin(), p.end()), std::abs(det));
  return g.inverse();
}

TensorValue MetricField::inverse_value(std::span<const double> p) const {
  const int d = dim();
  Eigen::MatrixXd g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= a; ++b) g(a, b) = g(b, a) = comps_[tri(a, b)].evaluate(p);
  Eigen::MatrixXd inv = invert_metric_matrix(g, p);
  TensorValue out({d, d}, {Variance::Up, Variance::Up});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out({a, b}) = inv(a, b);
  return out;
}

void MetricField::verify_signature(std::span<const Point> points) const {
  int want_pos = 0, want_neg = 0;
  for (int s : signature_) (s > 0 ? want_pos : want_neg)++;

  std::vector<std::string> issues;
  for (const auto& p : points) {
    const int d = dim();
    Eigen::MatrixXd g(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) g(a, b) = g(b, a) = comps_[tri(a, b)].evaluate(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
    const auto& ev = solver.eigenvalues();
    const double scale = std::max(1e-300, g.cwiseAbs().maxCoeff());
    int pos = 0, neg = 0;
    bool degenerate = false;
    for (int i = 0; i < d; ++i) {
      if (std::abs(ev[i]) < 1e-13 * scale) degenerate = true;
      else (ev[i] > 0 ? pos : neg)++;
    }
    if (degenerate || pos != want_pos || neg != want_neg) {
      std::string where = "(";
      for (std::size_t i = 0; i < p.size(); ++i)
        where += (i ? ", " : "") + std::to_string(p[i]);
      where += ")";
      issues.push_back("metric signature check failed at " + where);
      if (issues.size() >= 5) break;  // enough evidence
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

MetricJet metric_jet(const MetricField& gf, std::span<const double> p, int order) {
  const int d = gf.dim();
  MetricJet jet;
  jet.dim = d;
  jet.order = order;

  jet.g.resize(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= a; ++b) jet.g(a, b) = jet.g(b, a) = gf.component(a, b).evaluate(p);
  jet.det = jet.g.determinant();
  jet.ginv = invert_metric_matrix(jet.g, p);

  if (order < 1) return jet;

  auto sym_eval = [&](auto&& expr_at) {
    Eigen::MatrixXd m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) m(a, b) = m(b, a) = expr_at(a, b).evaluate(p);
    return m;
  };

  jet.dg.resize(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c)
    jet.dg[static_cast<std::size_t>(c)] =
        sym_eval([&](int a, int b) -> const Expression& { return gf.d1(c, a, b); });

  // Γ^c_ab = 1/2 g^{cd} (∂_a g_db + ∂_b g_da - ∂_d g_ab)
  auto christoffel_source = [&](int dd, int a, int b) {
    return jet.dg[static_cast<std::size_t>(a)](dd, b) +
           jet.dg[static_cast<std::size_t>(b)](dd, a) -
           jet.dg[static_cast<std::size_t>(dd)](a, b);
  };
  jet.gamma.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, d));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) {
        double acc = 0.0;
        for (int e = 0; e < d; ++e) acc += jet.ginv(c, e) * christoffel_source(e, a, b);
        jet.gamma[static_cast<std::size_t>(c)](a, b) =
            jet.gamma[static_cast<std::size_t>(c)](b, a) = 0.5 * acc;
      }

  // ∂_c g^{-1} = -g^{-1} (∂_c g) g^{-1}
  jet.dginv.resize(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c)
    jet.dginv[static_cast<std::size_t>(c)] =
        -jet.ginv * jet.dg[static_cast<std::size_t>(c)] * jet.ginv;

  if (order < 2) return jet;

  jet.ddg.assign(static_cast<std::size_t>(d),
                 std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d)));
  for (int c = 0; c < d; ++c)
    for (int e = 0; e < d; ++e)
      jet.ddg[static_cast<std::size_t>(c)][static_cast<std::size_t>(e)] =
          sym_eval([&](int a, int b) -> const Expression& { return gf.d2(c, e, a, b); });

  // ∂_e S_dab where S_dab = ∂_a g_db + ∂_b g_da - ∂_d g_ab
  auto dS = [&](int e, int dd, int a, int b) {
    return jet.ddg[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)](dd, b) +
           jet.ddg[static_cast<std::size_t>(e)][static_cast<std::size_t>(b)](dd, a) -
           jet.ddg[static_cast<std::size_t>(e)][static_cast<std::size_t>(dd)](a, b);
  };

  jet.dgamma.assign(static_cast<std::size_t>(d),
                    std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d),
                                                 Eigen::MatrixXd::Zero(d, d)));
  for (int e = 0; e < d; ++e)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b <= a; ++b) {
          double acc = 0.0;
          for (int f = 0; f < d; ++f) {
            acc += jet.dginv[static_cast<std::size_t>(e)](c, f) * christoffel_source(f, a, b);
            acc += jet.ginv(c, f) * dS(e, f, a, b);
          }
          jet.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)](a, b) =
              jet.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)](b, a) =
                  0.5 * acc;
        }

  if (order < 3) return jet;

  jet.dddg.assign(
      static_cast<std::size_t>(d),
      std::vector<std::vector<Eigen::MatrixXd>>(
          static_cast<std::size_t>(d),
          std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d))));
  for (int c = 0; c < d; ++c)
    for (int e = 0; e < d; ++e)
      for (int f = 0; f < d; ++f)
        jet.dddg[static_cast<std::size_t>(c)][static_cast<std::size_t>(e)]
                [static_cast<std::size_t>(f)] = sym_eval(
                    [&](int a, int b) -> const Expression& { return gf.d3(c, e, f, a, b); });

  // ∂_e ∂_f g^{-1} by differentiating -g^{-1} (∂_f g) g^{-1} once more.
  jet.ddginv.assign(static_cast<std::size_t>(d),
                    std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d)));
  for (int e = 0; e < d; ++e)
    for (int f = 0; f < d; ++f) {
      const auto& dgf = jet.dg[static_cast<std::size_t>(f)];
      const auto& ddgef = jet.ddg[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)];
      jet.ddginv[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)] =
          -(jet.dginv[static_cast<std::size_t>(e)] * dgf * jet.ginv +
            jet.ginv * ddgef * jet.ginv +
            jet.ginv * dgf * jet.dginv[static_cast<std::size_t>(e)]);
    }

  auto ddS = [&](int e, int f, int dd, int a, int b) {
    auto& t = jet.dddg;
    return t[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]
            [static_cast<std::size_t>(a)](dd, b) +
           t[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]
            [static_cast<std::size_t>(b)](dd, a) -
           t[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]
            [static_cast<std::size_t>(dd)](a, b);
  };

  jet.ddgamma.assign(
      static_cast<std::size_t>(d),
      std::vector<std::vector<Eigen::MatrixXd>>(
          static_cast<std::size_t>(d),
          std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d),
                                       Eigen::MatrixXd::Zero(d, d))));
  for (int e = 0; e < d; ++e)
    for (int f = 0; f < d; ++f)
      for (int c = 0; c < d; ++c)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b <= a; ++b) {
            double acc = 0.0;
            for (int h = 0; h < d; ++h) {
              acc += jet.ddginv[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)](
                         c, h) *
                     christoffel_source(h, a, b);
              acc += jet.dginv[static_cast<std::size_t>(e)](c, h) * dS(f, h, a, b);
              acc += jet.dginv[static_cast<std::size_t>(f)](c, h) * dS(e, h, a, b);
              acc += jet.ginv(c, h) * ddS(e, f, h, a, b);
            }
            jet.ddgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]
                       [static_cast<std::size_t>(c)](a, b) =
                jet.ddgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]
                           [static_cast<std::size_t>(c)](b, a) = 0.5 * acc;
          }

  return jet;
}

}  // namespace mapgeo
