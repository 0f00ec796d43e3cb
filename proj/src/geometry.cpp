#include "mapgeo/geometry.hpp"

#include <vector>

namespace mapgeo {

namespace {

// R^d_cab from a jet of order >= 2.
double riem_up(const MetricJet& j, int d, int c, int a, int b) {
  double r = j.dgamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)](b, c) -
             j.dgamma[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)](a, c);
  for (int e = 0; e < j.dim; ++e) {
    r += j.gamma[static_cast<std::size_t>(d)](a, e) *
             j.gamma[static_cast<std::size_t>(e)](b, c) -
         j.gamma[static_cast<std::size_t>(d)](b, e) *
             j.gamma[static_cast<std::size_t>(e)](a, c);
  }
  return r;
}

// ∂_e R^d_cab from a jet of order >= 3.
double driem_up(const MetricJet& j, int e, int d, int c, int a, int b) {
  double r =
      j.ddgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)]
               [static_cast<std::size_t>(d)](b, c) -
      j.ddgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(b)]
               [static_cast<std::size_t>(d)](a, c);
  for (int f = 0; f < j.dim; ++f) {
    r += j.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(d)](a, f) *
             j.gamma[static_cast<std::size_t>(f)](b, c) +
         j.gamma[static_cast<std::size_t>(d)](a, f) *
             j.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)](b, c) -
         j.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(d)](b, f) *
             j.gamma[static_cast<std::size_t>(f)](a, c) -
         j.gamma[static_cast<std::size_t>(d)](b, f) *
             j.dgamma[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)](a, c);
  }
  return r;
}

Eigen::MatrixXd ricci_matrix(const MetricJet& j) {
  Eigen::MatrixXd ric(j.dim, j.dim);
  for (int a = 0; a < j.dim; ++a)
    for (int b = 0; b < j.dim; ++b) {
      double acc = 0.0;
      for (int c = 0; c < j.dim; ++c) acc += riem_up(j, c, a, c, b);
      ric(a, b) = acc;
    }
  return ric;
}

// ∂_e Ric_ab for all e, from a jet of order >= 3.
std::vector<Eigen::MatrixXd> ricci_partial_matrices(const MetricJet& j) {
  std::vector<Eigen::MatrixXd> dric(static_cast<std::size_t>(j.dim),
                                    Eigen::MatrixXd(j.dim, j.dim));
  for (int e = 0; e < j.dim; ++e)
    for (int a = 0; a < j.dim; ++a)
      for (int b = 0; b < j.dim; ++b) {
        double acc = 0.0;
        for (int c = 0; c < j.dim; ++c) acc += driem_up(j, e, c, a, c, b);
        dric[static_cast<std::size_t>(e)](a, b) = acc;
      }
  return dric;
}

TensorValue matrix_to_tensor(const Eigen::MatrixXd& m, Variance v) {
  const int d = static_cast<int>(m.rows());
  TensorValue out({d, d}, {v, v});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out({a, b}) = m(a, b);
  return out;
}

}  // namespace

TensorValue christoffel(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 1);
  const int d = j.dim;
  TensorValue out({d, d, d}, {Variance::Up, Variance::Down, Variance::Down});
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out({c, a, b}) = j.gamma[static_cast<std::size_t>(c)](a, b);
  return out;
}

TensorValue riemann(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 2);
  const int d = j.dim;
  TensorValue out({d, d, d, d},
                  {Variance::Down, Variance::Down, Variance::Down, Variance::Down});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double acc = 0.0;
          for (int f = 0; f < d; ++f) acc += j.g(a, f) * riem_up(j, f, b, c, e);
          out({a, b, c, e}) = acc;
        }
  return out;
}

TensorValue ricci(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 2);
  return matrix_to_tensor(ricci_matrix(j), Variance::Down);
}

double scalar_curvature(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 2);
  return (j.ginv * ricci_matrix(j)).trace();
}

TensorValue einstein_tensor(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 2);
  Eigen::MatrixXd ric = ricci_matrix(j);
  const double r = (j.ginv * ric).trace();
  return matrix_to_tensor(ric - 0.5 * r * j.g, Variance::Down);
}

TensorValue ricci_partial(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 3);
  auto dric = ricci_partial_matrices(j);
  const int d = j.dim;
  TensorValue out({d, d, d}, {Variance::Down, Variance::Down, Variance::Down});
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out({c, a, b}) = dric[static_cast<std::size_t>(c)](a, b);
  return out;
}

TensorValue ricci_covariant_derivative(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 3);
  Eigen::MatrixXd ric = ricci_matrix(j);
  auto dric = ricci_partial_matrices(j);
  const int d = j.dim;
  TensorValue out({d, d, d}, {Variance::Down, Variance::Down, Variance::Down});
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double acc = dric[static_cast<std::size_t>(c)](a, b);
        for (int e = 0; e < d; ++e) {
          acc -= j.gamma[static_cast<std::size_t>(e)](c, a) * ric(e, b);
          acc -= j.gamma[static_cast<std::size_t>(e)](c, b) * ric(a, e);
        }
        out({c, a, b}) = acc;
      }
  return out;
}

TensorValue einstein_divergence(const MetricField& g, std::span<const double> p) {
  MetricJet j = metric_jet(g, p, 3);
  Eigen::MatrixXd ric = ricci_matrix(j);
  auto dric = ricci_partial_matrices(j);
  const int d = j.dim;
  const double r = (j.ginv * ric).trace();

  // ∂_e R = ∂_e g^{ab} Ric_ab + g^{ab} ∂_e Ric_ab
  std::vector<double> dr(static_cast<std::size_t>(d), 0.0);
  for (int e = 0; e < d; ++e)
    dr[static_cast<std::size_t>(e)] =
        (j.dginv[static_cast<std::size_t>(e)] * ric).trace() +
        (j.ginv * dric[static_cast<std::size_t>(e)]).trace();

  // ∇_c G_ab, then contract with g^{bc}.
  TensorValue out({d}, {Variance::Down});
  for (int a = 0; a < d; ++a) {
    double div = 0.0;
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double cov = dric[static_cast<std::size_t>(c)](a, b) -
                     0.5 * (dr[static_cast<std::size_t>(c)] * j.g(a, b) +
                            r * j.dg[static_cast<std::size_t>(c)](a, b));
        for (int e = 0; e < d; ++e) {
          const double gab_e =
              ric(e, b) - 0.5 * r * j.g(e, b);
          const double gae_e =
              ric(a, e) - 0.5 * r * j.g(a, e);
          cov -= j.gamma[static_cast<std::size_t>(e)](c, a) * gab_e;
          cov -= j.gamma[static_cast<std::size_t>(e)](c, b) * gae_e;
        }
        div += j.ginv(b, c) * cov;
      }
    out({a}) = div;
  }
  return out;
}

TensorValue covariant_derivative(const MetricField& g, const TensorField& t,
                                 std::span<const double> p) {
  const int d = g.dim();
  if (t.chart.dim() != d) throw ShapeMismatch("field chart does not match metric chart");
  for (int extent : t.shape)
    if (extent != d) throw ShapeMismatch("covariant derivative needs chart-shaped slots");

  MetricJet j = metric_jet(g, p, 1);

  const int rank = static_cast<int>(t.shape.size());
  std::vector<int> out_shape(static_cast<std::size_t>(rank) + 1, d);
  std::vector<Variance> out_var;
  out_var.reserve(static_cast<std::size_t>(rank) + 1);
  out_var.push_back(Variance::Down);
  for (auto v : t.variance) out_var.push_back(v);
  TensorValue out(out_shape, out_var);

  // Values and coordinate partials of every component at p.
  TensorValue vals = t.value(p);
  std::vector<TensorValue> dvals;
  dvals.reserve(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) {
    TensorValue dvc(t.shape, t.variance);
    auto data = dvc.data();
    for (std::size_t i = 0; i < t.comps.size(); ++i)
      data[i] = t.comps[i].derivative(c).evaluate(p);
    dvals.push_back(std::move(dvc));
  }

  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  std::vector<int> idx2(static_cast<std::size_t>(rank), 0);
  std::vector<int> out_idx(static_cast<std::size_t>(rank) + 1, 0);
  const std::size_t total = vals.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    // Decode flat into idx.
    std::size_t rem = flat;
    for (int k = rank - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    for (int c = 0; c < d; ++c) {
      double acc = dvals[static_cast<std::size_t>(c)].at(idx);
      for (int k = 0; k < rank; ++k) {
        const int ik = idx[static_cast<std::size_t>(k)];
        const bool up = t.variance[static_cast<std::size_t>(k)] == Variance::Up;
        idx2 = idx;
        for (int e = 0; e < d; ++e) {
          idx2[static_cast<std::size_t>(k)] = e;
          if (up)  // +Γ^{ik}_{ce} T(..e..)
            acc += j.gamma[static_cast<std::size_t>(ik)](c, e) * vals.at(idx2);
          else     // -Γ^{e}_{c ik} T(..e..)
            acc -= j.gamma[static_cast<std::size_t>(e)](c, ik) * vals.at(idx2);
        }
      }
      out_idx[0] = c;
      for (int k = 0; k < rank; ++k) out_idx[static_cast<std::size_t>(k) + 1] = idx[static_cast<std::size_t>(k)];
      out.at(out_idx) = acc;
    }
  }
  return out;
}

TensorValue divergence(const MetricField& g, const TensorField& s,
                       std::span<const double> p) {
  if (s.shape.size() != 2 || s.variance[0] != Variance::Down ||
      s.variance[1] != Variance::Down)
    throw ShapeMismatch("divergence expects a 2-down field");
  TensorValue grad = covariant_derivative(g, s, p);  // (c, a, b)
  TensorValue ginv = g.inverse_value(p);
  const int d = g.dim();
  TensorValue out({d}, {Variance::Down});
  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) acc += ginv({b, c}) * grad({c, a, b});
    out({a}) = acc;
  }
  return out;
}

TensorValue lie_derivative(const VectorField& v, const TensorField& s,
                           std::span<const double> p) {
  if (s.shape.size() != 2 || s.variance[0] != Variance::Down ||
      s.variance[1] != Variance::Down)
    throw ShapeMismatch("lie_derivative expects a 2-down field");
  const int d = s.chart.dim();
  if (v.chart.dim() != d) throw ShapeMismatch("vector field chart mismatch");

  TensorValue vv = v.value(p);
  TensorValue sv = s.value(p);
  // ∂_a v^c and ∂_c S_ab
  Eigen::MatrixXd dv(d, d);  // (a, c) = ∂_a v^c
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      dv(a, c) = v.comps[static_cast<std::size_t>(c)].derivative(a).evaluate(p);

  // (L_v S)_ab = v^c ∂_c S_ab + S_cb ∂_a v^c + S_ac ∂_b v^c
  TensorValue out({d, d}, {Variance::Down, Variance::Down});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) {
        acc += vv({c}) * s.comp({a, b}).derivative(c).evaluate(p);
        acc += sv({c, b}) * dv(a, c);
        acc += sv({a, c}) * dv(b, c);
      }
      out({a, b}) = acc;
    }
  return out;
}

}  // namespace mapgeo
