#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "mapgeo/chart.hpp"
#include "mapgeo/expr.hpp"
#include "mapgeo/tensor.hpp"

namespace mapgeo {

/// Tensor field with symbolically differentiable components.
struct TensorField {
  Chart chart;
  std::vector<int> shape;
  std::vector<Variance> variance;
  std::vector<Expression> comps;  // row-major over shape

  const Expression& comp(std::span<const int> idx) const;
  Expression& comp(std::span<const int> idx);
  const Expression& comp(std::initializer_list<int> idx) const {
    return comp(std::span<const int>(idx.begin(), idx.size()));
  }
  TensorValue value(std::span<const double> p) const;
};

/// Contravariant vector field with expression components.
struct VectorField {
  Chart chart;
  std::vector<Expression> comps;

  TensorValue value(std::span<const double> p) const;
  TensorField as_field() const;
};

/// Pseudo-Riemannian metric with expression components and a declared
/// signature.  Symbolic partial derivatives of every component are prepared
/// up to third order at construction, making pointwise curvature (and one
/// covariant derivative of curvature) exact to rounding.
class MetricField {
 public:
  MetricField(Chart chart, std::vector<Expression> lower_triangle,
              std::vector<int> signature);

  static MetricField diagonal(Chart chart, std::vector<Expression> diag,
                              std::vector<int> signature);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const std::vector<int>& signature() const { return signature_; }
  const VarList& vars() const { return vars_; }

  /// Component g_ab (symmetric storage).
  const Expression& component(int a, int b) const;
  /// Exact partial derivatives of components, up to third order.
  const Expression& d1(int c, int a, int b) const;
  const Expression& d2(int c, int d, int a, int b) const;
  const Expression& d3(int c, int d, int e, int a, int b) const;

  /// Metric values as a 2-down tensor.
  TensorValue value(std::span<const double> p) const;
  /// Inverse metric values as a 2-up tensor; throws SingularMetric.
  TensorValue inverse_value(std::span<const double> p) const;

  /// Checks the declared signature against eigenvalue signs at each point;
  /// throws ValidationError listing every failing point.
  void verify_signature(std::span<const Point> points) const;

 private:
  std::size_t tri(int a, int b) const;

  Chart chart_;
  VarList vars_;
  std::vector<int> signature_;
  std::vector<Expression> comps_;          // lower triangle, tri(a,b)
  std::vector<Expression> d1_, d2_, d3_;   // flattened derivative tables
};

/// Numeric derivative stack of a metric at one point: everything curvature
/// needs, assembled from the symbolic component derivatives.
struct MetricJet {
  int dim = 0;
  int order = 0;
  Eigen::MatrixXd g, ginv;
  double det = 0.0;
  std::vector<Eigen::MatrixXd> dg;                                // [c](a,b)
  std::vector<std::vector<Eigen::MatrixXd>> ddg;                  // [c][d](a,b)
  std::vector<std::vector<std::vector<Eigen::MatrixXd>>> dddg;    // [c][d][e](a,b)
  std::vector<Eigen::MatrixXd> dginv;                             // [c](a,b)
  std::vector<std::vector<Eigen::MatrixXd>> ddginv;               // [c][d](a,b)
  std::vector<Eigen::MatrixXd> gamma;                             // [c](a,b) = Γ^c_ab
  std::vector<std::vector<Eigen::MatrixXd>> dgamma;               // [e][c](a,b) = ∂_e Γ^c_ab
  std::vector<std::vector<std::vector<Eigen::MatrixXd>>> ddgamma; // [e][f][c](a,b)
};

/// Builds the jet at `p`.  `order` 1 gives Christoffel symbols, 2 adds what
/// curvature needs, 3 adds what one derivative of curvature needs.
MetricJet metric_jet(const MetricField& g, std::span<const double> p, int order);

/// Inverts a metric value matrix, enforcing the singularity threshold
/// |det| < 1e-13 * max_entry^dim.
Eigen::MatrixXd invert_metric_matrix(const Eigen::MatrixXd& g,
                                     std::span<const double> p);

}  // namespace mapgeo
