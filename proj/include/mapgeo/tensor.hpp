#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mapgeo/errors.hpp"

namespace mapgeo {

/// Index position of a tensor slot.
enum class Variance { Up, Down };

/// Dense pointwise tensor: a shape, a variance flag per slot, and row-major
/// entries.  Purely a value container; all index gymnastics are explicit.
class TensorValue {
 public:
  TensorValue() = default;

  TensorValue(std::vector<int> shape, std::vector<Variance> variance)
      : shape_(std::move(shape)), variance_(std::move(variance)) {
    if (shape_.size() != variance_.size())
      throw ShapeMismatch("tensor shape and variance lists differ in length");
    std::size_t n = 1;
    for (int d : shape_) {
      if (d <= 0) throw ShapeMismatch("tensor extent must be positive");
      n *= static_cast<std::size_t>(d);
    }
    data_.assign(n, 0.0);
  }

  static TensorValue scalar(double v) {
    TensorValue t({}, {});
    t.data_ = {v};
    return t;
  }

  int order() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<Variance>& variance() const { return variance_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  std::size_t size() const { return data_.size(); }

  std::size_t flat_index(std::span<const int> idx) const {
    if (idx.size() != shape_.size()) throw ShapeMismatch("tensor index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= shape_[k]) throw ShapeMismatch("tensor index out of range");
      flat = flat * static_cast<std::size_t>(shape_[k]) + static_cast<std::size_t>(idx[k]);
    }
    return flat;
  }

  double& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
  double at(std::span<const int> idx) const { return data_[flat_index(idx)]; }

  double& operator()(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double operator()(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  TensorValue& operator+=(const TensorValue& o) {
    require_same_layout(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  TensorValue& operator-=(const TensorValue& o) {
    require_same_layout(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  TensorValue& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(double s, TensorValue t) { return t *= s; }

 private:
  void require_same_layout(const TensorValue& o) const {
    if (shape_ != o.shape_ || variance_ != o.variance_)
      throw ShapeMismatch("tensor layouts differ");
  }

  std::vector<int> shape_;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

/// Contracts `slot` of `t` with a metric (2-down values, to lower) or an
/// inverse metric (2-up values, to raise), flipping the slot's variance.
TensorValue contract_slot_with_matrix(const TensorValue& t, int slot,
                                      const TensorValue& metric2);

inline TensorValue lower_slot(const TensorValue& t, int slot, const TensorValue& g_down) {
  if (t.variance()[static_cast<std::size_t>(slot)] != Variance::Up)
    throw ShapeMismatch("lower_slot applied to a down slot");
  return contract_slot_with_matrix(t, slot, g_down);
}

inline TensorValue raise_slot(const TensorValue& t, int slot, const TensorValue& g_up) {
  if (t.variance()[static_cast<std::size_t>(slot)] != Variance::Down)
    throw ShapeMismatch("raise_slot applied to an up slot");
  return contract_slot_with_matrix(t, slot, g_up);
}

}  // namespace mapgeo
