#include "mapgeo/tensor.hpp"

namespace mapgeo {

TensorValue contract_slot_with_matrix(const TensorValue& t, int slot,
                                      const TensorValue& metric2) {
  const auto& shape = t.shape();
  if (slot < 0 || slot >= t.order()) throw ShapeMismatch("slot out of range");
  if (metric2.order() != 2 || metric2.shape()[0] != metric2.shape()[1])
    throw ShapeMismatch("contraction matrix must be square order 2");
  const int d = shape[static_cast<std::size_t>(slot)];
  if (metric2.shape()[0] != d) throw ShapeMismatch("contraction dimension mismatch");

  std::vector<Variance> out_var = t.variance();
  out_var[static_cast<std::size_t>(slot)] =
      out_var[static_cast<std::size_t>(slot)] == Variance::Up ? Variance::Down
                                                              : Variance::Up;
  TensorValue out(shape, out_var);

  // Strides for walking the slot axis in the flat layout.
  std::size_t stride = 1;
  for (int k = t.order() - 1; k > slot; --k)
    stride *= static_cast<std::size_t>(shape[static_cast<std::size_t>(k)]);
  const std::size_t total = t.size();
  const std::size_t block = stride * static_cast<std::size_t>(d);

  auto src = t.data();
  auto dst = out.data();
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (int a = 0; a < d; ++a) {
        double acc = 0.0;
        for (int b = 0; b < d; ++b)
          acc += metric2({a, b}) * src[base + static_cast<std::size_t>(b) * stride + inner];
        dst[base + static_cast<std::size_t>(a) * stride + inner] = acc;
      }
    }
  }
  return out;
}

}  // namespace mapgeo
