#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "siamix/error.hpp"
#include "siamix/rng.hpp"

namespace siamix {

using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);
bool same_shape(const Shape& a, const Shape& b);

namespace detail {
template <typename T>
struct TensorPayload {
  Shape shape;
  std::vector<T> values;
  std::vector<T> grad;  // empty until touched; same length as values once allocated
  bool requires_grad = false;
};
}  // namespace detail

// Dense row-major N-d float tensor. Value-semantic handle over a shared
// payload: copies alias the same storage, so gradients accumulated through a
// recorded graph are visible to every holder. Values are treated as immutable
// once an op has consumed the tensor; grad buffers and explicit parameter
// updates (init, optimizer) are the sanctioned mutations.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, T value);
  static Tensor from_data(Shape shape, std::vector<T> values);
  static Tensor scalar(T value);
  static Tensor randn(Shape shape, Rng& rng, T stddev = T(1));
  static Tensor truncated_normal(Shape shape, Rng& rng, T stddev, T limit = T(2));

  bool defined() const { return p_ != nullptr; }
  const Shape& shape() const;
  int rank() const { return static_cast<int>(shape().size()); }
  int64_t dim(int i) const;  // negative i counts from the back
  int64_t numel() const;

  std::span<const T> data() const;
  std::span<T> mutable_data();

  T item() const;                              // contract: numel == 1
  T at(std::initializer_list<int64_t> idx) const;  // row-major multi-index read

  bool requires_grad() const;
  Tensor& set_requires_grad(bool value);

  bool has_grad() const;          // grad buffer materialized?
  std::span<T> grad();            // materializes zeros on first access
  std::span<const T> grad_view() const;  // empty span when not materialized
  void zero_grad();
  void accumulate_grad(std::span<const T> delta);

  bool all_finite() const;

  // payload identity, used as a stable key by the optimizer/graph
  const void* id() const { return p_.get(); }
  detail::TensorPayload<T>* payload() const { return p_.get(); }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorPayload<T>> p) : p_(std::move(p)) {}
  detail::TensorPayload<T>& ref() const;
  std::shared_ptr<detail::TensorPayload<T>> p_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

// Integer label map (class indices), shape [.., H, W]. Not differentiable.
struct LabelMap {
  Shape shape;
  std::vector<int32_t> values;

  int64_t numel() const { return shape_numel(shape); }
  static LabelMap zeros(Shape shape) {
    LabelMap m;
    m.values.assign(static_cast<size_t>(shape_numel(shape)), 0);
    m.shape = std::move(shape);
    return m;
  }
};

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace siamix
