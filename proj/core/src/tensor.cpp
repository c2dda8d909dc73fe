#include "siamix/tensor.hpp"

#include <cmath>
#include <sstream>

namespace siamix {

int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

bool same_shape(const Shape& a, const Shape& b) { return a == b; }

namespace {
void validate_shape(const Shape& shape) {
  for (int64_t d : shape) {
    if (d <= 0) throw ShapeError("dimensions must be positive, got " + shape_str(shape));
  }
}
}  // namespace

template <typename T>
detail::TensorPayload<T>& Tensor<T>::ref() const {
  if (!p_) throw ContractError("use of undefined tensor");
  return *p_;
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
  validate_shape(shape);
  auto p = std::make_shared<detail::TensorPayload<T>>();
  p->values.assign(static_cast<size_t>(shape_numel(shape)), T(0));
  p->shape = std::move(shape);
  p->requires_grad = requires_grad;
  return Tensor(std::move(p));
}

template <typename T>
Tensor<T> Tensor<T>::full(Shape shape, T value) {
  Tensor t = zeros(std::move(shape));
  for (T& v : t.p_->values) v = value;
  return t;
}

template <typename T>
Tensor<T> Tensor<T>::from_data(Shape shape, std::vector<T> values) {
  validate_shape(shape);
  if (shape_numel(shape) != static_cast<int64_t>(values.size())) {
    throw ShapeError("data length " + std::to_string(values.size()) +
                     " does not match shape " + shape_str(shape));
  }
  auto p = std::make_shared<detail::TensorPayload<T>>();
  p->shape = std::move(shape);
  p->values = std::move(values);
  return Tensor(std::move(p));
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value) {
  return from_data({1}, {value});
}

template <typename T>
Tensor<T> Tensor<T>::randn(Shape shape, Rng& rng, T stddev) {
  Tensor t = zeros(std::move(shape));
  for (T& v : t.p_->values) v = static_cast<T>(rng.normal()) * stddev;
  return t;
}

template <typename T>
Tensor<T> Tensor<T>::truncated_normal(Shape shape, Rng& rng, T stddev, T limit) {
  Tensor t = zeros(std::move(shape));
  for (T& v : t.p_->values)
    v = static_cast<T>(rng.truncated_normal(static_cast<double>(stddev), static_cast<double>(limit)));
  return t;
}

template <typename T>
const Shape& Tensor<T>::shape() const {
  return ref().shape;
}

template <typename T>
int64_t Tensor<T>::dim(int i) const {
  const Shape& s = shape();
  int r = static_cast<int>(s.size());
  if (i < 0) i += r;
  if (i < 0 || i >= r) throw ShapeError("dim index out of range for " + shape_str(s));
  return s[static_cast<size_t>(i)];
}

template <typename T>
int64_t Tensor<T>::numel() const {
  return static_cast<int64_t>(ref().values.size());
}

template <typename T>
std::span<const T> Tensor<T>::data() const {
  return {ref().values.data(), ref().values.size()};
}

template <typename T>
std::span<T> Tensor<T>::mutable_data() {
  return {ref().values.data(), ref().values.size()};
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw ContractError("item() requires a scalar tensor, shape is " + shape_str(shape()));
  return ref().values[0];
}

template <typename T>
T Tensor<T>::at(std::initializer_list<int64_t> idx) const {
  const Shape& s = shape();
  if (idx.size() != s.size()) throw ShapeError("index rank mismatch for " + shape_str(s));
  int64_t off = 0;
  size_t i = 0;
  for (int64_t v : idx) {
    if (v < 0 || v >= s[i]) throw ShapeError("index out of bounds for " + shape_str(s));
    off = off * s[i] + v;
    ++i;
  }
  return ref().values[static_cast<size_t>(off)];
}

template <typename T>
bool Tensor<T>::requires_grad() const {
  return ref().requires_grad;
}

template <typename T>
Tensor<T>& Tensor<T>::set_requires_grad(bool value) {
  ref().requires_grad = value;
  return *this;
}

template <typename T>
bool Tensor<T>::has_grad() const {
  return !ref().grad.empty();
}

template <typename T>
std::span<T> Tensor<T>::grad() {
  auto& p = ref();
  if (p.grad.empty()) p.grad.assign(p.values.size(), T(0));
  return {p.grad.data(), p.grad.size()};
}

template <typename T>
std::span<const T> Tensor<T>::grad_view() const {
  auto& p = ref();
  return {p.grad.data(), p.grad.size()};
}

template <typename T>
void Tensor<T>::zero_grad() {
  auto& p = ref();
  if (!p.grad.empty()) p.grad.assign(p.values.size(), T(0));
}

template <typename T>
void Tensor<T>::accumulate_grad(std::span<const T> delta) {
  auto g = grad();
  if (delta.size() != g.size()) throw ShapeError("grad accumulation size mismatch");
  for (size_t i = 0; i < g.size(); ++i) g[i] += delta[i];
}

template <typename T>
bool Tensor<T>::all_finite() const {
  for (T v : ref().values) {
    if (!std::isfinite(static_cast<double>(v))) return false;
  }
  return true;
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace siamix
