#pragma once

#include <cstdint>
#include <vector>

#include "siamix/graph.hpp"
#include "siamix/tensor.hpp"

namespace siamix {

// Forward-pass multiply-accumulate counter (thread-local). Counts the MACs of
// matmul / linear / conv2d when enabled; backward kernels do not count.
void mac_counter_enable(bool enabled);
bool mac_counter_enabled();
void mac_counter_reset();
uint64_t mac_counter_value();

namespace ops {

// ---- elementwise ----
template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b);
// scale * x + shift
template <typename T> Tensor<T> affine(const Tensor<T>& x, T scale, T shift);
template <typename T> Tensor<T> scale(const Tensor<T>& x, T factor);
template <typename T> Tensor<T> exp(const Tensor<T>& x);
// x^p elementwise; domain x >= 0. d/dx at x==0 defined as 0; p==0 gives ones.
template <typename T> Tensor<T> pow_scalar(const Tensor<T>& x, T p);
// exact erf formulation: 0.5 * x * (1 + erf(x / sqrt(2)))
template <typename T> Tensor<T> gelu(const Tensor<T>& x);

// ---- structure ----
template <typename T> Tensor<T> reshape(const Tensor<T>& x, Shape shape);
template <typename T> Tensor<T> permute(const Tensor<T>& x, const std::vector<int>& axes);
// swap the last two axes (rank >= 2)
template <typename T> Tensor<T> transpose_last(const Tensor<T>& x);
template <typename T> Tensor<T> concat(const std::vector<Tensor<T>>& parts, int axis);
// x: [B,C,H,W] -> [B,H,W] picking a fixed channel
template <typename T> Tensor<T> select_channel(const Tensor<T>& x, int64_t channel);
// x: [B,C,H,W], labels: [B,H,W] -> [B,H,W]; out[b,y,x] = x[b, labels[b,y,x], y, x]
template <typename T> Tensor<T> gather_class(const Tensor<T>& x, const LabelMap& labels);

// ---- reductions (fixed summation order; bit-reproducible) ----
template <typename T> Tensor<T> sum(const Tensor<T>& x);
template <typename T> Tensor<T> mean(const Tensor<T>& x);

// ---- linear algebra ----
// a: [*, m, k] x b: [*, k, n] -> [*, m, n]. Leading dims must match, or either
// operand may be rank-2 and is then shared across the other's batch.
template <typename T> Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);
// x: [.., in], w: [out, in], bias: [out] or undefined -> [.., out]
template <typename T> Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias);

// ---- nn primitives ----
// cross-correlation convention (no kernel flip)
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 int stride, int padding, int groups);
int64_t conv2d_out_size(int64_t in, int64_t kernel, int stride, int padding);

// normalization over the last dimension, then affine
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, T eps);

template <typename T> Tensor<T> softmax(const Tensor<T>& x, int axis);
template <typename T> Tensor<T> log_softmax(const Tensor<T>& x, int axis);

// align-corners=false convention
template <typename T> Tensor<T> bilinear_resize(const Tensor<T>& x, int64_t out_h, int64_t out_w);

}  // namespace ops
}  // namespace siamix
