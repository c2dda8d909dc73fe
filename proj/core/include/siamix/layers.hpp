#pragma once

#include <functional>
#include <string>

#include "siamix/ops.hpp"
#include "siamix/rng.hpp"

namespace siamix {

// Parameter visitation callback: (dotted name, tensor). Visitation order is
// fixed by construction order, which makes checkpoints and optimizer state
// stable across runs.
template <typename T>
using ParamVisitor = std::function<void(const std::string&, Tensor<T>&)>;

constexpr double kInitStddev = 0.02;
constexpr double kNormEps = 1e-6;

template <typename T>
struct LinearLayer {
  Tensor<T> weight;  // [out, in]
  Tensor<T> bias;    // [out]

  Tensor<T> forward(const Tensor<T>& x) const { return ops::linear(x, weight, bias); }

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".weight", weight);
    fn(prefix + ".bias", bias);
  }
};

template <typename T>
struct ConvLayer {
  Tensor<T> weight;  // [out, in/groups, kh, kw]
  Tensor<T> bias;    // [out]
  int stride = 1;
  int padding = 0;
  int groups = 1;

  Tensor<T> forward(const Tensor<T>& x) const {
    return ops::conv2d(x, weight, bias, stride, padding, groups);
  }

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".weight", weight);
    fn(prefix + ".bias", bias);
  }
};

template <typename T>
struct NormLayer {
  Tensor<T> gamma;
  Tensor<T> beta;
  T eps = static_cast<T>(kNormEps);

  Tensor<T> forward(const Tensor<T>& x) const { return ops::layer_norm(x, gamma, beta, eps); }

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".gamma", gamma);
    fn(prefix + ".beta", beta);
  }
};

template <typename T>
LinearLayer<T> make_linear(int64_t in, int64_t out, Rng& rng) {
  LinearLayer<T> l;
  l.weight = Tensor<T>::truncated_normal({out, in}, rng, static_cast<T>(kInitStddev));
  l.weight.set_requires_grad(true);
  l.bias = Tensor<T>::zeros({out}, true);
  return l;
}

template <typename T>
ConvLayer<T> make_conv(int64_t in, int64_t out, int kernel, int stride, int padding, int groups, Rng& rng) {
  ConvLayer<T> c;
  c.weight = Tensor<T>::truncated_normal({out, in / groups, kernel, kernel}, rng,
                                         static_cast<T>(kInitStddev));
  c.weight.set_requires_grad(true);
  c.bias = Tensor<T>::zeros({out}, true);
  c.stride = stride;
  c.padding = padding;
  c.groups = groups;
  return c;
}

template <typename T>
NormLayer<T> make_norm(int64_t channels) {
  NormLayer<T> n;
  n.gamma = Tensor<T>::full({channels}, T(1));
  n.gamma.set_requires_grad(true);
  n.beta = Tensor<T>::zeros({channels}, true);
  return n;
}

// [B,N,C] -> [B,C,h,w]
template <typename T>
Tensor<T> tokens_to_image(const Tensor<T>& tokens, int64_t h, int64_t w);

// [B,C,h,w] -> [B,h*w,C]
template <typename T>
Tensor<T> image_to_tokens(const Tensor<T>& image);

// Scaled dot-product attention over heads. q: [B,N,C], k/v: [B,M,C].
// Output [B,N,C] (pre output-projection). When attn_trace is non-null it
// receives the post-softmax weights [B,heads,N,M].
template <typename T>
Tensor<T> multi_head_attention(const Tensor<T>& q, const Tensor<T>& k, const Tensor<T>& v,
                               int heads, Tensor<T>* attn_trace = nullptr);

extern template struct LinearLayer<float>;
extern template struct LinearLayer<double>;

}  // namespace siamix
