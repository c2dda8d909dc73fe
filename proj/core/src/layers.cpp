#include "siamix/layers.hpp"

#include <cmath>

namespace siamix {

template <typename T>
Tensor<T> tokens_to_image(const Tensor<T>& tokens, int64_t h, int64_t w) {
  if (tokens.rank() != 3) throw ShapeError("tokens_to_image expects [B,N,C], got " + shape_str(tokens.shape()));
  const int64_t B = tokens.dim(0), N = tokens.dim(1), C = tokens.dim(2);
  if (N != h * w)
    throw ShapeError("tokens_to_image: N=" + std::to_string(N) + " != " + std::to_string(h) + "x" + std::to_string(w));
  Tensor<T> t = ops::transpose_last(tokens);  // [B,C,N]
  return ops::reshape(t, {B, C, h, w});
}

template <typename T>
Tensor<T> image_to_tokens(const Tensor<T>& image) {
  if (image.rank() != 4) throw ShapeError("image_to_tokens expects [B,C,h,w], got " + shape_str(image.shape()));
  const int64_t B = image.dim(0), C = image.dim(1), h = image.dim(2), w = image.dim(3);
  Tensor<T> t = ops::reshape(image, {B, C, h * w});
  return ops::transpose_last(t);  // [B,N,C]
}

template <typename T>
Tensor<T> multi_head_attention(const Tensor<T>& q, const Tensor<T>& k, const Tensor<T>& v,
                               int heads, Tensor<T>* attn_trace) {
  const int64_t B = q.dim(0), N = q.dim(1), C = q.dim(2);
  const int64_t M = k.dim(1);
  if (k.dim(0) != B || v.dim(0) != B || k.dim(2) != C || v.dim(2) != C || v.dim(1) != M)
    throw ShapeError("attention: q " + shape_str(q.shape()) + ", k " + shape_str(k.shape()) +
                     ", v " + shape_str(v.shape()));
  if (heads < 1 || C % heads != 0)
    throw ShapeError("attention: channels " + std::to_string(C) + " not divisible by heads " +
                     std::to_string(heads));
  const int64_t d = C / heads;

  auto split = [&](const Tensor<T>& t, int64_t len) {
    Tensor<T> r = ops::reshape(t, {B, len, heads, d});
    return ops::permute(r, {0, 2, 1, 3});  // [B,H,len,d]
  };
  Tensor<T> q4 = split(q, N);
  Tensor<T> k4 = split(k, M);
  Tensor<T> v4 = split(v, M);

  Tensor<T> scores = ops::matmul(q4, ops::transpose_last(k4));  // [B,H,N,M]
  scores = ops::scale(scores, static_cast<T>(1.0 / std::sqrt(static_cast<double>(d))));
  Tensor<T> probs = ops::softmax(scores, -1);
  if (attn_trace) *attn_trace = probs;
  Tensor<T> ctx = ops::matmul(probs, v4);            // [B,H,N,d]
  Tensor<T> merged = ops::permute(ctx, {0, 2, 1, 3});  // [B,N,H,d]
  return ops::reshape(merged, {B, N, C});
}

template Tensor<float> tokens_to_image(const Tensor<float>&, int64_t, int64_t);
template Tensor<double> tokens_to_image(const Tensor<double>&, int64_t, int64_t);
template Tensor<float> image_to_tokens(const Tensor<float>&);
template Tensor<double> image_to_tokens(const Tensor<double>&);
template Tensor<float> multi_head_attention(const Tensor<float>&, const Tensor<float>&,
                                            const Tensor<float>&, int, Tensor<float>*);
template Tensor<double> multi_head_attention(const Tensor<double>&, const Tensor<double>&,
                                             const Tensor<double>&, int, Tensor<double>*);

template struct LinearLayer<float>;
template struct LinearLayer<double>;

}  // namespace siamix
