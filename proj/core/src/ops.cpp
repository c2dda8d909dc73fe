#include "siamix/ops.hpp"

#include <algorithm>
#include <cmath>

namespace siamix {

namespace {
thread_local bool g_mac_enabled = false;
thread_local uint64_t g_mac_count = 0;

inline void count_macs(uint64_t n) {
  if (g_mac_enabled) g_mac_count += n;
}
}  // namespace

void mac_counter_enable(bool enabled) { g_mac_enabled = enabled; }
bool mac_counter_enabled() { return g_mac_enabled; }
void mac_counter_reset() { g_mac_count = 0; }
uint64_t mac_counter_value() { return g_mac_count; }

namespace ops {

namespace {

template <typename T>
bool want_grad(std::initializer_list<const Tensor<T>*> ins) {
  if (!Graph<T>::active()) return false;
  for (const Tensor<T>* t : ins) {
    if (t->defined() && t->requires_grad()) return true;
  }
  return false;
}

template <typename T, typename Fn>
void record(Tensor<T>& out, Fn&& backward_fn) {
  out.set_requires_grad(true);
  Graph<T>::active()->record(std::forward<Fn>(backward_fn));
}

template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (!same_shape(a.shape(), b.shape())) {
    throw ShapeError(std::string(op) + ": operands " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
}

inline double erf_gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * 0.7071067811865475244)); }
inline double erf_gelu_grad(double x) {
  // d/dx [x * Phi_erf(x)] with Phi_erf(x) = 0.5 (1 + erf(x/sqrt(2)))
  const double phi = 0.5 * (1.0 + std::erf(x * 0.7071067811865475244));
  const double pdf = std::exp(-0.5 * x * x) * 0.3989422804014326779;
  return phi + x * pdf;
}

}  // namespace

// ---------------------------------------------------------------------------
// elementwise
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape(a, b, "add");
  const bool rec = want_grad<T>({&a, &b});
  Tensor<T> out = Tensor<T>::zeros(a.shape());
  auto av = a.data(), bv = b.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] + bv[i];
  if (rec) {
    record(out, [a = a, b = b, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      if (a.requires_grad()) a.accumulate_grad(gy);
      if (b.requires_grad()) b.accumulate_grad(gy);
    });
  }
  return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape(a, b, "sub");
  const bool rec = want_grad<T>({&a, &b});
  Tensor<T> out = Tensor<T>::zeros(a.shape());
  auto av = a.data(), bv = b.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] - bv[i];
  if (rec) {
    record(out, [a = a, b = b, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      if (a.requires_grad()) a.accumulate_grad(gy);
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (size_t i = 0; i < gb.size(); ++i) gb[i] -= gy[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape(a, b, "mul");
  const bool rec = want_grad<T>({&a, &b});
  Tensor<T> out = Tensor<T>::zeros(a.shape());
  auto av = a.data(), bv = b.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * bv[i];
  if (rec) {
    record(out, [a = a, b = b, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      if (a.requires_grad()) {
        auto ga = a.grad();
        auto bv2 = b.data();
        for (size_t i = 0; i < ga.size(); ++i) ga[i] += gy[i] * bv2[i];
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        auto av2 = a.data();
        for (size_t i = 0; i < gb.size(); ++i) gb[i] += gy[i] * av2[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape(a, b, "div");
  const bool rec = want_grad<T>({&a, &b});
  Tensor<T> out = Tensor<T>::zeros(a.shape());
  auto av = a.data(), bv = b.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] / bv[i];
  if (rec) {
    record(out, [a = a, b = b, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto av2 = a.data();
      auto bv2 = b.data();
      if (a.requires_grad()) {
        auto ga = a.grad();
        for (size_t i = 0; i < ga.size(); ++i) ga[i] += gy[i] / bv2[i];
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (size_t i = 0; i < gb.size(); ++i) gb[i] -= gy[i] * av2[i] / (bv2[i] * bv2[i]);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> affine(const Tensor<T>& x, T s, T shift) {
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  auto xv = x.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = s * xv[i] + shift;
  if (rec) {
    record(out, [x = x, out, s]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      for (size_t i = 0; i < gx.size(); ++i) gx[i] += s * gy[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T factor) {
  return affine(x, factor, T(0));
}

template <typename T>
Tensor<T> exp(const Tensor<T>& x) {
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  auto xv = x.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = std::exp(xv[i]);
  if (rec) {
    record(out, [x = x, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      auto yv = out.data();
      for (size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i] * yv[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> pow_scalar(const Tensor<T>& x, T p) {
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  auto xv = x.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = p == T(0) ? T(1) : std::pow(xv[i], p);
  if (rec) {
    record(out, [x = x, out, p]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      auto xv2 = x.data();
      for (size_t i = 0; i < gx.size(); ++i) {
        if (p == T(0)) continue;
        if (xv2[i] == T(0) && p < T(1)) continue;  // subgradient choice at the domain edge
        gx[i] += gy[i] * p * std::pow(xv2[i], p - T(1));
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> gelu(const Tensor<T>& x) {
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  auto xv = x.data();
  auto ov = out.mutable_data();
  for (size_t i = 0; i < ov.size(); ++i) ov[i] = static_cast<T>(erf_gelu(static_cast<double>(xv[i])));
  if (rec) {
    record(out, [x = x, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      auto xv2 = x.data();
      for (size_t i = 0; i < gx.size(); ++i)
        gx[i] += gy[i] * static_cast<T>(erf_gelu_grad(static_cast<double>(xv2[i])));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// structure
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw ShapeError("reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(shape));
  }
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::from_data(std::move(shape),
                                       std::vector<T>(x.data().begin(), x.data().end()));
  if (rec) {
    record(out, [x = x, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      x.accumulate_grad(gy);
    });
  }
  return out;
}

namespace {

std::vector<int64_t> row_major_strides(const Shape& s) {
  std::vector<int64_t> st(s.size());
  int64_t acc = 1;
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    st[static_cast<size_t>(i)] = acc;
    acc *= s[static_cast<size_t>(i)];
  }
  return st;
}

// dst[j] = src[perm-mapped j]; used by both permute directions
template <typename T>
void permute_copy(const T* src, T* dst, const Shape& in_shape, const std::vector<int>& axes,
                  bool accumulate) {
  const auto in_strides = row_major_strides(in_shape);
  const int r = static_cast<int>(in_shape.size());
  Shape out_shape(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) out_shape[static_cast<size_t>(i)] = in_shape[static_cast<size_t>(axes[static_cast<size_t>(i)])];
  const int64_t n = shape_numel(in_shape);
  std::vector<int64_t> idx(static_cast<size_t>(r), 0);
  for (int64_t o = 0; o < n; ++o) {
    int64_t src_off = 0;
    for (int i = 0; i < r; ++i)
      src_off += idx[static_cast<size_t>(i)] * in_strides[static_cast<size_t>(axes[static_cast<size_t>(i)])];
    if (accumulate)
      dst[src_off] += src[o];
    else
      dst[o] = src[src_off];
    for (int i = r - 1; i >= 0; --i) {
      if (++idx[static_cast<size_t>(i)] < out_shape[static_cast<size_t>(i)]) break;
      idx[static_cast<size_t>(i)] = 0;
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> permute(const Tensor<T>& x, const std::vector<int>& axes) {
  const Shape& in = x.shape();
  const int r = static_cast<int>(in.size());
  if (static_cast<int>(axes.size()) != r) throw ShapeError("permute: axes rank mismatch");
  std::vector<bool> seen(static_cast<size_t>(r), false);
  for (int a : axes) {
    if (a < 0 || a >= r || seen[static_cast<size_t>(a)]) throw ShapeError("permute: invalid axes");
    seen[static_cast<size_t>(a)] = true;
  }
  const bool rec = want_grad<T>({&x});
  Shape out_shape(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) out_shape[static_cast<size_t>(i)] = in[static_cast<size_t>(axes[static_cast<size_t>(i)])];
  Tensor<T> out = Tensor<T>::zeros(out_shape);
  permute_copy(x.data().data(), out.mutable_data().data(), in, axes, false);
  if (rec) {
    record(out, [x = x, out, axes]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      // scatter-add back through the same index map
      permute_copy(gy.data(), gx.data(), x.shape(), axes, true);
    });
  }
  return out;
}

template <typename T>
Tensor<T> transpose_last(const Tensor<T>& x) {
  const int r = x.rank();
  if (r < 2) throw ShapeError("transpose_last requires rank >= 2");
  std::vector<int> axes(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) axes[static_cast<size_t>(i)] = i;
  std::swap(axes[static_cast<size_t>(r - 2)], axes[static_cast<size_t>(r - 1)]);
  return permute(x, axes);
}

template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts, int axis) {
  if (parts.empty()) throw ContractError("concat: no inputs");
  const int r = parts[0].rank();
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) throw ShapeError("concat: axis out of range");
  Shape out_shape = parts[0].shape();
  int64_t axis_total = 0;
  for (const auto& p : parts) {
    if (p.rank() != r) throw ShapeError("concat: rank mismatch");
    for (int i = 0; i < r; ++i) {
      if (i == axis) continue;
      if (p.dim(i) != out_shape[static_cast<size_t>(i)])
        throw ShapeError("concat: incompatible shapes " + shape_str(out_shape) + " vs " + shape_str(p.shape()));
    }
    axis_total += p.dim(axis);
  }
  out_shape[static_cast<size_t>(axis)] = axis_total;

  bool rec = false;
  if (Graph<T>::active()) {
    for (const auto& p : parts)
      if (p.requires_grad()) rec = true;
  }

  Tensor<T> out = Tensor<T>::zeros(out_shape);
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= out_shape[static_cast<size_t>(i)];
  for (int i = axis + 1; i < r; ++i) inner *= out_shape[static_cast<size_t>(i)];
  auto ov = out.mutable_data();
  int64_t axis_off = 0;
  for (const auto& p : parts) {
    const int64_t a = p.dim(axis);
    auto pv = p.data();
    for (int64_t o = 0; o < outer; ++o) {
      const T* src = pv.data() + o * a * inner;
      T* dst = ov.data() + (o * axis_total + axis_off) * inner;
      std::copy(src, src + a * inner, dst);
    }
    axis_off += a;
  }
  if (rec) {
    record(out, [parts = parts, out, axis, outer, inner, axis_total]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      int64_t off = 0;
      for (auto& p : parts) {
        const int64_t a = p.dim(axis);
        if (p.requires_grad()) {
          auto gp = p.grad();
          for (int64_t o = 0; o < outer; ++o) {
            const T* src = gy.data() + (o * axis_total + off) * inner;
            T* dst = gp.data() + o * a * inner;
            for (int64_t i = 0; i < a * inner; ++i) dst[i] += src[i];
          }
        }
        off += a;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> select_channel(const Tensor<T>& x, int64_t channel) {
  if (x.rank() != 4) throw ShapeError("select_channel expects [B,C,H,W], got " + shape_str(x.shape()));
  const int64_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  if (channel < 0 || channel >= C) throw ContractError("select_channel: channel out of range");
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros({B, H, W});
  auto xv = x.data();
  auto ov = out.mutable_data();
  const int64_t hw = H * W;
  for (int64_t b = 0; b < B; ++b)
    std::copy(xv.data() + (b * C + channel) * hw, xv.data() + (b * C + channel) * hw + hw,
              ov.data() + b * hw);
  if (rec) {
    record(out, [x = x, out, channel, B, C, hw]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      for (int64_t b = 0; b < B; ++b) {
        T* dst = gx.data() + (b * C + channel) * hw;
        const T* src = gy.data() + b * hw;
        for (int64_t i = 0; i < hw; ++i) dst[i] += src[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> gather_class(const Tensor<T>& x, const LabelMap& labels) {
  if (x.rank() != 4) throw ShapeError("gather_class expects [B,C,H,W], got " + shape_str(x.shape()));
  const int64_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  if (labels.shape != Shape{B, H, W})
    throw ShapeError("gather_class: labels " + shape_str(labels.shape) + " vs logits " + shape_str(x.shape()));
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros({B, H, W});
  auto xv = x.data();
  auto ov = out.mutable_data();
  const int64_t hw = H * W;
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t p = 0; p < hw; ++p) {
      const int32_t cls = labels.values[static_cast<size_t>(b * hw + p)];
      if (cls < 0 || cls >= C) {
        throw DataError("label value " + std::to_string(cls) + " out of range at pixel index " +
                        std::to_string(b * hw + p));
      }
      ov[static_cast<size_t>(b * hw + p)] = xv[static_cast<size_t>((b * C + cls) * hw + p)];
    }
  }
  if (rec) {
    record(out, [x = x, out, labels, B, C, hw]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      for (int64_t b = 0; b < B; ++b) {
        for (int64_t p = 0; p < hw; ++p) {
          const int32_t cls = labels.values[static_cast<size_t>(b * hw + p)];
          gx[static_cast<size_t>((b * C + cls) * hw + p)] += gy[static_cast<size_t>(b * hw + p)];
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// reductions
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  const bool rec = want_grad<T>({&x});
  T acc = T(0);
  for (T v : x.data()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(acc);
  if (rec) {
    record(out, [x = x, out]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      for (size_t i = 0; i < gx.size(); ++i) gx[i] += gy[0];
    });
  }
  return out;
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x) {
  const bool rec = want_grad<T>({&x});
  T acc = T(0);
  for (T v : x.data()) acc += v;
  const T inv = T(1) / static_cast<T>(x.numel());
  Tensor<T> out = Tensor<T>::scalar(acc * inv);
  if (rec) {
    record(out, [x = x, out, inv]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      auto gx = x.grad();
      for (size_t i = 0; i < gx.size(); ++i) gx[i] += gy[0] * inv;
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// matmul / linear
// ---------------------------------------------------------------------------

namespace {

// C[m,n] += A[m,k] * B[k,n]
template <typename T>
void mm_acc(const T* A, const T* B, T* C, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    T* crow = C + i * n;
    const T* arow = A + i * k;
    for (int64_t kk = 0; kk < k; ++kk) {
      const T a = arow[kk];
      const T* brow = B + kk * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += a * brow[j];
    }
  }
}

// dA[m,k] += G[m,n] * B^T  (i.e. dA[i,kk] += sum_j G[i,j] * B[kk,j])
template <typename T>
void mm_grad_a(const T* G, const T* B, T* dA, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const T* grow = G + i * n;
    T* darow = dA + i * k;
    for (int64_t kk = 0; kk < k; ++kk) {
      const T* brow = B + kk * n;
      T s = T(0);
      for (int64_t j = 0; j < n; ++j) s += grow[j] * brow[j];
      darow[kk] += s;
    }
  }
}

// dB[k,n] += A^T * G  (i.e. dB[kk,j] += sum_i A[i,kk] * G[i,j])
template <typename T>
void mm_grad_b(const T* A, const T* G, T* dB, int64_t m, int64_t k, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const T* arow = A + i * k;
    const T* grow = G + i * n;
    for (int64_t kk = 0; kk < k; ++kk) {
      const T a = arow[kk];
      T* dbrow = dB + kk * n;
      for (int64_t j = 0; j < n; ++j) dbrow[j] += a * grow[j];
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.size() < 2 || sb.size() < 2)
    throw ShapeError("matmul: operands must be rank >= 2: " + shape_str(sa) + " x " + shape_str(sb));
  const int64_t m = sa[sa.size() - 2], ka = sa[sa.size() - 1];
  const int64_t kb = sb[sb.size() - 2], n = sb[sb.size() - 1];
  Shape batch_a(sa.begin(), sa.end() - 2);
  Shape batch_b(sb.begin(), sb.end() - 2);
  const bool a_shared = batch_a.empty() && !batch_b.empty();
  const bool b_shared = batch_b.empty() && !batch_a.empty();
  if (ka != kb || (!a_shared && !b_shared && batch_a != batch_b)) {
    throw ShapeError("matmul: incompatible shapes " + shape_str(sa) + " x " + shape_str(sb));
  }
  const Shape& batch = a_shared ? batch_b : batch_a;
  const int64_t nb = shape_numel(batch);
  Shape out_shape = batch;
  out_shape.push_back(m);
  out_shape.push_back(n);

  const bool rec = want_grad<T>({&a, &b});
  Tensor<T> out = Tensor<T>::zeros(out_shape);
  const T* av = a.data().data();
  const T* bv = b.data().data();
  T* ov = out.mutable_data().data();
  count_macs(static_cast<uint64_t>(nb) * static_cast<uint64_t>(m * ka * n));
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nb; ++i) {
    mm_acc(av + (a_shared ? 0 : i * m * ka), bv + (b_shared ? 0 : i * ka * n), ov + i * m * n, m, ka, n);
  }
  if (rec) {
    record(out, [a = a, b = b, out, m, k = ka, n, nb, a_shared, b_shared]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      if (a.requires_grad()) {
        T* ga = a.grad().data();
        const T* bv2 = b.data().data();
        if (a_shared) {
          for (int64_t i = 0; i < nb; ++i)
            mm_grad_a(gv + i * m * n, bv2 + (b_shared ? 0 : i * k * n), ga, m, k, n);
        } else {
#pragma omp parallel for schedule(static)
          for (int64_t i = 0; i < nb; ++i)
            mm_grad_a(gv + i * m * n, bv2 + (b_shared ? 0 : i * k * n), ga + i * m * k, m, k, n);
        }
      }
      if (b.requires_grad()) {
        T* gb = b.grad().data();
        const T* av2 = a.data().data();
        if (b_shared) {
          for (int64_t i = 0; i < nb; ++i)
            mm_grad_b(av2 + (a_shared ? 0 : i * m * k), gv + i * m * n, gb, m, k, n);
        } else {
#pragma omp parallel for schedule(static)
          for (int64_t i = 0; i < nb; ++i)
            mm_grad_b(av2 + (a_shared ? 0 : i * m * k), gv + i * m * n, gb + i * k * n, m, k, n);
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias) {
  if (w.rank() != 2) throw ShapeError("linear: weight must be [out,in], got " + shape_str(w.shape()));
  const int64_t in = w.dim(1), outc = w.dim(0);
  if (x.dim(-1) != in) {
    throw ShapeError("linear: input " + shape_str(x.shape()) + " vs weight " + shape_str(w.shape()));
  }
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != outc))
    throw ShapeError("linear: bias shape " + shape_str(bias.shape()));
  const int64_t rows = x.numel() / in;
  Shape out_shape = x.shape();
  out_shape.back() = outc;

  const bool rec = want_grad<T>({&x, &w, &bias});
  Tensor<T> out = Tensor<T>::zeros(out_shape);
  const T* xv = x.data().data();
  const T* wv = w.data().data();
  const T* bv = bias.defined() ? bias.data().data() : nullptr;
  T* ov = out.mutable_data().data();
  count_macs(static_cast<uint64_t>(rows) * static_cast<uint64_t>(in * outc));
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < rows; ++r) {
    const T* xr = xv + r * in;
    T* yr = ov + r * outc;
    for (int64_t o = 0; o < outc; ++o) {
      const T* wrow = wv + o * in;
      T s = bv ? bv[o] : T(0);
      for (int64_t i = 0; i < in; ++i) s += xr[i] * wrow[i];
      yr[o] = s;
    }
  }
  if (rec) {
    record(out, [x = x, w = w, bias = bias, out, rows, in, outc]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      if (x.requires_grad()) {
        T* gx = x.grad().data();
        const T* wv2 = w.data().data();
#pragma omp parallel for schedule(static)
        for (int64_t r = 0; r < rows; ++r) {
          const T* gr = gv + r * outc;
          T* gxr = gx + r * in;
          for (int64_t o = 0; o < outc; ++o) {
            const T g = gr[o];
            const T* wrow = wv2 + o * in;
            for (int64_t i = 0; i < in; ++i) gxr[i] += g * wrow[i];
          }
        }
      }
      if (w.requires_grad()) {
        T* gw = w.grad().data();
        const T* xv2 = x.data().data();
#pragma omp parallel for schedule(static)
        for (int64_t o = 0; o < outc; ++o) {
          T* gwrow = gw + o * in;
          for (int64_t r = 0; r < rows; ++r) {
            const T g = gv[r * outc + o];
            const T* xr = xv2 + r * in;
            for (int64_t i = 0; i < in; ++i) gwrow[i] += g * xr[i];
          }
        }
      }
      if (bias.defined() && bias.requires_grad()) {
        auto gb = bias.grad();
        for (int64_t o = 0; o < outc; ++o) {
          T s = T(0);
          for (int64_t r = 0; r < rows; ++r) s += gv[r * outc + o];
          gb[static_cast<size_t>(o)] += s;
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// conv2d
// ---------------------------------------------------------------------------

int64_t conv2d_out_size(int64_t in, int64_t kernel, int stride, int padding) {
  return (in + 2 * padding - kernel) / stride + 1;
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 int stride, int padding, int groups) {
  if (x.rank() != 4 || w.rank() != 4)
    throw ShapeError("conv2d: x " + shape_str(x.shape()) + ", w " + shape_str(w.shape()));
  const int64_t B = x.dim(0), Cin = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int64_t Cout = w.dim(0), Cw = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  if (groups < 1 || Cin % groups != 0 || Cout % groups != 0)
    throw ShapeError("conv2d: channels not divisible by groups");
  if (Cw != Cin / groups)
    throw ShapeError("conv2d: weight " + shape_str(w.shape()) + " does not match input channels " +
                     std::to_string(Cin) + " with groups " + std::to_string(groups));
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != Cout))
    throw ShapeError("conv2d: bias shape " + shape_str(bias.shape()));
  const int64_t Ho = conv2d_out_size(H, kh, stride, padding);
  const int64_t Wo = conv2d_out_size(W, kw, stride, padding);
  if (Ho < 1 || Wo < 1)
    throw ShapeError("conv2d: non-positive output size for input " + shape_str(x.shape()));

  const int64_t cin_g = Cin / groups, cout_g = Cout / groups;
  const bool rec = want_grad<T>({&x, &w, &bias});
  Tensor<T> out = Tensor<T>::zeros({B, Cout, Ho, Wo});
  const T* xv = x.data().data();
  const T* wv = w.data().data();
  const T* bv = bias.defined() ? bias.data().data() : nullptr;
  T* ov = out.mutable_data().data();
  count_macs(static_cast<uint64_t>(B * Cout * Ho * Wo) * static_cast<uint64_t>(cin_g * kh * kw));

#pragma omp parallel for schedule(static) collapse(2)
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t co = 0; co < Cout; ++co) {
      const int64_t g = co / cout_g;
      T* oplane = ov + (b * Cout + co) * Ho * Wo;
      for (int64_t oy = 0; oy < Ho; ++oy) {
        for (int64_t ox = 0; ox < Wo; ++ox) {
          T s = bv ? bv[co] : T(0);
          for (int64_t ci = 0; ci < cin_g; ++ci) {
            const T* xplane = xv + (b * Cin + g * cin_g + ci) * H * W;
            const T* wk = wv + ((co * cin_g + ci) * kh) * kw;
            for (int64_t ky = 0; ky < kh; ++ky) {
              const int64_t iy = oy * stride - padding + ky;
              if (iy < 0 || iy >= H) continue;
              for (int64_t kx = 0; kx < kw; ++kx) {
                const int64_t ix = ox * stride - padding + kx;
                if (ix < 0 || ix >= W) continue;
                s += xplane[iy * W + ix] * wk[ky * kw + kx];
              }
            }
          }
          oplane[oy * Wo + ox] = s;
        }
      }
    }
  }

  if (rec) {
    record(out, [x = x, w = w, bias = bias, out, stride, padding, groups,
                 B, Cin, H, W, Cout, kh, kw, Ho, Wo, cin_g, cout_g]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      const T* xv2 = x.data().data();
      const T* wv2 = w.data().data();
      if (x.requires_grad()) {
        T* gx = x.grad().data();
#pragma omp parallel for schedule(static) collapse(2)
        for (int64_t b = 0; b < B; ++b) {
          for (int64_t ci_full = 0; ci_full < Cin; ++ci_full) {
            const int64_t g = ci_full / cin_g;
            const int64_t ci = ci_full % cin_g;
            T* gxplane = gx + (b * Cin + ci_full) * H * W;
            for (int64_t iy = 0; iy < H; ++iy) {
              for (int64_t ix = 0; ix < W; ++ix) {
                T s = T(0);
                for (int64_t co = g * cout_g; co < (g + 1) * cout_g; ++co) {
                  const T* gplane = gv + (b * Cout + co) * Ho * Wo;
                  const T* wk = wv2 + ((co * cin_g + ci) * kh) * kw;
                  for (int64_t ky = 0; ky < kh; ++ky) {
                    const int64_t num_y = iy + padding - ky;
                    if (num_y < 0 || num_y % stride != 0) continue;
                    const int64_t oy = num_y / stride;
                    if (oy >= Ho) continue;
                    for (int64_t kx = 0; kx < kw; ++kx) {
                      const int64_t num_x = ix + padding - kx;
                      if (num_x < 0 || num_x % stride != 0) continue;
                      const int64_t ox = num_x / stride;
                      if (ox >= Wo) continue;
                      s += gplane[oy * Wo + ox] * wk[ky * kw + kx];
                    }
                  }
                }
                gxplane[iy * W + ix] += s;
              }
            }
          }
        }
      }
      if (w.requires_grad()) {
        T* gw = w.grad().data();
#pragma omp parallel for schedule(static)
        for (int64_t co = 0; co < Cout; ++co) {
          const int64_t g = co / cout_g;
          for (int64_t ci = 0; ci < cin_g; ++ci) {
            for (int64_t ky = 0; ky < kh; ++ky) {
              for (int64_t kx = 0; kx < kw; ++kx) {
                T s = T(0);
                for (int64_t b = 0; b < B; ++b) {
                  const T* gplane = gv + (b * Cout + co) * Ho * Wo;
                  const T* xplane = xv2 + (b * Cin + g * cin_g + ci) * H * W;
                  for (int64_t oy = 0; oy < Ho; ++oy) {
                    const int64_t iy = oy * stride - padding + ky;
                    if (iy < 0 || iy >= H) continue;
                    for (int64_t ox = 0; ox < Wo; ++ox) {
                      const int64_t ix = ox * stride - padding + kx;
                      if (ix < 0 || ix >= W) continue;
                      s += gplane[oy * Wo + ox] * xplane[iy * W + ix];
                    }
                  }
                }
                gw[((co * cin_g + ci) * kh + ky) * kw + kx] += s;
              }
            }
          }
        }
      }
      if (bias.defined() && bias.requires_grad()) {
        auto gb = bias.grad();
        for (int64_t co = 0; co < Cout; ++co) {
          T s = T(0);
          for (int64_t b = 0; b < B; ++b) {
            const T* gplane = gv + (b * Cout + co) * Ho * Wo;
            for (int64_t i = 0; i < Ho * Wo; ++i) s += gplane[i];
          }
          gb[static_cast<size_t>(co)] += s;
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// layer_norm
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, T eps) {
  const int64_t C = x.dim(-1);
  if (gamma.rank() != 1 || gamma.dim(0) != C || beta.rank() != 1 || beta.dim(0) != C)
    throw ShapeError("layer_norm: gamma/beta must be [" + std::to_string(C) + "], got " +
                     shape_str(gamma.shape()) + " / " + shape_str(beta.shape()));
  if (!(eps > T(0))) throw ContractError("layer_norm: eps must be positive");
  const int64_t rows = x.numel() / C;
  const bool rec = want_grad<T>({&x, &gamma, &beta});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  const T* xv = x.data().data();
  const T* gv = gamma.data().data();
  const T* bv = beta.data().data();
  T* ov = out.mutable_data().data();
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < rows; ++r) {
    const T* xr = xv + r * C;
    T* yr = ov + r * C;
    T mu = T(0);
    for (int64_t c = 0; c < C; ++c) mu += xr[c];
    mu /= static_cast<T>(C);
    T var = T(0);
    for (int64_t c = 0; c < C; ++c) {
      const T d = xr[c] - mu;
      var += d * d;
    }
    var /= static_cast<T>(C);
    const T inv = T(1) / std::sqrt(var + eps);
    for (int64_t c = 0; c < C; ++c) yr[c] = gv[c] * ((xr[c] - mu) * inv) + bv[c];
  }
  if (rec) {
    record(out, [x = x, gamma = gamma, beta = beta, out, rows, C, eps]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gyv = gy.data();
      const T* xv2 = x.data().data();
      const T* gv2 = gamma.data().data();
      if (x.requires_grad()) {
        T* gx = x.grad().data();
#pragma omp parallel for schedule(static)
        for (int64_t r = 0; r < rows; ++r) {
          const T* xr = xv2 + r * C;
          const T* gr = gyv + r * C;
          T* gxr = gx + r * C;
          T mu = T(0);
          for (int64_t c = 0; c < C; ++c) mu += xr[c];
          mu /= static_cast<T>(C);
          T var = T(0);
          for (int64_t c = 0; c < C; ++c) {
            const T d = xr[c] - mu;
            var += d * d;
          }
          var /= static_cast<T>(C);
          const T inv = T(1) / std::sqrt(var + eps);
          T m1 = T(0), m2 = T(0);
          for (int64_t c = 0; c < C; ++c) {
            const T xh = (xr[c] - mu) * inv;
            const T dyh = gr[c] * gv2[c];
            m1 += dyh;
            m2 += dyh * xh;
          }
          m1 /= static_cast<T>(C);
          m2 /= static_cast<T>(C);
          for (int64_t c = 0; c < C; ++c) {
            const T xh = (xr[c] - mu) * inv;
            const T dyh = gr[c] * gv2[c];
            gxr[c] += inv * (dyh - m1 - xh * m2);
          }
        }
      }
      if (gamma.requires_grad() || beta.requires_grad()) {
        T* gg = gamma.requires_grad() ? gamma.grad().data() : nullptr;
        T* gb = beta.requires_grad() ? beta.grad().data() : nullptr;
        for (int64_t r = 0; r < rows; ++r) {
          const T* xr = xv2 + r * C;
          const T* gr = gyv + r * C;
          T mu = T(0);
          for (int64_t c = 0; c < C; ++c) mu += xr[c];
          mu /= static_cast<T>(C);
          T var = T(0);
          for (int64_t c = 0; c < C; ++c) {
            const T d = xr[c] - mu;
            var += d * d;
          }
          var /= static_cast<T>(C);
          const T inv = T(1) / std::sqrt(var + eps);
          for (int64_t c = 0; c < C; ++c) {
            if (gg) gg[c] += gr[c] * ((xr[c] - mu) * inv);
            if (gb) gb[c] += gr[c];
          }
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// softmax / log_softmax
// ---------------------------------------------------------------------------

namespace {

struct AxisSplit {
  int64_t outer, len, inner;
};

AxisSplit split_axis(const Shape& s, int axis) {
  const int r = static_cast<int>(s.size());
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) throw ShapeError("axis out of range for " + shape_str(s));
  AxisSplit a{1, s[static_cast<size_t>(axis)], 1};
  for (int i = 0; i < axis; ++i) a.outer *= s[static_cast<size_t>(i)];
  for (int i = axis + 1; i < r; ++i) a.inner *= s[static_cast<size_t>(i)];
  return a;
}

}  // namespace

template <typename T>
Tensor<T> softmax(const Tensor<T>& x, int axis) {
  const AxisSplit ax = split_axis(x.shape(), axis);
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  const T* xv = x.data().data();
  T* ov = out.mutable_data().data();
#pragma omp parallel for schedule(static)
  for (int64_t o = 0; o < ax.outer; ++o) {
    for (int64_t in = 0; in < ax.inner; ++in) {
      const int64_t base = o * ax.len * ax.inner + in;
      T mx = xv[base];
      for (int64_t j = 1; j < ax.len; ++j) mx = std::max(mx, xv[base + j * ax.inner]);
      T denom = T(0);
      for (int64_t j = 0; j < ax.len; ++j) {
        const T e = std::exp(xv[base + j * ax.inner] - mx);
        ov[base + j * ax.inner] = e;
        denom += e;
      }
      const T inv = T(1) / denom;
      for (int64_t j = 0; j < ax.len; ++j) ov[base + j * ax.inner] *= inv;
    }
  }
  if (rec) {
    record(out, [x = x, out, ax]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      const T* sv = out.data().data();
      T* gx = x.grad().data();
#pragma omp parallel for schedule(static)
      for (int64_t o = 0; o < ax.outer; ++o) {
        for (int64_t in = 0; in < ax.inner; ++in) {
          const int64_t base = o * ax.len * ax.inner + in;
          T dot = T(0);
          for (int64_t j = 0; j < ax.len; ++j) dot += gv[base + j * ax.inner] * sv[base + j * ax.inner];
          for (int64_t j = 0; j < ax.len; ++j) {
            const int64_t p = base + j * ax.inner;
            gx[p] += sv[p] * (gv[p] - dot);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> log_softmax(const Tensor<T>& x, int axis) {
  const AxisSplit ax = split_axis(x.shape(), axis);
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros(x.shape());
  const T* xv = x.data().data();
  T* ov = out.mutable_data().data();
#pragma omp parallel for schedule(static)
  for (int64_t o = 0; o < ax.outer; ++o) {
    for (int64_t in = 0; in < ax.inner; ++in) {
      const int64_t base = o * ax.len * ax.inner + in;
      T mx = xv[base];
      for (int64_t j = 1; j < ax.len; ++j) mx = std::max(mx, xv[base + j * ax.inner]);
      T denom = T(0);
      for (int64_t j = 0; j < ax.len; ++j) denom += std::exp(xv[base + j * ax.inner] - mx);
      const T lse = mx + std::log(denom);
      for (int64_t j = 0; j < ax.len; ++j) ov[base + j * ax.inner] = xv[base + j * ax.inner] - lse;
    }
  }
  if (rec) {
    record(out, [x = x, out, ax]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      const T* yv = out.data().data();
      T* gx = x.grad().data();
#pragma omp parallel for schedule(static)
      for (int64_t o = 0; o < ax.outer; ++o) {
        for (int64_t in = 0; in < ax.inner; ++in) {
          const int64_t base = o * ax.len * ax.inner + in;
          T gsum = T(0);
          for (int64_t j = 0; j < ax.len; ++j) gsum += gv[base + j * ax.inner];
          for (int64_t j = 0; j < ax.len; ++j) {
            const int64_t p = base + j * ax.inner;
            gx[p] += gv[p] - std::exp(yv[p]) * gsum;
          }
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// bilinear_resize
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> bilinear_resize(const Tensor<T>& x, int64_t out_h, int64_t out_w) {
  if (x.rank() != 4) throw ShapeError("bilinear_resize expects [B,C,H,W], got " + shape_str(x.shape()));
  if (out_h < 1 || out_w < 1) throw ContractError("bilinear_resize: output size must be >= 1");
  const int64_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const bool rec = want_grad<T>({&x});
  Tensor<T> out = Tensor<T>::zeros({B, C, out_h, out_w});
  const T* xv = x.data().data();
  T* ov = out.mutable_data().data();
  const double sy = static_cast<double>(H) / static_cast<double>(out_h);
  const double sx = static_cast<double>(W) / static_cast<double>(out_w);
  const int64_t planes = B * C;
#pragma omp parallel for schedule(static)
  for (int64_t pl = 0; pl < planes; ++pl) {
    const T* src = xv + pl * H * W;
    T* dst = ov + pl * out_h * out_w;
    for (int64_t oy = 0; oy < out_h; ++oy) {
      const double fy = (static_cast<double>(oy) + 0.5) * sy - 0.5;
      int64_t y0 = static_cast<int64_t>(std::floor(fy));
      const double wy = fy - static_cast<double>(y0);
      const int64_t y0c = std::clamp<int64_t>(y0, 0, H - 1);
      const int64_t y1c = std::clamp<int64_t>(y0 + 1, 0, H - 1);
      for (int64_t ox = 0; ox < out_w; ++ox) {
        const double fx = (static_cast<double>(ox) + 0.5) * sx - 0.5;
        int64_t x0 = static_cast<int64_t>(std::floor(fx));
        const double wx = fx - static_cast<double>(x0);
        const int64_t x0c = std::clamp<int64_t>(x0, 0, W - 1);
        const int64_t x1c = std::clamp<int64_t>(x0 + 1, 0, W - 1);
        const double v00 = static_cast<double>(src[y0c * W + x0c]);
        const double v01 = static_cast<double>(src[y0c * W + x1c]);
        const double v10 = static_cast<double>(src[y1c * W + x0c]);
        const double v11 = static_cast<double>(src[y1c * W + x1c]);
        const double top = v00 + (v01 - v00) * wx;
        const double bot = v10 + (v11 - v10) * wx;
        dst[oy * out_w + ox] = static_cast<T>(top + (bot - top) * wy);
      }
    }
  }
  if (rec) {
    record(out, [x = x, out, B, C, H, W, out_h, out_w, sy, sx]() mutable {
      auto gy = out.grad_view();
      if (gy.empty()) return;
      const T* gv = gy.data();
      T* gx = x.grad().data();
      const int64_t planes = B * C;
#pragma omp parallel for schedule(static)
      for (int64_t pl = 0; pl < planes; ++pl) {
        const T* gsrc = gv + pl * out_h * out_w;
        T* gdst = gx + pl * H * W;
        for (int64_t oy = 0; oy < out_h; ++oy) {
          const double fy = (static_cast<double>(oy) + 0.5) * sy - 0.5;
          int64_t y0 = static_cast<int64_t>(std::floor(fy));
          const double wy = fy - static_cast<double>(y0);
          const int64_t y0c = std::clamp<int64_t>(y0, 0, H - 1);
          const int64_t y1c = std::clamp<int64_t>(y0 + 1, 0, H - 1);
          for (int64_t ox = 0; ox < out_w; ++ox) {
            const double fx = (static_cast<double>(ox) + 0.5) * sx - 0.5;
            int64_t x0 = static_cast<int64_t>(std::floor(fx));
            const double wx = fx - static_cast<double>(x0);
            const int64_t x0c = std::clamp<int64_t>(x0, 0, W - 1);
            const int64_t x1c = std::clamp<int64_t>(x0 + 1, 0, W - 1);
            const double g = static_cast<double>(gsrc[oy * out_w + ox]);
            gdst[y0c * W + x0c] += static_cast<T>(g * (1.0 - wy) * (1.0 - wx));
            gdst[y0c * W + x1c] += static_cast<T>(g * (1.0 - wy) * wx);
            gdst[y1c * W + x0c] += static_cast<T>(g * wy * (1.0 - wx));
            gdst[y1c * W + x1c] += static_cast<T>(g * wy * wx);
          }
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// explicit instantiations
// ---------------------------------------------------------------------------

#define SIAMIX_INSTANTIATE_OPS(T)                                                          \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> sub(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> mul(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> div(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> affine(const Tensor<T>&, T, T);                                       \
  template Tensor<T> scale(const Tensor<T>&, T);                                           \
  template Tensor<T> exp(const Tensor<T>&);                                                \
  template Tensor<T> pow_scalar(const Tensor<T>&, T);                                      \
  template Tensor<T> gelu(const Tensor<T>&);                                               \
  template Tensor<T> reshape(const Tensor<T>&, Shape);                                     \
  template Tensor<T> permute(const Tensor<T>&, const std::vector<int>&);                   \
  template Tensor<T> transpose_last(const Tensor<T>&);                                     \
  template Tensor<T> concat(const std::vector<Tensor<T>>&, int);                           \
  template Tensor<T> select_channel(const Tensor<T>&, int64_t);                            \
  template Tensor<T> gather_class(const Tensor<T>&, const LabelMap&);                      \
  template Tensor<T> sum(const Tensor<T>&);                                                \
  template Tensor<T> mean(const Tensor<T>&);                                               \
  template Tensor<T> matmul(const Tensor<T>&, const Tensor<T>&);                           \
  template Tensor<T> linear(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);         \
  template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, int, int); \
  template Tensor<T> layer_norm(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);  \
  template Tensor<T> softmax(const Tensor<T>&, int);                                       \
  template Tensor<T> log_softmax(const Tensor<T>&, int);                                   \
  template Tensor<T> bilinear_resize(const Tensor<T>&, int64_t, int64_t);

SIAMIX_INSTANTIATE_OPS(float)
SIAMIX_INSTANTIATE_OPS(double)

#undef SIAMIX_INSTANTIATE_OPS

}  // namespace ops
}  // namespace siamix
