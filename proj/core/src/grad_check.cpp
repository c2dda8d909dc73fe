#include "siamix/grad_check.hpp"

#include <cmath>

namespace siamix {

template <typename T>
double grad_check(const std::function<Tensor<T>(std::vector<Tensor<T>>&)>& f,
                  std::vector<Tensor<T>> inputs, T eps) {
  if (!(eps >= T(1e-7) && eps <= T(1e-3)))
    throw ContractError("grad_check: eps must lie in [1e-7, 1e-3]");

  for (auto& t : inputs) {
    t.set_requires_grad(true);
    t.zero_grad();
  }

  // analytic gradients
  std::vector<std::vector<T>> analytic;
  {
    Graph<T> g;
    GraphScope<T> scope(g);
    Tensor<T> out = f(inputs);
    if (out.numel() != 1) throw ContractError("grad_check: f must be scalar-valued");
    g.backward(out);
    for (auto& t : inputs) {
      auto gv = t.grad();
      analytic.emplace_back(gv.begin(), gv.end());
    }
  }

  double max_rel = 0.0;
  for (size_t ti = 0; ti < inputs.size(); ++ti) {
    auto vals = inputs[ti].mutable_data();
    for (size_t i = 0; i < vals.size(); ++i) {
      const T orig = vals[i];
      vals[i] = orig + eps;
      const double fp = static_cast<double>(f(inputs).item());
      vals[i] = orig - eps;
      const double fm = static_cast<double>(f(inputs).item());
      vals[i] = orig;
      const double numeric = (fp - fm) / (2.0 * static_cast<double>(eps));
      const double a = static_cast<double>(analytic[ti][i]);
      if (std::isnan(a) || std::isnan(numeric))
        throw NumericError("grad_check: NaN gradient encountered");
      const double rel = std::abs(a - numeric) / std::max(std::abs(numeric), 1e-8);
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

template double grad_check(const std::function<Tensor<float>(std::vector<Tensor<float>>&)>&,
                           std::vector<Tensor<float>>, float);
template double grad_check(const std::function<Tensor<double>(std::vector<Tensor<double>>&)>&,
                           std::vector<Tensor<double>>, double);

}  // namespace siamix
