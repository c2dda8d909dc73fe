#include "siamix/optim.hpp"

#include <cmath>

namespace siamix {

double poly_lr(double lr0, int64_t t, int64_t total, double power) {
  if (t < 0 || t > total) throw ContractError("poly_lr: need 0 <= t <= T");
  if (total < 1 || lr0 <= 0 || power <= 0) throw ContractError("poly_lr: bad schedule parameters");
  return lr0 * std::pow(1.0 - static_cast<double>(t) / static_cast<double>(total), power);
}

template <typename T>
void adamw_step(std::vector<std::pair<std::string, Tensor<T>>>& params, OptimState<T>& state, double lr) {
  if (lr < 0) throw ContractError("adamw_step: lr must be >= 0");
  if (state.m.size() != params.size()) throw ContractError("adamw_step: state not initialized for these params");
  state.step += 1;
  const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double decay = lr * state.cfg.weight_decay;

  for (size_t pi = 0; pi < params.size(); ++pi) {
    auto& tensor = params[pi].second;
    auto theta = tensor.mutable_data();
    auto g = tensor.grad();
    auto& m = state.m[pi];
    auto& v = state.v[pi];
    for (size_t i = 0; i < theta.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      if (std::isnan(gi))
        throw NumericError("NaN gradient in parameter '" + params[pi].first + "'");
      const double mi = b1 * static_cast<double>(m[i]) + (1.0 - b1) * gi;
      const double vi = b2 * static_cast<double>(v[i]) + (1.0 - b2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      double th = static_cast<double>(theta[i]);
      th -= decay * th;
      th -= lr * (mi / bc1) / (std::sqrt(vi / bc2) + state.cfg.eps);
      theta[i] = static_cast<T>(th);
    }
  }
}

template void adamw_step(std::vector<std::pair<std::string, Tensor<float>>>&, OptimState<float>&, double);
template void adamw_step(std::vector<std::pair<std::string, Tensor<double>>>&, OptimState<double>&, double);

}  // namespace siamix
