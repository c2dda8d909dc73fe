#pragma once

#include <functional>
#include <vector>

#include "siamix/tensor.hpp"

namespace siamix {

// Reverse-mode tape. Ops executed while a Graph is active (via GraphScope) and
// fed by at least one requires_grad tensor append a backward closure; backward()
// seeds d(loss)/d(loss) = 1 and replays the tape once, in reverse. Append order
// is execution order, so the topological invariant holds by construction.
// A Graph is single-owner: do not share one across concurrent training steps.
template <typename T>
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  void record(std::function<void()> backward_fn) { nodes_.push_back(std::move(backward_fn)); }

  size_t node_count() const { return nodes_.size(); }

  // Populates grads of every requires_grad tensor on the tape. Gradient
  // accumulation is additive across fan-out. Contract: loss is scalar.
  void backward(Tensor<T> loss) {
    if (loss.numel() != 1) {
      throw ContractError("backward requires a scalar loss, shape is " + shape_str(loss.shape()));
    }
    loss.grad()[0] += T(1);
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
  }

  static Graph* active() { return active_; }

  class Scope {
   public:
    explicit Scope(Graph& g) : prev_(active_) { active_ = &g; }
    ~Scope() { active_ = prev_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Graph* prev_;
  };

 private:
  static thread_local Graph* active_;
  std::vector<std::function<void()>> nodes_;
};

template <typename T>
using GraphScope = typename Graph<T>::Scope;

// free-function spelling of the same operation
template <typename T>
void backward(Graph<T>& graph, const Tensor<T>& loss) {
  graph.backward(loss);
}

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace siamix
