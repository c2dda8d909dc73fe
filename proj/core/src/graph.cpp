#include "siamix/graph.hpp"

namespace siamix {

template <typename T>
thread_local Graph<T>* Graph<T>::active_ = nullptr;

template class Graph<float>;
template class Graph<double>;

}  // namespace siamix
