#ifndef ICORE_PARALLEL_HPP
#define ICORE_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

namespace icore {

// Every kernel with an OpenMP path keeps its serial counterpart; both are
// required to produce identical results (no cross-thread floating-point
// reductions).
enum class Execution { serial, parallel };

template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace icore

#endif  // ICORE_PARALLEL_HPP
