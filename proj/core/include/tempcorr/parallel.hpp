#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

namespace tempcorr {

// Worker cap from TEMPCORR_THREADS, falling back to hardware concurrency.
std::size_t worker_count();

// Runs body(k) for k in [0, n) on up to worker_count() threads. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Results are stored by index, so output order never depends on scheduling.
template <typename F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  parallel_for(n, [&](std::size_t k) { slots[k].emplace(f(k)); });
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace tempcorr
