#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gsq {

/// out[i] = fn(in[i]) evaluated on up to hardware_concurrency threads. Results
/// are stored by index, so the output order never depends on scheduling. The
/// first exception thrown by any worker is rethrown.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& in, Fn fn) -> std::vector<decltype(fn(in.front()))> {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  const std::size_t workers =
      std::min<std::size_t>(in.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < in.size(); i += workers) out[i] = fn(in[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace gsq
