#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "yoshida/core/error.hpp"

namespace yoshida {

namespace detail {
inline int& thread_override() {
  static int n = 0;
  return n;
}
}  // namespace detail

/// 0 restores the default (YOSHIDA_THREADS, else hardware concurrency).
inline void set_thread_count(int n) {
  if (n < 0) throw UsageError("thread count must be non-negative");
  detail::thread_override() = n;
}

inline int thread_count() {
  if (detail::thread_override() > 0) return detail::thread_override();
  if (const char* env = std::getenv("YOSHIDA_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("YOSHIDA_THREADS must be a positive integer, got \"") + env + "\"");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// results[i] = f(i). Work is claimed dynamically but results are stored by index, so the
/// output never depends on the thread count. The first exception thrown is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace yoshida
