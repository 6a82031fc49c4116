#include "cubiclab/concurrency.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cubiclab {

namespace {
std::atomic<int> g_override{0};
}

int worker_count() {
  if (int w = g_override.load(); w > 0) return w;
  if (const char* env = std::getenv("CUBICLAB_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_count(int workers) { g_override.store(workers < 0 ? 0 : workers); }

void parallel_slabs(std::size_t slabs, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), slabs);
  if (workers <= 1) {
    for (std::size_t s = 0; s < slabs; ++s) body(s);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t s = next.fetch_add(1); s < slabs; s = next.fetch_add(1)) {
        try {
          body(s);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cubiclab
