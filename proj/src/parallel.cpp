#include "bayestomo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bayestomo {
namespace {

unsigned threads_from_env() {
  const char* env = std::getenv("BAYESTOMO_THREADS");
  if (env == nullptr) return 1;
  try {
    const long v = std::stol(env);
    return v >= 1 ? static_cast<unsigned>(v) : 1u;
  } catch (...) {
    return 1;
  }
}

std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{threads_from_env()};
  return value;
}

}  // namespace

unsigned thread_count() { return thread_setting().load(); }

void set_thread_count(unsigned threads) { thread_setting().store(std::max(1u, threads)); }

void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) body(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bayestomo
