#include "tensordict/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tensordict {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("TENSORDICT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::atomic<int>& configured() {
  static std::atomic<int> threads{initial_threads()};
  return threads;
}

}  // namespace

int thread_count() { return configured().load(); }

void set_thread_count(int threads) { configured().store(threads < 1 ? 1 : threads); }

void parallel_for(Index begin, Index end, const std::function<void(Index)>& body) {
  if (end <= begin) return;
  const Index total = end - begin;
  const int workers = static_cast<int>(std::min<Index>(thread_count(), total));
  if (workers <= 1) {
    for (Index i = begin; i < end; ++i) body(i);
    return;
  }

  std::atomic<Index> next{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (Index i = next++; i < end; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tensordict
