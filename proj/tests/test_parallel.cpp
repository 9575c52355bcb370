#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "tensordict/parallel.hpp"

using namespace tensordict;

TEST_SUITE("parallel") {

TEST_CASE("every index runs exactly once, and the first error propagates") {
  for (int threads : {1, 3}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    std::vector<std::atomic<int>> hits(100);
    parallel_for(0, 100, [&](Index i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(0, 10, [](Index i) { if (i == 4) throw std::runtime_error("boom"); }),
                    std::runtime_error);
  }
  set_thread_count(1);
}

}
