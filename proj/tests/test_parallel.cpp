#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "aqs/parallel.hpp"
#include "doctest.h"

using namespace aqs;

TEST_CASE("hardware thread count is sane") {
  CHECK(hardware_threads() >= 1);
}

TEST_CASE("parallel_for covers every index exactly once") {
  for (int threads : {1, 2, 8, 0}) {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, threads, [&](std::int64_t i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("slot writes give thread-count-independent results") {
  auto fill = [](int threads) {
    std::vector<double> out(257);
    parallel_for(257, threads, [&](std::int64_t i) {
      out[i] = static_cast<double>(i) * 1.5 - 3.0;
    });
    return out;
  };
  const auto serial = fill(1);
  CHECK(fill(2) == serial);
  CHECK(fill(8) == serial);
  CHECK(fill(0) == serial);
}

TEST_CASE("edge counts") {
  int calls = 0;
  parallel_for(0, 4, [&](std::int64_t) { ++calls; });
  CHECK(calls == 0);
  parallel_for(1, 4, [&](std::int64_t) { ++calls; });
  CHECK(calls == 1);
}

TEST_CASE("exceptions cross the thread boundary") {
  for (int threads : {1, 4}) {
    std::atomic<int> before{0};
    CHECK_THROWS_WITH_AS(
        parallel_for(100, threads,
                     [&](std::int64_t i) {
                       if (i == 57) throw std::runtime_error("slot 57 failed");
                       before.fetch_add(1);
                     }),
        "slot 57 failed", std::runtime_error);
  }
}
