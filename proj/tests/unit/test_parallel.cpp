#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "csturm/parallel.hpp"

using namespace csturm;

TEST_CASE("thread count follows the environment") {
  setenv("COMPLEX_STURM_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("COMPLEX_STURM_THREADS", "0", 1);
  CHECK(thread_count() >= 1);
  CHECK(thread_count() <= 8);
  setenv("COMPLEX_STURM_THREADS", "junk", 1);
  CHECK(thread_count() >= 1);
  unsetenv("COMPLEX_STURM_THREADS");
}

TEST_CASE("every index runs once") {
  for (const char* t : {"1", "4"}) {
    setenv("COMPLEX_STURM_THREADS", t, 1);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
    bool once = true;
    for (auto& h : hits) once = once && h == 1;
    CHECK(once);
    parallel_for(0, [](std::size_t) { FAIL("called"); });
  }
  unsetenv("COMPLEX_STURM_THREADS");
}

TEST_CASE("lowest failing index is rethrown") {
  setenv("COMPLEX_STURM_THREADS", "4", 1);
  std::atomic<int> done{0};
  try {
    parallel_for(64, [&](std::size_t i) {
      ++done;
      if (i == 40 || i == 7) throw std::runtime_error(std::to_string(i));
    });
    FAIL("no throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  CHECK(done == 64);
  unsetenv("COMPLEX_STURM_THREADS");
}
